#pragma once

#include "shiftlab/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace shiftlab {

// One verified inequality inside a construction certificate.
struct CertCheck {
    std::string name;
    std::uint32_t level = 0;
    std::size_t range_lo = 0, range_hi = 0;
    Rational bound;
    Rational actual;
    bool pass = false;
};

inline CertCheck make_check(std::string name, std::uint32_t level, std::size_t lo, std::size_t hi,
                            Rational bound, Rational actual) {
    CertCheck c;
    c.name = std::move(name);
    c.level = level;
    c.range_lo = lo;
    c.range_hi = hi;
    c.pass = actual <= bound;
    c.bound = std::move(bound);
    c.actual = std::move(actual);
    return c;
}

inline bool all_checks_pass(const std::vector<CertCheck>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

} // namespace shiftlab
