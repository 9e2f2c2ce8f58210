#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

namespace shiftlab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// 2^e as an exact rational, e may be negative.
inline Rational pow2(std::int64_t e) {
    Int p = Int(1) << static_cast<unsigned>(e < 0 ? -e : e);
    return e < 0 ? Rational(Int(1), p) : Rational(p);
}

inline Int pow_int(Int base, std::uint64_t e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline Int ceil_div(const Int& a, const Int& b) { return (a + b - 1) / b; }

} // namespace shiftlab
