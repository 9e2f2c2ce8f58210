#pragma once

#include <stdexcept>
#include <string>

namespace shiftlab {

// Raised when an operation would need letters beyond a sequence's
// guaranteed horizon, or when equality cannot be decided from the
// available continuation rules.
struct horizon_error : std::runtime_error {
    explicit horizon_error(const std::string& what) : std::runtime_error(what) {}
};

struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct not_found_error : std::runtime_error {
    explicit not_found_error(const std::string& what) : std::runtime_error(what) {}
};

struct empty_shift_error : std::runtime_error {
    explicit empty_shift_error(const std::string& what) : std::runtime_error(what) {}
};

struct ratio_violation_error : std::runtime_error {
    explicit ratio_violation_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace shiftlab
