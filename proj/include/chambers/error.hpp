#pragma once

#include <stdexcept>
#include <string>

namespace chambers {

/// Error type for contract violations: malformed input, field mismatches,
/// exceeded search budgets. Internal invariant failures use assert instead.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace chambers
