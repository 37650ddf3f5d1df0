#pragma once

#include <stdexcept>
#include <string>

namespace esopt {

/// Failure categories surfaced by the library. The C API and the CLI map
/// these onto error codes, so every throw site picks the narrowest kind.
enum class ErrorKind {
    parse,             ///< malformed config text
    validation,        ///< a field violates its documented invariant
    domain,            ///< argument outside a function's mathematical domain
    unknown_name,      ///< unrecognized benchmark identifier
    not_hurwitz,       ///< matrix fails the stability precondition
    singular_system,   ///< linear system numerically singular
    non_finite,        ///< NaN/Inf input where finite values are required
    invalid_time_step, ///< dt violates the integrator guard
    budget_too_small,  ///< evaluation budget below one population sweep
    io,                ///< file read/write failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace esopt
