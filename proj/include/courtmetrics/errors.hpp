#pragma once

#include <stdexcept>
#include <string>

namespace courtmetrics {

/// Machine-readable failure categories. Each maps to a stable CLI exit code
/// and a stderr token so callers can branch without parsing messages.
enum class ErrorCategory {
    io,
    parse,
    ordering,
    schema,
    insufficient_correspondences,
    degeneracy,
    point_at_infinity,
    domain,
    parameter,
    empty_track,
    interval,
    calibration_unavailable,
    script,
    config,
};

const char* to_string(ErrorCategory cat);

/// Stable process exit code for a category (documented in the README).
int exit_code(ErrorCategory cat);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& message)
        : std::runtime_error(message), category_(cat) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

[[noreturn]] inline void raise(ErrorCategory cat, const std::string& message) {
    throw Error(cat, message);
}

}  // namespace courtmetrics
