#pragma once

#include <stdexcept>
#include <string>

namespace spencer {

/// Failure categories. The CLI maps these onto its exit codes.
enum class ErrorKind {
    input,        // malformed or inconsistent caller data
    capacity,     // request outside the supported degree range
    assembly,     // discretization produced an invalid operator
    numeric,      // solver failure or loss of accuracy
    consistency,  // two independent computation paths disagree
};

[[nodiscard]] constexpr const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::input: return "input";
        case ErrorKind::capacity: return "capacity";
        case ErrorKind::assembly: return "assembly";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::consistency: return "consistency";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace spencer
