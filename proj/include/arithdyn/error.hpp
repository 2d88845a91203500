#pragma once

#include <stdexcept>
#include <string>

namespace arithdyn {

enum class ErrorKind {
    InvalidInput,
    DomainError,
    PreconditionError,
    InvariantViolation,
    DegenerateFiber,
    ResourceLimit,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::PreconditionError: return "PreconditionError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::DegenerateFiber: return "DegenerateFiber";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    }
    return "Unknown";
}

/// Base of every error raised by the library. The kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}
    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

struct InvalidInput : Error {
    explicit InvalidInput(const std::string& w) : Error(ErrorKind::InvalidInput, w) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::DomainError, w) {}
};
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& w) : Error(ErrorKind::PreconditionError, w) {}
};
struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& w) : Error(ErrorKind::InvariantViolation, w) {}
};
struct DegenerateFiber : Error {
    explicit DegenerateFiber(const std::string& w) : Error(ErrorKind::DegenerateFiber, w) {}
};
struct ResourceLimit : Error {
    explicit ResourceLimit(const std::string& w) : Error(ErrorKind::ResourceLimit, w) {}
};

/// Exit-code contract of the command line front end.
inline int exit_code_for(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidInput: return 2;
    case ErrorKind::ResourceLimit: return 4;
    default: return 3;
    }
}

} // namespace arithdyn
