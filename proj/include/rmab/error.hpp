#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rmab {

enum class ErrorKind {
    RowNotStochastic,
    Reducible,
    Periodic,
    NumericalFailure,
    InvalidArm,
    ProtocolViolation,
    DegenerateGap,
    AssertionFailure,
    InvalidConfig,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::RowNotStochastic: return "RowNotStochastic";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::Periodic: return "Periodic";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::InvalidArm: return "InvalidArm";
    case ErrorKind::ProtocolViolation: return "ProtocolViolation";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::AssertionFailure: return "AssertionFailure";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace rmab
