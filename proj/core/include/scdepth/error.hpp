#ifndef SCDEPTH_ERROR_HPP
#define SCDEPTH_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace scdepth {

/// Failure categories raised by the library. Every throwing operation
/// reports one of these through `Error::code()`.
enum class ErrorCode {
    InvalidArgument,
    ZeroRow,
    DimensionMismatch,
    InvalidTrials,
    ScenarioMismatch,
    MassMismatch,
    TooLarge,
    SizeLimit,
    ParseError,
    EmptyMatrix,
    InsufficientData,
    Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroRow: return "ZeroRow";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidTrials: return "InvalidTrials";
    case ErrorCode::ScenarioMismatch: return "ScenarioMismatch";
    case ErrorCode::MassMismatch: return "MassMismatch";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::EmptyMatrix: return "EmptyMatrix";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

} // namespace scdepth

#endif
