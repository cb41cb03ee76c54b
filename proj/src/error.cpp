#include "nugap/error.hpp"

namespace nugap {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::InvalidParameters: return "InvalidParameters";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::PoleOnUnitCircle: return "PoleOnUnitCircle";
        case ErrorCode::PoleOnGrid: return "PoleOnGrid";
        case ErrorCode::NonFiniteOutput: return "NonFiniteOutput";
        case ErrorCode::NonPositiveTimeConstant: return "NonPositiveTimeConstant";
        case ErrorCode::NonNegligibleImaginaryPart: return "NonNegligibleImaginaryPart";
        case ErrorCode::DegenerateUpdate: return "DegenerateUpdate";
        case ErrorCode::DeadPeakBin: return "DeadPeakBin";
        case ErrorCode::PathThroughOrigin: return "PathThroughOrigin";
        case ErrorCode::CoarseGrid: return "CoarseGrid";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace nugap
