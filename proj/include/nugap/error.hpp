#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nugap {

enum class ErrorCode {
    InvalidArgument,
    InvalidParameters,
    LengthMismatch,
    PoleOnUnitCircle,
    PoleOnGrid,
    NonFiniteOutput,
    NonPositiveTimeConstant,
    NonNegligibleImaginaryPart,
    DegenerateUpdate,
    DeadPeakBin,
    PathThroughOrigin,
    CoarseGrid,
    ConfigError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception. The code identifies the failure class so callers
/// (and tests) can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace nugap
