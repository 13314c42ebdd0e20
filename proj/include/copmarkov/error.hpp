#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace copmarkov {

enum class ErrorCode {
    NoSignChange,
    MaxIterationsExceeded,
    DomainError,
    InvalidId,
    FamilyMismatch,
    InvalidSpec,
    NonInteriorSpec,
    EmptyChain,
    ChainTooShort,
    DivergentSeries,
    NonPositiveVariance,
    SingularMatrix,
    NonPositiveDensity,
    OptimizerDiverged,
    SingularInformation,
    BoundaryEstimate,
    DegenerateMean,
    LengthMismatch,
    ParseError,
};

[[nodiscard]] std::string_view to_string(ErrorCode code);

/**
 * @brief Single exception type for every failure the library reports.
 *
 * The code identifies the failure class; what() carries a human-readable
 * diagnostic prefixed with the code name.
 */
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace copmarkov
