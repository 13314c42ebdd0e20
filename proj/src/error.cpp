#include "copmarkov/error.hpp"

namespace copmarkov {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NoSignChange: return "NoSignChange";
    case ErrorCode::MaxIterationsExceeded: return "MaxIterationsExceeded";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidId: return "InvalidId";
    case ErrorCode::FamilyMismatch: return "FamilyMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::NonInteriorSpec: return "NonInteriorSpec";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::ChainTooShort: return "ChainTooShort";
    case ErrorCode::DivergentSeries: return "DivergentSeries";
    case ErrorCode::NonPositiveVariance: return "NonPositiveVariance";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::OptimizerDiverged: return "OptimizerDiverged";
    case ErrorCode::SingularInformation: return "SingularInformation";
    case ErrorCode::BoundaryEstimate: return "BoundaryEstimate";
    case ErrorCode::DegenerateMean: return "DegenerateMean";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

}  // namespace copmarkov
