#include "rns/error.hpp"

namespace rns {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonHermitianInput: return "NonHermitianInput";
        case ErrorCode::NegativeOrderOnNonzeroMean: return "NegativeOrderOnNonzeroMean";
        case ErrorCode::ZeroField: return "ZeroField";
        case ErrorCode::GridMismatch: return "GridMismatch";
        case ErrorCode::InvalidFamily: return "InvalidFamily";
        case ErrorCode::NegativeTime: return "NegativeTime";
        case ErrorCode::UnconvergedQuadrature: return "UnconvergedQuadrature";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::DegenerateTail: return "DegenerateTail";
        case ErrorCode::StateInvariantViolation: return "StateInvariantViolation";
        case ErrorCode::NonFiniteState: return "NonFiniteState";
        case ErrorCode::FrequencyOverflow: return "FrequencyOverflow";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

bool is_numerical_failure(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonFiniteState:
        case ErrorCode::UnconvergedQuadrature:
        case ErrorCode::DegenerateTail:
        case ErrorCode::StateInvariantViolation:
        case ErrorCode::NonHermitianInput:
            return true;
        default:
            return false;
    }
}

}  // namespace rns
