#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rns {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes.
enum class ErrorCode {
    NonHermitianInput,
    NegativeOrderOnNonzeroMean,
    ZeroField,
    GridMismatch,
    InvalidFamily,
    NegativeTime,
    UnconvergedQuadrature,
    DomainError,
    InsufficientSamples,
    DegenerateTail,
    StateInvariantViolation,
    NonFiniteState,
    FrequencyOverflow,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// True for failures that come from the numerics (blow-up, unconverged
/// quadrature, degenerate statistics) rather than from bad input.
bool is_numerical_failure(ErrorCode code) noexcept;

}  // namespace rns
