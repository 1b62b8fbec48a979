#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wallgp {

enum class ErrorCode {
    DimensionMismatch,
    NotPositiveDefinite,
    NonPositiveDiagonal,
    NonPositiveInput,
    OutOfDomain,
    DegenerateData,
    OptimizationDiverged,
    SchemaMismatch,
    UnitError,
    InvariantViolation,
    TooFewCycles,
    NoPeak,
    TooFewSpecimens,
    DegenerateActuals,
    NonPositiveMean,
    NonPositiveActual,
    EmptyResults,
    FeatureMismatch,
    ConfigError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a typed code so callers (the CLI
// in particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace wallgp
