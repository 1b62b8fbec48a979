#include "wallgp/error.hpp"

namespace wallgp {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorCode::NonPositiveDiagonal: return "NonPositiveDiagonal";
        case ErrorCode::NonPositiveInput: return "NonPositiveInput";
        case ErrorCode::OutOfDomain: return "OutOfDomain";
        case ErrorCode::DegenerateData: return "DegenerateData";
        case ErrorCode::OptimizationDiverged: return "OptimizationDiverged";
        case ErrorCode::SchemaMismatch: return "SchemaMismatch";
        case ErrorCode::UnitError: return "UnitError";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::TooFewCycles: return "TooFewCycles";
        case ErrorCode::NoPeak: return "NoPeak";
        case ErrorCode::TooFewSpecimens: return "TooFewSpecimens";
        case ErrorCode::DegenerateActuals: return "DegenerateActuals";
        case ErrorCode::NonPositiveMean: return "NonPositiveMean";
        case ErrorCode::NonPositiveActual: return "NonPositiveActual";
        case ErrorCode::EmptyResults: return "EmptyResults";
        case ErrorCode::FeatureMismatch: return "FeatureMismatch";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace wallgp
