#include "modframe/error.hpp"

namespace modframe {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::not_hermitian: return "NotHermitian";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::not_positive: return "NotPositive";
    case ErrorCode::shape_mismatch: return "ShapeMismatch";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::count_mismatch: return "CountMismatch";
    case ErrorCode::empty_frame: return "EmptyFrame";
    case ErrorCode::not_a_frame: return "NotAFrame";
    case ErrorCode::vector_outside_module: return "VectorOutsideModule";
    case ErrorCode::not_partial_isometry: return "NotPartialIsometry";
    case ErrorCode::gram_mismatch: return "GramMismatch";
    case ErrorCode::not_normalized_tight: return "NotNormalizedTight";
    case ErrorCode::not_riesz_basis: return "NotRieszBasis";
    case ErrorCode::expansion_residual_too_large: return "ExpansionResidualTooLarge";
    case ErrorCode::resolution_failed: return "ResolutionFailed";
    case ErrorCode::not_a_basis: return "NotABasis";
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::file_not_found: return "FileNotFound";
    case ErrorCode::verification_failed: return "VerificationFailed";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace modframe
