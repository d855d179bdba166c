#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modframe {

enum class ErrorCode {
  not_hermitian,
  no_convergence,
  not_positive,
  shape_mismatch,
  dimension_mismatch,
  count_mismatch,
  empty_frame,
  not_a_frame,
  vector_outside_module,
  not_partial_isometry,
  gram_mismatch,
  not_normalized_tight,
  not_riesz_basis,
  expansion_residual_too_large,
  resolution_failed,
  not_a_basis,
  invalid_argument,
  parse_error,
  file_not_found,
  verification_failed,
};

/// Stable machine-readable name, e.g. "NotHermitian".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace modframe
