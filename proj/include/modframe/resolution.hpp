#pragma once

// Resolutions of the identity sum_i b_i* b_i = 1 in M_d, read as normalized
// tight frames of the algebra A = M_d viewed as a rank-one module over
// itself: <a, b> = a b*, and theta(a) = (a b_1*, ..., a b_k*).
//
// Only the finite-dimensional content is checked here. The dilation through
// an isometry into a properly infinite algebra has no analogue in M_d, and
// every report says so in `note`.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "modframe/frame.hpp"
#include "modframe/random.hpp"

namespace modframe {

inline constexpr std::string_view kDilationNote =
    "finite-dimensional checks only; the dilation into a properly infinite algebra is out of scope";

struct ResolutionSequence {
  std::size_t d = 0;
  std::vector<CMatrix> b;

  /// ShapeMismatch unless every b_i is d x d; EmptyFrame for k = 0.
  void validate() const;
};

/// 1e-9 (1 + k).
double resolution_tol(const ResolutionSequence& seq);

/// The blocks of a random kd x d isometry, stacked b_1 over ... over b_k.
ResolutionSequence random_resolution(Rng& rng, std::size_t d, std::size_t k);

/// Frame of the module A = M_d (shape [d], rank 1) with elements b_i.
Frame as_frame(const ResolutionSequence& seq, double tol = kFrameTol);

struct ResolutionReport {
  bool passed = false;
  double sum_residual = 0.0;    ///< |sum_i b_i* b_i - 1|
  double probe_residual = 0.0;  ///< max over probes of |sum_i (a b_i*) b_i - a| / (1 + |a|)
  std::size_t probes = 0;
  std::string_view note = kDilationNote;
};

ResolutionReport verify_resolution(const ResolutionSequence& seq, std::optional<double> tol = std::nullopt,
                                   std::uint64_t seed = 0, std::size_t probes = 8);

struct RangeReport {
  CMatrix theta;  ///< d x kd, theta(a) = a theta = [a b_1* | ... | a b_k*]
  CMatrix q;      ///< kd x kd, block (i, j) = b_i b_j*
  double isometry_defect = 0.0;      ///< |theta theta* - 1|, i.e. <theta a, theta a> = <a, a>
  double projection_defect = 0.0;    ///< max(|Q^2 - Q|, |Q* - Q|)
  double decomposition_defect = 0.0; ///< max_i |sum_j Q_ij b_j - b_i|
  std::string_view note = kDilationNote;
};

/// ResolutionFailed if the sequence fails verification or any defect exceeds tol.
RangeReport frame_transform_range(const ResolutionSequence& seq, std::optional<double> tol = std::nullopt);

struct PolarFactor {
  CMatrix u;  ///< partial isometry, u* u = support(m)
  CMatrix m;  ///< (b* b)^{1/2}
};

struct PolarReport {
  std::vector<PolarFactor> factors;
  double reconstruction_residual = 0.0;  ///< max_i |u_i m_i - b_i|
  double support_residual = 0.0;         ///< max_i |u_i* u_i - support(m_i)|
  double modulus_sum_residual = 0.0;     ///< |sum_i m_i^2 - 1|
  double bookkeeping_residual = 0.0;     ///< |sum_i u_i m_i^2 u_i* - sum_i b_i b_i*|
  std::string_view note = kDilationNote;
};

/// ResolutionFailed if the sequence fails verification or a residual exceeds tol.
PolarReport polar_factorization(const ResolutionSequence& seq, std::optional<double> tol = std::nullopt);

struct CoefficientReport {
  /// max_i |sum_j (b_i b_j*)(b_j b_i*) - b_i b_i*|
  double endpoint_residual = 0.0;
  /// min_i of the smallest eigenvalue of Q_ii - <theta b_i, theta b_i>; >= -tol when dominated.
  double dominance_margin = 0.0;
  bool dominated = false;
  std::string_view note = kDilationNote;
};

/// ResolutionFailed if the sequence fails verification, the endpoint
/// identity misses by more than tol, or the dominance fails.
CoefficientReport coefficient_inequality(const ResolutionSequence& seq, std::optional<double> tol = std::nullopt);

}  // namespace modframe
