#pragma once

// Data-parallel kernels. Every kernel has a serial reference path selected by
// Execution::serial; the OpenMP path must return bit-identical results, so
// work is split into fixed chunks whose partial results are combined in a
// fixed order independent of the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "modframe/matrix.hpp"

namespace modframe::kernels {

enum class Execution { serial, parallel };

/// Samples handled per RNG stream in the sampling kernels.
inline constexpr std::size_t kSampleChunk = 1024;

/// a * b. The parallel path splits rows across threads once the product is
/// large enough to amortize the fork.
CMatrix gemm(const CMatrix& a, const CMatrix& b, Execution ex = Execution::parallel);

struct RatioSearch {
  double best = 0.0;
  std::vector<Complex> argmax;  ///< coefficient vector attaining `best`
  std::size_t evaluated = 0;
};

/// Largest value of |num * c| / |den * c| over `samples` random complex
/// Gaussian coefficient vectors c. Samples with |den * c| == 0 are skipped.
/// `num` and `den` must have the same column count.
RatioSearch sampled_max_ratio(const CMatrix& num, const CMatrix& den, std::size_t samples,
                              std::uint64_t seed, Execution ex = Execution::parallel);

/// Stochastic hill climb on the same ratio starting from `start`. Serial;
/// accepts a perturbation only if it strictly increases the ratio.
RatioSearch refine_max_ratio(const CMatrix& num, const CMatrix& den, RatioSearch start,
                             std::size_t steps, std::uint64_t seed);

/// For each grid point t_i = lo + i (hi - lo) / (points - 1), the value
/// max_j |t_i - spectrum_j|.
std::vector<double> spread_scan(std::span<const double> spectrum, double lo, double hi,
                                std::size_t points, Execution ex = Execution::parallel);

/// |U_t * base - target|_F^2 for each candidate U_t.
std::vector<double> competitor_costs(const CMatrix& target, const CMatrix& base,
                                     std::span<const CMatrix> candidates,
                                     Execution ex = Execution::parallel);

}  // namespace modframe::kernels
