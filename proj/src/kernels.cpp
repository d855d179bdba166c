#include "modframe/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "modframe/error.hpp"

namespace modframe::kernels {

namespace {

// Below this many complex multiply-adds gemm stays on the calling thread.
constexpr std::size_t kGemmParallelWork = std::size_t{1} << 15;

// out_row += a_ip * b_row, written out by hand to avoid the NaN-recovery
// path of std::complex multiplication.
inline void axpy_row(Complex alpha, const Complex* b_row, Complex* out_row, std::size_t n) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  const auto* b = reinterpret_cast<const double*>(b_row);
  auto* o = reinterpret_cast<double*>(out_row);
  for (std::size_t j = 0; j < n; ++j) {
    const double br = b[2 * j];
    const double bi = b[2 * j + 1];
    o[2 * j] += ar * br - ai * bi;
    o[2 * j + 1] += ar * bi + ai * br;
  }
}

void gemm_row(const CMatrix& a, const CMatrix& b, CMatrix& out, std::size_t i) {
  Complex* out_row = &out(i, 0);
  for (std::size_t p = 0; p < a.cols(); ++p) axpy_row(a(i, p), &b(p, 0), out_row, b.cols());
}

// |m c|^2 with c given as interleaved (re, im) pairs.
inline double image_norm_sq(const CMatrix& m, const double* c) {
  const auto* d = reinterpret_cast<const double*>(m.data().data());
  const std::size_t cols = m.cols();
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* row = d + 2 * i * cols;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      re += row[2 * j] * c[2 * j] - row[2 * j + 1] * c[2 * j + 1];
      im += row[2 * j] * c[2 * j + 1] + row[2 * j + 1] * c[2 * j];
    }
    total += re * re + im * im;
  }
  return total;
}

struct ChunkBest {
  double ratio_sq = -1.0;
  std::vector<double> coeffs;
  std::size_t evaluated = 0;
};

ChunkBest sample_chunk(const CMatrix& num, const CMatrix& den, std::size_t begin, std::size_t end,
                       std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 gen(seq);
  std::normal_distribution<double> normal;
  const std::size_t width = 2 * num.cols();
  std::vector<double> c(width);
  ChunkBest best;
  for (std::size_t s = begin; s < end; ++s) {
    for (auto& v : c) v = normal(gen);
    const double den_sq = image_norm_sq(den, c.data());
    if (!(den_sq > 0.0)) continue;
    ++best.evaluated;
    const double ratio_sq = image_norm_sq(num, c.data()) / den_sq;
    if (ratio_sq > best.ratio_sq) {
      best.ratio_sq = ratio_sq;
      best.coeffs = c;
    }
  }
  return best;
}

std::vector<Complex> to_complex(const std::vector<double>& interleaved) {
  std::vector<Complex> out(interleaved.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = {interleaved[2 * j], interleaved[2 * j + 1]};
  return out;
}

}  // namespace

CMatrix gemm(const CMatrix& a, const CMatrix& b, Execution ex) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::shape_mismatch, "gemm: " + std::to_string(a.rows()) + "x" +
                                               std::to_string(a.cols()) + " times " +
                                               std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  CMatrix out(a.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  const bool go_parallel =
      ex == Execution::parallel && a.rows() * a.cols() * b.cols() >= kGemmParallelWork;
#pragma omp parallel for schedule(static) if (go_parallel)
  for (std::ptrdiff_t i = 0; i < rows; ++i) gemm_row(a, b, out, static_cast<std::size_t>(i));
  return out;
}

RatioSearch sampled_max_ratio(const CMatrix& num, const CMatrix& den, std::size_t samples,
                              std::uint64_t seed, Execution ex) {
  if (num.cols() != den.cols()) throw Error(ErrorCode::shape_mismatch, "sampled_max_ratio: column count");
  const std::size_t chunks = (samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<ChunkBest> partial(chunks);
  const auto n_chunks = static_cast<std::ptrdiff_t>(chunks);
#pragma omp parallel for schedule(dynamic) if (ex == Execution::parallel)
  for (std::ptrdiff_t ci = 0; ci < n_chunks; ++ci) {
    const auto chunk = static_cast<std::size_t>(ci);
    const std::size_t begin = chunk * kSampleChunk;
    const std::size_t end = std::min(samples, begin + kSampleChunk);
    partial[chunk] = sample_chunk(num, den, begin, end, seed, chunk);
  }

  RatioSearch result;
  double best_sq = -1.0;
  const std::vector<double>* best_coeffs = nullptr;
  for (const auto& p : partial) {
    result.evaluated += p.evaluated;
    if (p.ratio_sq > best_sq) {
      best_sq = p.ratio_sq;
      best_coeffs = &p.coeffs;
    }
  }
  if (best_coeffs != nullptr) {
    result.best = std::sqrt(best_sq);
    result.argmax = to_complex(*best_coeffs);
  }
  return result;
}

RatioSearch refine_max_ratio(const CMatrix& num, const CMatrix& den, RatioSearch start,
                             std::size_t steps, std::uint64_t seed) {
  if (num.cols() != den.cols()) throw Error(ErrorCode::shape_mismatch, "refine_max_ratio: column count");
  if (start.argmax.size() != num.cols()) return start;

  std::vector<double> c(2 * num.cols());
  for (std::size_t j = 0; j < start.argmax.size(); ++j) {
    c[2 * j] = start.argmax[j].real();
    c[2 * j + 1] = start.argmax[j].imag();
  }
  auto normalize = [](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    s = std::sqrt(s);
    if (s > 0.0)
      for (double& x : v) x /= s;
  };
  normalize(c);
  double den_sq = image_norm_sq(den, c.data());
  if (!(den_sq > 0.0)) return start;
  double best_sq = image_norm_sq(num, c.data()) / den_sq;

  std::mt19937_64 gen(seed ^ 0x5bd1e995u);
  std::normal_distribution<double> normal;
  const double scale = 1.0 / std::sqrt(static_cast<double>(c.size()));
  double step = 0.1;
  std::vector<double> trial(c.size());
  for (std::size_t s = 0; s < steps; ++s) {
    for (std::size_t j = 0; j < c.size(); ++j) trial[j] = c[j] + step * scale * normal(gen);
    normalize(trial);
    ++start.evaluated;
    const double d = image_norm_sq(den, trial.data());
    if (!(d > 0.0)) continue;
    const double r = image_norm_sq(num, trial.data()) / d;
    if (r > best_sq) {
      best_sq = r;
      c.swap(trial);
      step = std::min(1.0, step * 1.4);
    } else {
      step = std::max(1e-7, step * 0.93);
    }
  }
  if (std::sqrt(best_sq) > start.best) {
    start.best = std::sqrt(best_sq);
    start.argmax = to_complex(c);
  }
  return start;
}

std::vector<double> spread_scan(std::span<const double> spectrum, double lo, double hi,
                                std::size_t points, Execution ex) {
  std::vector<double> out(points);
  if (points == 0) return out;
  const double h = points > 1 ? (hi - lo) / static_cast<double>(points - 1) : 0.0;
  const auto n = static_cast<std::ptrdiff_t>(points);
#pragma omp parallel for schedule(static) if (ex == Execution::parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double t = lo + h * static_cast<double>(i);
    double worst = 0.0;
    for (double mu : spectrum) worst = std::max(worst, std::abs(t - mu));
    out[static_cast<std::size_t>(i)] = worst;
  }
  return out;
}

std::vector<double> competitor_costs(const CMatrix& target, const CMatrix& base,
                                     std::span<const CMatrix> candidates, Execution ex) {
  for (const auto& u : candidates) {
    if (u.cols() != base.rows() || u.rows() != target.rows() || base.cols() != target.cols())
      throw Error(ErrorCode::shape_mismatch, "competitor_costs: candidate shape");
  }
  std::vector<double> out(candidates.size());
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(dynamic) if (ex == Execution::parallel)
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    const CMatrix moved = gemm(candidates[static_cast<std::size_t>(t)], base, Execution::serial);
    double s = 0.0;
    for (std::size_t i = 0; i < moved.size(); ++i) s += std::norm(moved.data()[i] - target.data()[i]);
    out[static_cast<std::size_t>(t)] = s;
  }
  return out;
}

}  // namespace modframe::kernels
