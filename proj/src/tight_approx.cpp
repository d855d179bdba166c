#include "modframe/tight_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modframe/error.hpp"

namespace modframe {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kMinimumCheckTol = 1e-8;

void require_compatible(const HilbertFrame& x, const HilbertFrame& y, const char* where) {
  if (x.dim() != y.dim() || x.size() != y.size())
    throw Error(ErrorCode::dimension_mismatch,
                std::string(where) + ": " + std::to_string(x.size()) + " vectors in C^" + std::to_string(x.dim()) +
                    " vs " + std::to_string(y.size()) + " vectors in C^" + std::to_string(y.dim()));
}

// Spectral function of a PSD Hermitian matrix that maps eigenvalues at or
// below tol * max to zero.
CMatrix cutoff_function(const CMatrix& m, double tol, double (*f)(double)) {
  const HermitianEigen e = eig_hermitian(hermitian_part(m));
  const double top = e.values.empty() ? 0.0 : e.values.back();
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    if (!(e.values[c] > tol * top) || top <= 0.0) continue;
    const double w = f(e.values[c]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) += w * e.vectors(i, c) * std::conj(e.vectors(j, c));
  }
  return out;
}

double inv_sqrt(double v) { return 1.0 / std::sqrt(v); }
double plain_sqrt(double v) { return std::sqrt(v); }
double one(double) { return 1.0; }

void check_minimum(const char* name, const TightCandidate& c) {
  if (!(std::abs(c.achieved - c.minimum) <= kMinimumCheckTol * (1.0 + c.minimum)))
    throw Error(ErrorCode::verification_failed, std::string(name) + " minimizer achieves " +
                                                    std::to_string(c.achieved) + " instead of " +
                                                    std::to_string(c.minimum));
}

}  // namespace

HilbertFrame::HilbertFrame(std::size_t dim, const std::vector<std::vector<Complex>>& vectors)
    : x_(dim, vectors.size()) {
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != dim)
      throw Error(ErrorCode::dimension_mismatch, "vector " + std::to_string(j) + " has length " +
                                                     std::to_string(vectors[j].size()) + ", expected " +
                                                     std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) x_(i, j) = vectors[j][i];
  }
}

HilbertFrame::HilbertFrame(CMatrix columns) : x_(std::move(columns)) {}

std::vector<std::vector<Complex>> HilbertFrame::vectors() const {
  std::vector<std::vector<Complex>> out;
  out.reserve(size());
  for (std::size_t j = 0; j < size(); ++j) out.push_back(vector(j));
  return out;
}

Frame to_modular_frame(const HilbertFrame& x, double tol) {
  const AlgebraShape shape({1});
  const std::size_t n = x.dim();
  std::vector<ModuleVector> elements;
  elements.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    elements.emplace_back(shape, n, std::vector<CMatrix>{x.matrix().column(j).transpose()});
  // Vectors are rows here, so the span projection acts from the right as conj(P).
  std::optional<AlgebraMatrix> projection;
  if (numerical_rank(x.matrix()) < n)
    projection = AlgebraMatrix(shape, n, n, {range_projection(x.matrix()).conj()});
  return Frame(shape, SubmoduleDescriptor{n, std::move(projection)}, std::move(elements), tol);
}

HilbertBounds frame_bounds(const HilbertFrame& x, double tol) {
  if (x.size() == 0) throw Error(ErrorCode::empty_frame, "frame_bounds: no vectors");
  const HermitianEigen e = eig_hermitian(hermitian_part(x.matrix() * x.matrix().adjoint()));
  const double top = e.values.back();
  if (!(top > 0.0)) throw Error(ErrorCode::not_a_frame, "frame_bounds: all vectors are zero");
  HilbertBounds b;
  for (double v : e.values) {
    if (!(v > tol * top)) continue;
    b.mu.push_back(std::sqrt(v));
  }
  b.rank = b.mu.size();
  b.lower = b.mu.front() * b.mu.front();
  b.upper = top;
  b.spans_same_space_flag = b.upper < 2.25 * b.lower;
  return b;
}

CMatrix frame_operator_sqrt(const HilbertFrame& x, double tol) {
  return cutoff_function(x.matrix() * x.matrix().adjoint(), tol, inv_sqrt);
}

double quadratic_closeness(const HilbertFrame& x, const HilbertFrame& y, double tol) {
  require_compatible(x, y, "quadratic_closeness");
  const CMatrix a = x.matrix() - y.matrix();
  const CMatrix& b = y.matrix();
  const double a_norm = op_norm(a);
  if (a_norm == 0.0) return 0.0;
  const CMatrix b_pinv = pinv(b, tol);
  // Finite iff every coefficient vector annihilated by y is annihilated by x - y.
  const double leak = op_norm(a - a * b_pinv * b);
  if (leak > tol * (1.0 + a_norm)) return kInfinity;
  return op_norm(a * b_pinv);
}

DistanceReport nearness(const HilbertFrame& x, const HilbertFrame& y, double tol) {
  require_compatible(x, y, "nearness");
  DistanceReport r;
  r.c_yx = quadratic_closeness(x, y, tol);
  r.c_xy = quadratic_closeness(y, x, tol);
  const double worst = std::max(r.c_yx, r.c_xy);
  r.d_xy = std::isinf(worst) ? kInfinity : std::log(worst + 1.0);
  r.similar = test_similarity(to_modular_frame(x, tol), to_modular_frame(y, tol), tol).relation != Relation::neither;
  r.consistent = r.similar == std::isfinite(r.d_xy);
  return r;
}

BalanResult balan_minimizers(const HilbertFrame& x, double tol) {
  const HilbertBounds bounds = frame_bounds(x, tol);
  const CMatrix normalized = frame_operator_sqrt(x, tol) * x.matrix();
  const double rc = std::sqrt(bounds.lower);
  const double rd = std::sqrt(bounds.upper);
  const double c_minimum = (rd - rc) / (rd + rc);
  const double d_minimum = 0.25 * (std::log(bounds.upper) - std::log(bounds.lower));

  auto candidate = [&](double lambda, double minimum) {
    return TightCandidate{lambda, HilbertFrame(Complex(lambda) * normalized), minimum, 0.0};
  };
  BalanResult r{bounds, candidate(0.5 * (rc + rd), c_minimum), candidate(2.0 * rc * rd / (rc + rd), c_minimum),
                candidate(std::sqrt(rc * rd), d_minimum)};
  r.arithmetic.achieved = quadratic_closeness(x, r.arithmetic.frame, tol);
  r.harmonic.achieved = quadratic_closeness(r.harmonic.frame, x, tol);
  r.geometric.achieved = nearness(x, r.geometric.frame, tol).d_xy;
  check_minimum("arithmetic", r.arithmetic);
  check_minimum("harmonic", r.harmonic);
  check_minimum("geometric", r.geometric);
  return r;
}

SymmetricApproximation symmetric_approximation(const HilbertFrame& x, double tol) {
  frame_bounds(x, tol);  // EmptyFrame / NotAFrame
  const CMatrix& m = x.matrix();
  const CMatrix y = frame_operator_sqrt(x, tol) * m;

  // T = X*, so T T* = X* X acts on the coefficient space C^k.
  const CMatrix coefficient_gram = m.adjoint() * m;
  const CMatrix p = cutoff_function(coefficient_gram, tol, one);
  const CMatrix modulus = cutoff_function(coefficient_gram, tol, plain_sqrt);

  SymmetricApproximation r{.frame = HilbertFrame(y)};
  r.certificate = hs_norm(p - modulus);
  const double diff = hs_norm(y - m);
  r.distance_sq = diff * diff;
  r.tightness_defect = op_norm(y * y.adjoint() - cutoff_function(m * m.adjoint(), tol, one));
  if (r.tightness_defect > tol)
    throw Error(ErrorCode::verification_failed, "symmetric approximation is not normalized tight: defect " +
                                                    std::to_string(r.tightness_defect));
  const double gap = std::abs(r.certificate * r.certificate - r.distance_sq);
  if (gap > kMinimumCheckTol * (1.0 + r.distance_sq))
    throw Error(ErrorCode::verification_failed, "certificate identity misses by " + std::to_string(gap));
  return r;
}

LoewdinResult loewdin_orthogonalization(const HilbertFrame& x, double tol) {
  const HilbertBounds bounds = frame_bounds(x, tol);
  if (bounds.rank < x.size())
    throw Error(ErrorCode::not_a_basis, std::to_string(x.size()) + " vectors span a space of dimension " +
                                            std::to_string(bounds.rank));
  LoewdinResult r{symmetric_approximation(x, tol), 0.0};
  const CMatrix& y = r.approximation.frame.matrix();
  r.orthonormality_defect = op_norm(y.adjoint() * y - CMatrix::identity(x.size()));
  if (r.orthonormality_defect > tol)
    throw Error(ErrorCode::verification_failed,
                "Loewdin output is not orthonormal: defect " + std::to_string(r.orthonormality_defect));
  return r;
}

TightMultiple closest_tight_multiple(const HilbertFrame& x, double tol) {
  const HilbertBounds bounds = frame_bounds(x, tol);
  const double lambda = 0.5 * (bounds.mu.front() + bounds.mu.back());
  TightMultiple r{lambda, HilbertFrame(Complex(lambda) * (frame_operator_sqrt(x, tol) * x.matrix())), 0.0, 0.0};
  for (double mu : bounds.mu) r.distance = std::max(r.distance, std::abs(lambda - mu));
  r.direct_distance = op_norm(r.frame.matrix() - x.matrix());
  if (std::abs(r.distance - r.direct_distance) > tol * (1.0 + r.distance))
    throw Error(ErrorCode::verification_failed, "spectral distance " + std::to_string(r.distance) +
                                                    " vs direct " + std::to_string(r.direct_distance));
  return r;
}

LambdaScan scan_tight_multiples(const HilbertFrame& x, std::size_t points, double tol, kernels::Execution ex) {
  if (points < 2) throw Error(ErrorCode::invalid_argument, "scan needs at least two grid points");
  const HilbertBounds bounds = frame_bounds(x, tol);
  const double lo = bounds.mu.front();
  const double hi = bounds.mu.back();
  LambdaScan s;
  s.distances = kernels::spread_scan(bounds.mu, lo, hi, points, ex);
  s.lambdas.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    s.lambdas[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  const auto best = std::min_element(s.distances.begin(), s.distances.end());
  s.best_lambda = s.lambdas[static_cast<std::size_t>(best - s.distances.begin())];
  s.best_distance = *best;
  s.resolution = (hi - lo) / static_cast<double>(points - 1);
  return s;
}

HilbertFrame example_56_frame(std::size_t n) {
  if (n < 3) throw Error(ErrorCode::invalid_argument, "the example needs n >= 3");
  CMatrix x(n, n);
  x(0, 0) = 1.0;
  x(1, 1) = 3.0;
  for (std::size_t i = 2; i < n; ++i) x(i, i) = 2.0;
  return HilbertFrame(std::move(x));
}

Example56Point example_56_family(double phi, std::size_t n) {
  const HilbertFrame x = example_56_frame(n);
  CMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i) y(i, i) = 2.0;
  y(2, 2) = 2.0 * std::polar(1.0, phi);
  Example56Point p{HilbertFrame(y), 0.0};
  p.distance = op_norm(x.matrix() - y);
  return p;
}

double example_56_half_width() { return 2.0 * std::asin(0.25); }

}  // namespace modframe
