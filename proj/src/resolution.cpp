#include "modframe/resolution.hpp"

#include <algorithm>
#include <limits>

#include "modframe/error.hpp"

namespace modframe {

namespace {

double effective_tol(const ResolutionSequence& seq, std::optional<double> tol) {
  return tol ? *tol : resolution_tol(seq);
}

void require_resolution(const ResolutionSequence& seq, double tol, const char* where) {
  const ResolutionReport r = verify_resolution(seq, tol);
  if (!r.passed)
    throw Error(ErrorCode::resolution_failed, std::string(where) + ": |sum b_i* b_i - 1| = " +
                                                  std::to_string(r.sum_residual));
}

}  // namespace

void ResolutionSequence::validate() const {
  if (b.empty()) throw Error(ErrorCode::empty_frame, "resolution sequence has no elements");
  if (d == 0) throw Error(ErrorCode::invalid_argument, "resolution sequence with d = 0");
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i].rows() != d || b[i].cols() != d)
      throw Error(ErrorCode::shape_mismatch, "b_" + std::to_string(i) + " is not " + std::to_string(d) + "x" +
                                                 std::to_string(d));
}

double resolution_tol(const ResolutionSequence& seq) { return 1e-9 * (1.0 + static_cast<double>(seq.b.size())); }

ResolutionSequence random_resolution(Rng& rng, std::size_t d, std::size_t k) {
  const CMatrix w = rng.isometry(k * d, d);
  ResolutionSequence seq{d, {}};
  for (std::size_t i = 0; i < k; ++i) seq.b.push_back(w.block(i * d, 0, d, d));
  return seq;
}

Frame as_frame(const ResolutionSequence& seq, double tol) {
  seq.validate();
  const AlgebraShape shape({seq.d});
  std::vector<ModuleVector> elements;
  elements.reserve(seq.b.size());
  for (const auto& bi : seq.b) elements.emplace_back(shape, 1, std::vector<CMatrix>{bi});
  return Frame::of_free_module(std::move(elements), tol);
}

ResolutionReport verify_resolution(const ResolutionSequence& seq, std::optional<double> tol, std::uint64_t seed,
                                   std::size_t probes) {
  seq.validate();
  const double t = effective_tol(seq, tol);
  ResolutionReport r;
  CMatrix sum(seq.d, seq.d);
  for (const auto& bi : seq.b) sum += bi.adjoint() * bi;
  r.sum_residual = op_norm(sum - CMatrix::identity(seq.d));

  Rng rng(seed);
  for (std::size_t p = 0; p < probes; ++p) {
    const CMatrix a = rng.gaussian(seq.d, seq.d);
    CMatrix rebuilt(seq.d, seq.d);
    for (const auto& bi : seq.b) rebuilt += (a * bi.adjoint()) * bi;
    r.probe_residual = std::max(r.probe_residual, op_norm(rebuilt - a) / (1.0 + op_norm(a)));
  }
  r.probes = probes;
  r.passed = r.sum_residual <= t && r.probe_residual <= t;
  return r;
}

RangeReport frame_transform_range(const ResolutionSequence& seq, std::optional<double> tol) {
  seq.validate();
  const double t = effective_tol(seq, tol);
  require_resolution(seq, t, "frame_transform_range");
  const std::size_t d = seq.d;
  const std::size_t k = seq.b.size();

  RangeReport r{.theta = CMatrix(d, k * d), .q = CMatrix(k * d, k * d)};
  CMatrix stacked(k * d, d);
  for (std::size_t i = 0; i < k; ++i) {
    r.theta.set_block(0, i * d, seq.b[i].adjoint());
    stacked.set_block(i * d, 0, seq.b[i]);
  }
  r.q = r.theta.adjoint() * r.theta;
  r.isometry_defect = op_norm(r.theta * r.theta.adjoint() - CMatrix::identity(d));
  r.projection_defect = std::max(op_norm(r.q * r.q - r.q), hermitian_defect(r.q));
  r.decomposition_defect = op_norm(r.q * stacked - stacked);
  const double worst = std::max({r.isometry_defect, r.projection_defect, r.decomposition_defect});
  if (worst > t)
    throw Error(ErrorCode::resolution_failed, "frame transform defect " + std::to_string(worst));
  return r;
}

PolarReport polar_factorization(const ResolutionSequence& seq, std::optional<double> tol) {
  seq.validate();
  const double t = effective_tol(seq, tol);
  require_resolution(seq, t, "polar_factorization");
  const std::size_t d = seq.d;

  PolarReport r;
  CMatrix modulus_sum(d, d);
  CMatrix lhs(d, d);
  CMatrix rhs(d, d);
  for (const auto& bi : seq.b) {
    Polar p = polar(bi);
    const CMatrix support = range_projection(p.modulus);
    r.reconstruction_residual = std::max(r.reconstruction_residual, op_norm(p.isometry * p.modulus - bi));
    r.support_residual = std::max(r.support_residual, op_norm(p.isometry.adjoint() * p.isometry - support));
    const CMatrix m2 = p.modulus * p.modulus;
    modulus_sum += m2;
    lhs += p.isometry * m2 * p.isometry.adjoint();
    rhs += bi * bi.adjoint();
    r.factors.push_back(PolarFactor{std::move(p.isometry), std::move(p.modulus)});
  }
  r.modulus_sum_residual = op_norm(modulus_sum - CMatrix::identity(d));
  r.bookkeeping_residual = op_norm(lhs - rhs);
  const double worst = std::max({r.reconstruction_residual, r.support_residual, r.modulus_sum_residual});
  if (worst > t) throw Error(ErrorCode::resolution_failed, "polar factorization residual " + std::to_string(worst));
  return r;
}

CoefficientReport coefficient_inequality(const ResolutionSequence& seq, std::optional<double> tol) {
  seq.validate();
  const double t = effective_tol(seq, tol);
  require_resolution(seq, t, "coefficient_inequality");

  CoefficientReport r;
  r.dominance_margin = std::numeric_limits<double>::infinity();
  for (const auto& bi : seq.b) {
    // <theta b_i, theta b_i> = sum_j (b_i b_j*)(b_j b_i*); the diagonal block Q_ii is b_i b_i*.
    CMatrix coefficient_square(seq.d, seq.d);
    for (const auto& bj : seq.b) {
      const CMatrix c = bi * bj.adjoint();
      coefficient_square += c * c.adjoint();
    }
    const CMatrix diagonal = bi * bi.adjoint();
    r.endpoint_residual = std::max(r.endpoint_residual, op_norm(coefficient_square - diagonal));
    const HermitianEigen e = eig_hermitian(hermitian_part(diagonal - coefficient_square));
    r.dominance_margin = std::min(r.dominance_margin, e.values.front());
  }
  r.dominated = r.dominance_margin >= -t;
  if (r.endpoint_residual > t || !r.dominated)
    throw Error(ErrorCode::resolution_failed, "endpoint identity residual " + std::to_string(r.endpoint_residual) +
                                                  ", dominance margin " + std::to_string(r.dominance_margin));
  return r;
}

}  // namespace modframe
