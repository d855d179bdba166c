#include "modframe/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modframe/error.hpp"

namespace modframe {

namespace {

double max_entry_norm(const AlgebraMatrix& m) {
  double out = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out = std::max(out, m.entry(i, j).norm());
  return out;
}

double max_element_norm(const Frame& f) {
  double out = 0.0;
  for (const auto& x : f.elements()) out = std::max(out, x.norm());
  return out;
}

struct PermutationSearch {
  const AlgebraMatrix& a;
  const AlgebraMatrix& b;
  double tol;
  std::vector<std::size_t> perm;
  std::vector<bool> used;

  bool close(std::size_t i, std::size_t j) const {
    return (a.entry(i, j) - b.entry(perm[i], perm[j])).norm() <= tol;
  }

  bool extend(std::size_t i) {
    if (i == perm.size()) return true;
    for (std::size_t c = 0; c < perm.size(); ++c) {
      if (used[c]) continue;
      perm[i] = c;
      bool ok = true;
      for (std::size_t p = 0; p <= i && ok; ++p) ok = close(i, p) && close(p, i);
      if (!ok) continue;
      used[c] = true;
      if (extend(i + 1)) return true;
      used[c] = false;
    }
    return false;
  }
};

}  // namespace

AlgebraElement metric_inner(const AlgebraMatrix& metric, const ModuleVector& x, const ModuleVector& y) {
  return inner(apply(metric, x), y);
}

MetricAnalysis analyze_with_metric(const Frame& f, const AlgebraMatrix& metric, double tol) {
  require_same_shape(f.shape(), metric.shape(), "analyze_with_metric");
  if (metric.rows() != f.ambient_rank() || metric.cols() != f.ambient_rank())
    throw Error(ErrorCode::shape_mismatch, "analyze_with_metric: metric has the wrong size");
  const AlgebraShape& shape = f.shape();

  std::vector<std::vector<double>> spectra;
  double top = 0.0;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const CMatrix root = sqrt_psd(hermitian_part(metric.flat(b)));
    const CMatrix m = root * f.gram_operator().flat(b) * root;
    spectra.push_back(eig_hermitian(hermitian_part(m)).values);
    if (!spectra.back().empty()) top = std::max(top, spectra.back().back());
  }

  MetricAnalysis out;
  double lower = std::numeric_limits<double>::infinity();
  std::size_t rank = 0;
  for (const auto& values : spectra) {
    for (double v : values) {
      if (!(v > tol * top)) continue;
      ++rank;
      lower = std::min(lower, v);
      out.upper_bound = std::max(out.upper_bound, v);
    }
  }
  std::size_t module_rank = 0;
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    module_rank += static_cast<std::size_t>(std::llround(f.projection().flat(b).trace().real()));
  out.lower_bound = rank == module_rank && rank > 0 ? lower : 0.0;

  const AlgebraMatrix& p = f.projection();
  out.reconstruction_defect = max_abs_diff(p * metric * f.gram_operator(), p);
  out.is_normalized_tight = std::abs(out.lower_bound - 1.0) <= tol && std::abs(out.upper_bound - 1.0) <= tol &&
                            out.reconstruction_defect <= tol;
  return out;
}

NormalizedTightMetric normalized_tight_inner_product(const Frame& f, double tol) {
  if (f.size() == 0) throw Error(ErrorCode::empty_frame, "normalized_tight_inner_product: no elements");
  if (!analyze(f, tol).is_frame) throw Error(ErrorCode::not_a_frame, "normalized_tight_inner_product");
  AlgebraMatrix s = canonical_dual_operator(f, tol);
  AlgebraMatrix gram = f.synthesis() * s * f.analysis();
  for (std::size_t b = 0; b < f.shape().block_count(); ++b) gram.flat(b) = hermitian_part(gram.flat(b));
  MetricAnalysis check = analyze_with_metric(f, s, tol);
  if (!check.is_normalized_tight)
    throw Error(ErrorCode::verification_failed,
                "re-analysis under the induced inner product gives C = " + std::to_string(check.lower_bound) +
                    ", D = " + std::to_string(check.upper_bound));
  return NormalizedTightMetric{std::move(s), GramInvariant{f.size(), std::move(gram)}, check};
}

AlgebraMatrix gram_invariant_by_svd(const Frame& f, double tol) {
  const AlgebraMatrix& x = f.synthesis();
  const double cutoff = tol * max_singular_value(x);
  AlgebraMatrix q(f.shape(), f.size(), f.size());
  for (std::size_t b = 0; b < f.shape().block_count(); ++b) {
    const Svd d = svd(x.flat(b));
    CMatrix& out = q.flat(b);
    for (std::size_t c = 0; c < d.singular_values.size(); ++c) {
      if (!(d.singular_values[c] > cutoff)) continue;
      for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += d.u(i, c) * std::conj(d.u(j, c));
    }
  }
  return q;
}

bool grams_match(const AlgebraMatrix& a, const AlgebraMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || !(a.shape() == b.shape())) return false;
  const double scale = 1.0 + std::max(max_entry_norm(a), max_entry_norm(b));
  return max_entry_norm_diff(a, b) <= tol * scale;
}

UnitaryReconstruction build_unitary_from_matching_grams(const Frame& f, const Frame& g, double tol) {
  if (f.size() != g.size())
    throw Error(ErrorCode::count_mismatch, "build_unitary_from_matching_grams: element counts differ");
  require_same_shape(f.shape(), g.shape(), "build_unitary_from_matching_grams");
  if (!analyze(f, tol).is_normalized_tight || !analyze(g, tol).is_normalized_tight)
    throw Error(ErrorCode::not_normalized_tight, "build_unitary_from_matching_grams");
  for (std::size_t j = 0; j < f.size(); ++j)
    if (f.element(j).norm() <= tol || g.element(j).norm() <= tol)
      throw Error(ErrorCode::invalid_argument, "element " + std::to_string(j) + " is zero");
  const AlgebraMatrix gram_f = f.gram_matrix();
  const AlgebraMatrix gram_g = g.gram_matrix();
  if (!grams_match(gram_f, gram_g, tol))
    throw Error(ErrorCode::gram_mismatch,
                "Gram matrices differ by " + std::to_string(max_entry_norm_diff(gram_f, gram_g)));

  UnitaryReconstruction out{.v = f.analysis() * g.synthesis()};
  for (std::size_t j = 0; j < f.size(); ++j)
    out.image_residual = std::max(out.image_residual, max_abs_diff(apply(out.v, f.element(j)), g.element(j)));
  const AlgebraMatrix& pf = f.projection();
  const AlgebraMatrix& pg = g.projection();
  out.isometry_defect = max_abs_diff(pf * out.v * out.v.adjoint() * pf, pf);
  out.range_defect = max_abs_diff(out.v.adjoint() * pf * out.v, pg);
  return out;
}

std::optional<std::vector<std::size_t>> find_matching_permutation(const AlgebraMatrix& a, const AlgebraMatrix& b,
                                                                  double tol) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || !(a.shape() == b.shape()))
    return std::nullopt;
  if (a.rows() > 8) throw Error(ErrorCode::invalid_argument, "permutation search is limited to k <= 8");
  const double scale = 1.0 + std::max(max_entry_norm(a), max_entry_norm(b));
  PermutationSearch search{a, b, tol * scale, std::vector<std::size_t>(a.rows()), std::vector<bool>(a.rows())};
  if (!search.extend(0)) return std::nullopt;
  return search.perm;
}

Frame permute_frame(const Frame& f, const std::vector<std::size_t>& p, double tol) {
  if (p.size() != f.size()) throw Error(ErrorCode::count_mismatch, "permute_frame: permutation length");
  std::vector<ModuleVector> elements;
  elements.reserve(p.size());
  for (std::size_t i : p) elements.push_back(f.element(i));
  return Frame(f.shape(), f.module(), std::move(elements), tol);
}

ChangeOfBasis change_of_basis_mp(const Frame& x, const Frame& y, double tol) {
  require_same_shape(x.shape(), y.shape(), "change_of_basis_mp");
  if (x.ambient_rank() != y.ambient_rank())
    throw Error(ErrorCode::shape_mismatch, "change_of_basis_mp: ambient ranks differ");
  if (!riesz_check(x, tol).is_riesz_basis) throw Error(ErrorCode::not_riesz_basis, "first sequence");
  if (!riesz_check(y, tol).is_riesz_basis) throw Error(ErrorCode::not_riesz_basis, "second sequence");

  ChangeOfBasis out{.f = y.synthesis() * canonical_dual_operator(x, tol) * x.analysis(),
                    .g = x.synthesis() * canonical_dual_operator(y, tol) * y.analysis()};
  out.y_residual = max_abs_diff(out.f * x.synthesis(), y.synthesis());
  out.x_residual = max_abs_diff(out.g * y.synthesis(), x.synthesis());
  const double scale = 1.0 + std::max(max_element_norm(x), max_element_norm(y));
  if (std::max(out.y_residual, out.x_residual) > tol * scale)
    throw Error(ErrorCode::expansion_residual_too_large,
                "expansion residuals " + std::to_string(out.y_residual) + ", " + std::to_string(out.x_residual));
  out.mp = penrose_residuals(out.f, out.g);
  return out;
}

}  // namespace modframe
