#include "modframe/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "modframe/error.hpp"

namespace modframe {

namespace {

AlgebraMatrix build_synthesis(const AlgebraShape& shape, std::size_t rank, const std::vector<ModuleVector>& xs) {
  AlgebraMatrix s(shape, xs.size(), rank);
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const std::size_t k = shape.block_size(b);
    for (std::size_t j = 0; j < xs.size(); ++j) s.flat(b).set_block(j * k, 0, xs[j].flat(b));
  }
  return s;
}

std::size_t rounded_trace(const CMatrix& p) {
  return static_cast<std::size_t>(std::llround(std::max(0.0, p.trace().real())));
}

void require_frame(const Frame& f, double tol, const char* where) {
  if (f.size() == 0) throw Error(ErrorCode::empty_frame, std::string(where) + ": frame has no elements");
  if (!analyze(f, tol).is_frame)
    throw Error(ErrorCode::not_a_frame, std::string(where) + ": sequence is not a frame of its submodule");
}

}  // namespace

Frame::Frame(AlgebraShape shape, SubmoduleDescriptor module, std::vector<ModuleVector> elements, double tol)
    : shape_(std::move(shape)),
      module_(std::move(module)),
      elements_(std::move(elements)),
      projection_(module_.projection_or_identity(shape_)),
      synthesis_(shape_, elements_.size(), module_.ambient_rank),
      gram_(shape_, module_.ambient_rank, module_.ambient_rank) {
  module_.validate(tol);
  for (std::size_t j = 0; j < elements_.size(); ++j) {
    const ModuleVector& x = elements_[j];
    require_same_shape(shape_, x.shape(), "Frame element");
    if (x.rank() != module_.ambient_rank)
      throw Error(ErrorCode::shape_mismatch, "frame element " + std::to_string(j) + " has rank " +
                                                 std::to_string(x.rank()) + ", module has rank " +
                                                 std::to_string(module_.ambient_rank));
    if (module_.projection) {
      const double off = max_abs_diff(apply(projection_, x), x);
      double scale = 0.0;
      for (std::size_t b = 0; b < shape_.block_count(); ++b) scale = std::max(scale, x.flat(b).max_abs());
      if (off > tol * (1.0 + scale))
        throw Error(ErrorCode::vector_outside_module,
                    "frame element " + std::to_string(j) + " lies outside the submodule (|Px - x| = " +
                        std::to_string(off) + ")");
    }
  }
  synthesis_ = build_synthesis(shape_, module_.ambient_rank, elements_);
  gram_ = synthesis_.adjoint() * synthesis_;
  for (std::size_t b = 0; b < shape_.block_count(); ++b) gram_.flat(b) = hermitian_part(gram_.flat(b));
}

Frame Frame::of_free_module(std::vector<ModuleVector> elements, double tol) {
  if (elements.empty()) throw Error(ErrorCode::empty_frame, "of_free_module: cannot infer the algebra shape");
  AlgebraShape shape = elements.front().shape();
  const std::size_t rank = elements.front().rank();
  return Frame(std::move(shape), SubmoduleDescriptor{rank, std::nullopt}, std::move(elements), tol);
}

double gram_cutoff(const Frame& f, double tol) { return tol * max_singular_value(f.gram_operator()); }

FrameReport analyze(const Frame& f, double tol) {
  if (f.size() == 0) throw Error(ErrorCode::empty_frame, "analyze: frame has no elements");
  const AlgebraShape& shape = f.shape();
  const AlgebraMatrix& g = f.gram_operator();

  std::vector<HermitianEigen> eig;
  double top = 0.0;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    eig.push_back(eig_hermitian(g.flat(b)));
    if (!eig.back().values.empty()) top = std::max(top, eig.back().values.back());
  }
  const double cutoff = tol * top;

  FrameReport report{.lower_bound = 0.0,
                     .upper_bound = 0.0,
                     .is_frame = false,
                     .is_tight = false,
                     .is_normalized_tight = false,
                     .support = AlgebraMatrix(shape, f.ambient_rank(), f.ambient_rank()),
                     .spectra = {},
                     .support_rank = 0,
                     .module_rank = 0,
                     .condition = 0.0};
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  bool ranks_match = true;
  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    const HermitianEigen& e = eig[b];
    report.spectra.push_back(e.values);
    CMatrix& support = report.support.flat(b);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < e.values.size(); ++c) {
      if (!(e.values[c] > cutoff) || top == 0.0) continue;
      ++rank;
      lower = std::min(lower, e.values[c]);
      upper = std::max(upper, e.values[c]);
      for (std::size_t i = 0; i < support.rows(); ++i)
        for (std::size_t j = 0; j < support.cols(); ++j) support(i, j) += e.vectors(i, c) * std::conj(e.vectors(j, c));
    }
    const std::size_t module_rank = rounded_trace(f.projection().flat(b));
    ranks_match = ranks_match && rank == module_rank;
    report.support_rank += rank;
    report.module_rank += module_rank;
  }

  report.is_frame = ranks_match && report.support_rank > 0;
  if (report.is_frame) {
    report.lower_bound = lower;
    report.upper_bound = upper;
    report.condition = upper / lower;
    report.is_tight = std::abs(lower - upper) <= tol * upper;
    report.is_normalized_tight = report.is_tight && std::abs(lower - 1.0) <= tol;
  } else {
    report.lower_bound = report.support_rank < report.module_rank ? 0.0 : lower;
    report.upper_bound = upper;
    report.condition = std::numeric_limits<double>::infinity();
  }
  return report;
}

AlgebraMatrix canonical_dual_operator(const Frame& f, double tol) {
  AlgebraMatrix s = mp_inverse_with_cutoff(f.gram_operator(), gram_cutoff(f, tol));
  for (std::size_t b = 0; b < f.shape().block_count(); ++b) s.flat(b) = hermitian_part(s.flat(b));
  return s;
}

FrameTransform frame_transform(const Frame& f, double tol) {
  require_frame(f, tol, "frame_transform");
  const AlgebraMatrix s = canonical_dual_operator(f, tol);
  FrameTransform t{.analysis = f.analysis(), .range_projection = f.synthesis() * s * f.analysis()};
  const AlgebraMatrix& q = t.range_projection;
  t.projection_defect = std::max(max_abs_diff(q * q, q), max_abs_diff(q.adjoint(), q));

  const AlgebraMatrix synthesis = t.analysis.adjoint();
  for (std::size_t j = 0; j < f.size(); ++j) {
    const ModuleVector image = apply(synthesis, ModuleVector::basis(f.shape(), f.size(), j));
    t.synthesis_defect = std::max(t.synthesis_defect, max_abs_diff(image, f.element(j)));
  }
  t.isometry_defect = max_abs_diff(f.gram_operator(), f.projection());
  t.is_isometry = t.isometry_defect <= tol * (1.0 + f.gram_operator().norm());
  return t;
}

Frame canonical_dual(const Frame& f, double tol) {
  require_frame(f, tol, "canonical_dual");
  const AlgebraMatrix s = canonical_dual_operator(f, tol);
  std::vector<ModuleVector> dual;
  dual.reserve(f.size());
  for (const auto& x : f.elements()) dual.push_back(apply(s, x));
  // Dual elements are in the submodule up to round-off of order |S| |x|.
  double scale = 1.0;
  for (const auto& x : dual) scale = std::max(scale, x.norm());
  return Frame(f.shape(), f.module(), std::move(dual), std::max(tol, 1e-12 * scale));
}

ModuleVector reconstruct(const Frame& f, const ModuleVector& x, double tol) {
  require_same_shape(f.shape(), x.shape(), "reconstruct");
  if (x.rank() != f.ambient_rank()) throw Error(ErrorCode::shape_mismatch, "reconstruct: rank mismatch");
  const double off = max_abs_diff(apply(f.projection(), x), x);
  if (off > tol * (1.0 + x.norm()))
    throw Error(ErrorCode::vector_outside_module, "reconstruct: |Px - x| = " + std::to_string(off));
  require_frame(f, tol, "reconstruct");

  const AlgebraMatrix s = canonical_dual_operator(f, tol);
  ModuleVector out(f.shape(), f.ambient_rank());
  for (const auto& xj : f.elements()) out += inner(x, apply(s, xj)) * xj;
  return out;
}

Frame from_partial_isometry(const AlgebraMatrix& v, double tol) {
  if (v.rows() != v.cols()) throw Error(ErrorCode::not_partial_isometry, "operator is not square");
  const std::size_t n = v.rows();
  // V*V as a module map ("first V, then V*") is V V^adj in matrix order.
  const AlgebraMatrix initial = v * v.adjoint();
  const double defect = max_abs_diff(initial * initial, initial);
  if (defect > tol)
    throw Error(ErrorCode::not_partial_isometry, "|(V*V)^2 - V*V| = " + std::to_string(defect));

  AlgebraMatrix range = v.adjoint() * v;
  for (std::size_t b = 0; b < range.shape().block_count(); ++b) range.flat(b) = hermitian_part(range.flat(b));
  std::vector<ModuleVector> elements;
  elements.reserve(n);
  for (std::size_t j = 0; j < n; ++j) elements.push_back(apply(v, ModuleVector::basis(v.shape(), n, j)));
  return Frame(v.shape(), SubmoduleDescriptor{n, std::move(range)}, std::move(elements),
               std::max(tol, 10.0 * defect));
}

const char* to_string(Relation r) noexcept {
  switch (r) {
    case Relation::unitarily_equivalent: return "unitarily_equivalent";
    case Relation::similar: return "similar";
    case Relation::neither: return "neither";
  }
  return "neither";
}

SimilarityResult test_similarity(const Frame& f, const Frame& g, double tol) {
  if (f.size() != g.size())
    throw Error(ErrorCode::count_mismatch, "test_similarity: " + std::to_string(f.size()) + " vs " +
                                               std::to_string(g.size()) + " elements");
  require_same_shape(f.shape(), g.shape(), "test_similarity");

  const FrameTransform tf = frame_transform(f, tol);
  const FrameTransform tg = frame_transform(g, tol);
  SimilarityResult result;
  result.range_distance = (tf.range_projection - tg.range_projection).norm();
  if (result.range_distance > tol) return result;

  const AlgebraMatrix witness = canonical_dual_operator(f, tol) * f.analysis() * g.synthesis();
  for (std::size_t j = 0; j < f.size(); ++j)
    result.witness_residual = std::max(result.witness_residual, max_abs_diff(apply(witness, f.element(j)), g.element(j)));
  const AlgebraMatrix gram_f = f.gram_matrix();
  const AlgebraMatrix gram_g = g.gram_matrix();
  result.gram_distance = max_entry_norm_diff(gram_f, gram_g);
  const double scale = 1.0 + std::max(gram_f.norm(), gram_g.norm());
  result.relation = result.gram_distance <= tol * scale ? Relation::unitarily_equivalent : Relation::similar;
  result.witness = witness;
  return result;
}

RieszReport riesz_check(const Frame& f, double tol) {
  require_frame(f, tol, "riesz_check");
  const AlgebraShape& shape = f.shape();
  const std::size_t k = f.size();
  const AlgebraMatrix& synthesis = f.synthesis();
  const double cutoff = tol * max_singular_value(synthesis);

  RieszReport report;
  double scale = 0.0;
  for (const auto& x : f.elements()) scale = std::max(scale, x.norm());

  for (std::size_t b = 0; b < shape.block_count(); ++b) {
    // Rows r with r X = 0 are conjugates of null vectors of X*.
    const CMatrix kernel = null_space_with_cutoff(synthesis.flat(b).adjoint(), cutoff);
    for (std::size_t c = 0; c < kernel.cols(); ++c) {
      ModuleVector a(shape, k);
      for (std::size_t i = 0; i < kernel.rows(); ++i) a.flat(b)(0, i) = std::conj(kernel(i, c));
      ModuleVector sum(shape, f.ambient_rank());
      for (std::size_t j = 0; j < k; ++j) {
        const ModuleVector summand = a.coord(j) * f.element(j);
        report.max_summand_norm = std::max(report.max_summand_norm, summand.norm());
        sum += summand;
      }
      report.max_kernel_residual = std::max(report.max_kernel_residual, sum.norm());
      report.kernel_generators.push_back(std::move(a));
    }
  }
  report.is_riesz_basis = report.max_summand_norm <= tol * (1.0 + scale);

  if (analyze(f, tol).is_normalized_tight) {
    bool orthogonal = true;
    for (std::size_t i = 0; i < k && orthogonal; ++i) {
      for (std::size_t j = 0; j < k && orthogonal; ++j) {
        const AlgebraElement ip = inner(f.element(i), f.element(j));
        if (i != j) {
          orthogonal = ip.norm() <= tol;
        } else {
          orthogonal = max_abs_diff(carrier_projection(ip), ip) <= std::sqrt(tol);
        }
      }
    }
    report.is_orthogonal_hilbert_basis = orthogonal;
  }
  return report;
}

Frame direct_sum(const Frame& f, const Frame& g, double tol) {
  require_same_shape(f.shape(), g.shape(), "direct_sum");
  const AlgebraShape& shape = f.shape();
  const std::size_t nf = f.ambient_rank();
  const std::size_t ng = g.ambient_rank();

  std::vector<CMatrix> proj;
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    proj.push_back(direct_sum(f.projection().flat(b), g.projection().flat(b)));

  std::vector<ModuleVector> elements;
  elements.reserve(f.size() + g.size());
  for (const auto& x : f.elements()) {
    ModuleVector padded(shape, nf + ng);
    for (std::size_t b = 0; b < shape.block_count(); ++b) padded.flat(b).set_block(0, 0, x.flat(b));
    elements.push_back(std::move(padded));
  }
  for (const auto& y : g.elements()) {
    ModuleVector padded(shape, nf + ng);
    for (std::size_t b = 0; b < shape.block_count(); ++b)
      padded.flat(b).set_block(0, nf * shape.block_size(b), y.flat(b));
    elements.push_back(std::move(padded));
  }
  return Frame(shape, SubmoduleDescriptor{nf + ng, AlgebraMatrix(shape, nf + ng, nf + ng, std::move(proj))},
               std::move(elements), tol);
}

}  // namespace modframe
