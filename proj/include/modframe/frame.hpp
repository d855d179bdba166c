#pragma once

// Modular frames of orthogonally complemented submodules of A^n: bounds,
// frame transform, canonical dual and reconstruction, frames from partial
// isometries, similarity, and the modular Riesz-basis test.
//
// For a frame {x_1, ..., x_k} the synthesis map A^k -> A^n, e_j -> x_j, is
// the k x n matrix over A whose row j is x_j; the analysis map (frame
// transform) x -> (<x, x_j>)_j is its adjoint. G = theta* theta is the
// n x n operator x -> sum_j <x, x_j> x_j, and the frame bounds are the
// extreme eigenvalues of G on its support. For adjointable positive G,
// C P <= G <= D P is the same statement as the cone inequality
// C <x,x> <= sum_j <x,x_j><x_j,x> <= D <x,x> over the submodule.

#include <cstddef>
#include <optional>
#include <vector>

#include "modframe/module.hpp"

namespace modframe {

inline constexpr double kFrameTol = 1e-9;

class Frame {
 public:
  /// Throws VectorOutsideModule if some |P x_j - x_j| exceeds tol (1 + |x_j|),
  /// ShapeMismatch on inconsistent shapes or ranks, InvalidArgument for a bad projection.
  Frame(AlgebraShape shape, SubmoduleDescriptor module, std::vector<ModuleVector> elements,
        double tol = kFrameTol);

  /// Frame of the full module A^n; `elements` must be non-empty.
  static Frame of_free_module(std::vector<ModuleVector> elements, double tol = kFrameTol);

  const AlgebraShape& shape() const noexcept { return shape_; }
  std::size_t ambient_rank() const noexcept { return module_.ambient_rank; }
  std::size_t size() const noexcept { return elements_.size(); }
  const std::vector<ModuleVector>& elements() const noexcept { return elements_; }
  const ModuleVector& element(std::size_t j) const { return elements_.at(j); }
  const SubmoduleDescriptor& module() const noexcept { return module_; }

  /// Orthogonal projection onto the submodule (identity for A^n).
  const AlgebraMatrix& projection() const noexcept { return projection_; }
  /// k x n synthesis map theta*.
  const AlgebraMatrix& synthesis() const noexcept { return synthesis_; }
  /// n x k analysis map theta.
  AlgebraMatrix analysis() const { return synthesis_.adjoint(); }
  /// G = theta* theta, G[q][p] = sum_j (x_j)_q* (x_j)_p.
  const AlgebraMatrix& gram_operator() const noexcept { return gram_; }
  /// k x k matrix [<x_i, x_j>].
  AlgebraMatrix gram_matrix() const { return synthesis_ * analysis(); }

 private:
  AlgebraShape shape_;
  SubmoduleDescriptor module_;
  std::vector<ModuleVector> elements_;
  AlgebraMatrix projection_;
  AlgebraMatrix synthesis_;
  AlgebraMatrix gram_;
};

struct FrameReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool is_frame = false;
  bool is_tight = false;
  bool is_normalized_tight = false;
  /// Support projection of G.
  AlgebraMatrix support;
  /// Eigenvalues of G per algebra block, ascending.
  std::vector<std::vector<double>> spectra;
  std::size_t support_rank = 0;
  std::size_t module_rank = 0;
  /// D / C, infinite when not a frame.
  double condition = 0.0;
};

/// EmptyFrame for k = 0. A sequence whose G has smaller support than the
/// submodule does not generate it and is reported with is_frame = false.
FrameReport analyze(const Frame& f, double tol = kFrameTol);

/// Rank cutoff used for G throughout: tol times the largest eigenvalue.
double gram_cutoff(const Frame& f, double tol = kFrameTol);

/// S = pinv(G) on the support of G.
AlgebraMatrix canonical_dual_operator(const Frame& f, double tol = kFrameTol);

struct FrameTransform {
  AlgebraMatrix analysis;          ///< theta, n x k
  AlgebraMatrix range_projection;  ///< Q = theta S theta*, orthogonal projection of A^k onto theta(M)
  double projection_defect = 0.0;  ///< max(|Q^2 - Q|, |Q* - Q|)
  double synthesis_defect = 0.0;   ///< max_j |theta*(e_j) - x_j|
  double isometry_defect = 0.0;    ///< |theta* theta - P|
  bool is_isometry = false;
};

/// NotAFrame unless analyze(f).is_frame.
FrameTransform frame_transform(const Frame& f, double tol = kFrameTol);

/// The frame {S x_j}.
Frame canonical_dual(const Frame& f, double tol = kFrameTol);

/// sum_j <x, S x_j> x_j. VectorOutsideModule if |P x - x| > tol (1 + |x|).
ModuleVector reconstruct(const Frame& f, const ModuleVector& x, double tol = kFrameTol);

/// {V e_j} as a frame of V(A^n) = range(V V*). NotPartialIsometry unless
/// V*V is a projection within tol.
Frame from_partial_isometry(const AlgebraMatrix& v, double tol = kFrameTol);

enum class Relation { unitarily_equivalent, similar, neither };
const char* to_string(Relation r) noexcept;

struct SimilarityResult {
  Relation relation = Relation::neither;
  /// T with T(x_j) = y_j, mapping A^{n_f} to A^{n_g}; present when similar.
  std::optional<AlgebraMatrix> witness;
  double range_distance = 0.0;    ///< |Q_f - Q_g|
  double witness_residual = 0.0;  ///< max_j |T x_j - y_j|
  double gram_distance = 0.0;     ///< max entry norm of [<x_i,x_j>] - [<y_i,y_j>]
};

/// Frames are similar iff their frame transforms have the same range. Since
/// the x_j generate the module, T is unitary on it iff <T x_i, T x_j> =
/// <x_i, x_j> for all pairs, which is the Gram-matrix comparison.
/// CountMismatch if the element counts differ.
SimilarityResult test_similarity(const Frame& f, const Frame& g, double tol = kFrameTol);

struct RieszReport {
  bool is_riesz_basis = false;
  bool is_orthogonal_hilbert_basis = false;
  /// Generators (a_1, ..., a_k) of ker theta*, as elements of A^k.
  std::vector<ModuleVector> kernel_generators;
  double max_summand_norm = 0.0;     ///< max over generators and j of |a_j x_j|
  double max_kernel_residual = 0.0;  ///< max over generators of |sum_j a_j x_j|
};

/// A generating set is a Riesz basis iff every relation sum_j a_j x_j = 0
/// forces each a_j x_j = 0. Relations are enumerated through an orthonormal
/// basis of the kernel of each flattened synthesis block; the condition is
/// linear, so checking a basis suffices. NotAFrame unless f is a frame.
RieszReport riesz_check(const Frame& f, double tol = kFrameTol);

/// Frame of P_f(A^{n_f}) + P_g(A^{n_g}) inside A^{n_f + n_g} made of the
/// elements (x_j, 0) followed by (0, y_i).
Frame direct_sum(const Frame& f, const Frame& g, double tol = kFrameTol);

}  // namespace modframe
