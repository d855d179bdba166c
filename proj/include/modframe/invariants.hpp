#pragma once

// Isomorphism invariants of finitely generated projective modules.
//
// Every frame f of a module M induces the A-valued inner product
// <x, y>_0 = <S x, y> with S = pinv(G), under which f is normalized tight:
// sum_j <x, x_j>_0 x_j = x S G = x on M. Its Gram matrix [<x_i, x_j>_0] is
// the range projection of the synthesis matrix and determines M together
// with its generating set up to unitary isomorphism.

#include <cstddef>
#include <optional>
#include <vector>

#include "modframe/frame.hpp"

namespace modframe {

struct GramInvariant {
  std::size_t k = 0;
  /// k x k, entry (i, j) = <x_i, x_j>_0. An orthogonal projection in M_k(A).
  AlgebraMatrix gram;
};

/// <S x, y> for a positive metric operator S.
AlgebraElement metric_inner(const AlgebraMatrix& metric, const ModuleVector& x, const ModuleVector& y);

struct MetricAnalysis {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool is_normalized_tight = false;
  /// |P S G - P|: failure of sum_j <x, x_j>_S x_j = x on the module.
  double reconstruction_defect = 0.0;
};

/// Frame bounds of f when A^n carries the inner product <S x, y>: the
/// spectrum of S^{1/2} G S^{1/2} above tol times its largest eigenvalue.
MetricAnalysis analyze_with_metric(const Frame& f, const AlgebraMatrix& metric, double tol = kFrameTol);

struct NormalizedTightMetric {
  AlgebraMatrix metric;  ///< S = pinv(G)
  GramInvariant invariant;
  MetricAnalysis check;  ///< re-analysis of f under the new metric
};

/// NotAFrame unless f is a frame; VerificationFailed if the re-analysis does
/// not come out normalized tight.
NormalizedTightMetric normalized_tight_inner_product(const Frame& f, double tol = kFrameTol);

/// Same matrix computed as U_r U_r* from the SVD of the synthesis blocks. Used
/// as an independent route in tests and by the CLI cross-check.
AlgebraMatrix gram_invariant_by_svd(const Frame& f, double tol = kFrameTol);

/// Entrywise A-norm comparison with tolerance tol (1 + max |gram|).
bool grams_match(const AlgebraMatrix& a, const AlgebraMatrix& b, double tol);

struct UnitaryReconstruction {
  AlgebraMatrix v;                 ///< n_f x n_g, V(x) = x V
  double image_residual = 0.0;     ///< max_j |V x_j - y_j|
  double isometry_defect = 0.0;    ///< |P_f V V* P_f - P_f|
  double range_defect = 0.0;       ///< |V* P_f V - P_g|
};

/// V = theta_g* theta_f for normalized tight f, g with equal Gram matrices.
/// NotNormalizedTight, CountMismatch, InvalidArgument (a zero element) or
/// GramMismatch when the preconditions fail.
UnitaryReconstruction build_unitary_from_matching_grams(const Frame& f, const Frame& g, double tol = kFrameTol);

/// A permutation p with b[p(i)][p(j)] = a[i][j] within tol, found by
/// backtracking. InvalidArgument for k > 8.
std::optional<std::vector<std::size_t>> find_matching_permutation(const AlgebraMatrix& a, const AlgebraMatrix& b,
                                                                  double tol = kFrameTol);

/// Reorders the elements of f: element i of the result is element p(i) of f.
Frame permute_frame(const Frame& f, const std::vector<std::size_t>& p, double tol = kFrameTol);

struct ChangeOfBasis {
  AlgebraMatrix f;  ///< l x k, y_i = sum_j f_ij x_j
  AlgebraMatrix g;  ///< k x l, x_j = sum_i g_ji y_i
  double y_residual = 0.0;
  double x_residual = 0.0;
  PenroseResiduals mp{};
};

/// Coefficients through the canonical duals: f_ij = <y_i, S_f x_j>,
/// g_ji = <x_j, S_g y_i>. NotRieszBasis unless both are Riesz bases;
/// ExpansionResidualTooLarge if either expansion misses by more than
/// tol (1 + max |element|), which happens when the modules differ.
ChangeOfBasis change_of_basis_mp(const Frame& x, const Frame& y, double tol = kFrameTol);

}  // namespace modframe
