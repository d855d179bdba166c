#pragma once

// The free left Hilbert A-module A^n, its orthogonally complemented
// submodules, and adjointable module maps.
//
// A vector x = (x_1, ..., x_n) is stored per algebra block b as the
// k_b x (n k_b) matrix [x_1 | ... | x_n]. With that layout
//   <x, y> = sum_q x_q y_q*     is   X Y*       blockwise,
//   (a x)_q = a x_q             is   a X,
// and every A-linear map A^n -> A^m is right multiplication by an n x m
// matrix over A: (T x)_p = sum_q x_q T[q][p]. Consequently "first S, then T"
// is the matrix product S * T, and the module adjoint is the conjugate
// transpose over A.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modframe/algebra.hpp"

namespace modframe {

class ModuleVector {
 public:
  /// Zero vector of A^rank.
  ModuleVector(AlgebraShape shape, std::size_t rank);
  ModuleVector(AlgebraShape shape, std::span<const AlgebraElement> coords);
  ModuleVector(AlgebraShape shape, std::size_t rank, std::vector<CMatrix> flat);

  /// Standard basis vector e_q = (0, ..., 1_A, ..., 0).
  static ModuleVector basis(const AlgebraShape& shape, std::size_t rank, std::size_t q);

  const AlgebraShape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return rank_; }
  const CMatrix& flat(std::size_t b) const { return flat_.at(b); }
  CMatrix& flat(std::size_t b) { return flat_.at(b); }

  AlgebraElement coord(std::size_t q) const;
  std::vector<AlgebraElement> coords() const;
  void set_coord(std::size_t q, const AlgebraElement& a);

  /// |x| = |<x, x>|^{1/2}.
  double norm() const;

  ModuleVector& operator+=(const ModuleVector& other);
  ModuleVector& operator-=(const ModuleVector& other);
  ModuleVector& operator*=(Complex s);

 private:
  AlgebraShape shape_;
  std::size_t rank_;
  std::vector<CMatrix> flat_;
};

ModuleVector operator+(ModuleVector a, const ModuleVector& b);
ModuleVector operator-(ModuleVector a, const ModuleVector& b);
ModuleVector operator*(Complex s, ModuleVector x);
/// Left module action.
ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x);

double max_abs_diff(const ModuleVector& a, const ModuleVector& b);

/// A-valued inner product sum_q x_q y_q*, linear and A-linear in the first slot.
AlgebraElement inner(const ModuleVector& x, const ModuleVector& y);

/// Square matrix over A acting on A^n with the convention above.
using ModuleOperator = AlgebraMatrix;

/// T x for an n x m map T and x in A^n.
ModuleVector apply(const AlgebraMatrix& t, const ModuleVector& x);
inline AlgebraMatrix op_adjoint(const AlgebraMatrix& t) { return t.adjoint(); }
/// The map "first `first`, then `second`".
AlgebraMatrix compose(const AlgebraMatrix& first, const AlgebraMatrix& second);

/// Sorted union of the eigenvalues of the flattened blocks of a self-adjoint T.
std::vector<double> op_spectrum(const AlgebraMatrix& t, std::optional<double> tol = std::nullopt);

/// The submodule P(A^n) for an orthogonal projection P, or A^n itself.
struct SubmoduleDescriptor {
  std::size_t ambient_rank = 0;
  std::optional<AlgebraMatrix> projection;

  /// The projection, or the identity of A^ambient_rank when absent.
  AlgebraMatrix projection_or_identity(const AlgebraShape& shape) const;
  /// Throws InvalidArgument unless P^2 = P = P* within tol and sizes match.
  void validate(double tol = 1e-9) const;
};

/// Maps Hilbert-space vectors v in C^n to module vectors with coords v_q 1_A.
std::vector<ModuleVector> embed_hilbert_frame(std::span<const std::vector<Complex>> vectors,
                                              const AlgebraShape& shape);

/// Block b of each vector, stacked: (count k_b) x (n k_b). Row block j is x_j.
CMatrix stack_block(std::span<const ModuleVector> vectors, std::size_t b);

}  // namespace modframe
