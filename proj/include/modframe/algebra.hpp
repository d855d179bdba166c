#pragma once

// Finite-dimensional C*-algebras A = M_{k_1}(C) + ... + M_{k_m}(C).
//
// Elements and matrices over A are stored "flattened": one complex matrix
// per algebra block. An r x c matrix over A holds, for block b, an
// (r k_b) x (c k_b) complex matrix whose (i, j) sub-block of size k_b is
// block b of entry (i, j). Products, adjoints and Moore-Penrose inverses of
// matrices over A are then the blockwise complex operations.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "modframe/linalg.hpp"
#include "modframe/matrix.hpp"

namespace modframe {

class AlgebraShape {
 public:
  /// Throws InvalidArgument for an empty list or a zero block size.
  explicit AlgebraShape(std::vector<std::size_t> blocks);

  std::span<const std::size_t> blocks() const noexcept { return blocks_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t block_size(std::size_t b) const { return blocks_.at(b); }
  /// Complex dimension sum k_i^2.
  std::size_t dimension() const noexcept;

  bool operator==(const AlgebraShape&) const = default;

 private:
  std::vector<std::size_t> blocks_;
};

class AlgebraElement {
 public:
  /// Zero element.
  explicit AlgebraElement(AlgebraShape shape);
  AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks);

  static AlgebraElement zero(const AlgebraShape& shape) { return AlgebraElement(shape); }
  static AlgebraElement unit(const AlgebraShape& shape);
  static AlgebraElement scalar(const AlgebraShape& shape, Complex value);

  const AlgebraShape& shape() const noexcept { return shape_; }
  const CMatrix& block(std::size_t b) const { return blocks_.at(b); }
  CMatrix& block(std::size_t b) { return blocks_.at(b); }
  std::span<const CMatrix> blocks() const noexcept { return blocks_; }

  AlgebraElement adjoint() const;
  /// C*-norm: largest operator norm over the blocks.
  double norm() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

 private:
  AlgebraShape shape_;
  std::vector<CMatrix> blocks_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex s, AlgebraElement a);

inline AlgebraElement mul(const AlgebraElement& a, const AlgebraElement& b) { return a * b; }
inline AlgebraElement adjoint(const AlgebraElement& a) { return a.adjoint(); }
inline double norm(const AlgebraElement& a) { return a.norm(); }

/// max over blocks of the entrywise distance.
double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b);

/// 1e-9 * (1 + |a|).
double default_positivity_tol(const AlgebraElement& a);

/// Every blockwise eigenvalue >= -tol. NotHermitian if a != a* beyond tol.
bool is_positive(const AlgebraElement& a, std::optional<double> tol = std::nullopt);
/// is_positive(b - a).
bool leq(const AlgebraElement& a, const AlgebraElement& b, std::optional<double> tol = std::nullopt);

/// Smallest projection p with p a = a p = a, by eigenvalue thresholding at
/// rank_tol times the largest eigenvalue over all blocks. The carrier of 0 is 0.
AlgebraElement carrier_projection(const AlgebraElement& a, std::optional<double> rank_tol = std::nullopt);

/// r x c matrix over A in flattened storage (see file comment).
class AlgebraMatrix {
 public:
  AlgebraMatrix(AlgebraShape shape, std::size_t rows, std::size_t cols);
  AlgebraMatrix(AlgebraShape shape, std::size_t rows, std::size_t cols, std::vector<CMatrix> flat);

  static AlgebraMatrix identity(const AlgebraShape& shape, std::size_t n);
  static AlgebraMatrix from_entries(const AlgebraShape& shape,
                                    const std::vector<std::vector<AlgebraElement>>& entries);
  /// 1 x 1 matrix holding `a`.
  static AlgebraMatrix from_element(const AlgebraElement& a);

  const AlgebraShape& shape() const noexcept { return shape_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const CMatrix& flat(std::size_t b) const { return flat_.at(b); }
  CMatrix& flat(std::size_t b) { return flat_.at(b); }

  AlgebraElement entry(std::size_t i, std::size_t j) const;
  void set_entry(std::size_t i, std::size_t j, const AlgebraElement& a);

  /// Conjugate transpose over A: entry (j, i) becomes entry(i, j)*.
  AlgebraMatrix adjoint() const;
  /// C*-norm of M_{r,c}(A): largest operator norm over the flattened blocks.
  double norm() const;

  AlgebraMatrix& operator+=(const AlgebraMatrix& other);
  AlgebraMatrix& operator-=(const AlgebraMatrix& other);
  AlgebraMatrix& operator*=(Complex s);

 private:
  AlgebraShape shape_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<CMatrix> flat_;
};

AlgebraMatrix operator+(AlgebraMatrix a, const AlgebraMatrix& b);
AlgebraMatrix operator-(AlgebraMatrix a, const AlgebraMatrix& b);
/// Matrix product over A: (a b)_{ij} = sum_l a_{il} b_{lj}.
AlgebraMatrix operator*(const AlgebraMatrix& a, const AlgebraMatrix& b);
AlgebraMatrix operator*(Complex s, AlgebraMatrix a);

double max_abs_diff(const AlgebraMatrix& a, const AlgebraMatrix& b);
/// Largest C*-norm of an entry of a - b.
double max_entry_norm_diff(const AlgebraMatrix& a, const AlgebraMatrix& b);
/// Largest singular value over all flattened blocks.
double max_singular_value(const AlgebraMatrix& m);

/// Moore-Penrose inverse of a matrix over A. The cutoff is rank_tol (default
/// kRankTol) times the largest singular value over all blocks.
AlgebraMatrix mp_inverse_matrix(const AlgebraMatrix& f, std::optional<double> rank_tol = std::nullopt);
AlgebraMatrix mp_inverse_with_cutoff(const AlgebraMatrix& f, double cutoff);

/// Residuals of the four Penrose identities for the pair (f, g).
struct PenroseResiduals {
  double fgf = 0.0;           ///< |f g f - f|
  double gfg = 0.0;           ///< |g f g - g|
  double fg_hermitian = 0.0;  ///< |(f g)* - f g|
  double gf_hermitian = 0.0;  ///< |(g f)* - g f|
  double max() const;
};
PenroseResiduals penrose_residuals(const AlgebraMatrix& f, const AlgebraMatrix& g);

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where);

}  // namespace modframe
