#pragma once

// Closest tight frames in a finite-dimensional Hilbert space C^n.
//
// A frame {x_1, ..., x_k} is held as the n x k matrix X = [x_1 ... x_k]. The
// analysis map is T = X* (k x n, (T x)_j = <x, x_j>), so T*T = X X*, and the
// frame operator is S = (T*T)^{-1} taken on the span. With X = U diag(s) V*
// the tight frames of interest are lambda S^{1/2} X = lambda U V*, and
// every distance below reduces to a function of the singular values s_j,
// i.e. of mu_j = sqrt(eigenvalues of T*T).

#include <cstddef>
#include <vector>

#include "modframe/frame.hpp"
#include "modframe/kernels.hpp"

namespace modframe {

class HilbertFrame {
 public:
  /// DimensionMismatch unless every vector has length dim.
  HilbertFrame(std::size_t dim, const std::vector<std::vector<Complex>>& vectors);
  /// Columns of an n x k matrix.
  explicit HilbertFrame(CMatrix columns);

  std::size_t dim() const noexcept { return x_.rows(); }
  std::size_t size() const noexcept { return x_.cols(); }
  const CMatrix& matrix() const noexcept { return x_; }
  std::vector<Complex> vector(std::size_t j) const { return x_.column_values(j); }
  std::vector<std::vector<Complex>> vectors() const;
  /// T = X*.
  CMatrix analysis() const { return x_.adjoint(); }

 private:
  CMatrix x_;
};

/// Shape [1] modular frame with the same vectors.
Frame to_modular_frame(const HilbertFrame& x, double tol = kFrameTol);

struct HilbertBounds {
  double lower = 0.0;  ///< C
  double upper = 0.0;  ///< D
  std::size_t rank = 0;
  std::vector<double> mu;  ///< sqrt of the nonzero eigenvalues of T*T, ascending
  /// D < (9/4) C. Reported as a diagnostic only.
  bool spans_same_space_flag = false;
};

/// Eigenvalues of X X* above tol times the largest. EmptyFrame for k = 0 or a zero frame.
HilbertBounds frame_bounds(const HilbertFrame& x, double tol = kFrameTol);

/// (X X*)^{+1/2}, i.e. S^{1/2} on the span and 0 on its complement.
CMatrix frame_operator_sqrt(const HilbertFrame& x, double tol = kFrameTol);

/// c(y, x): the least C with |sum_i c_i (x_i - y_i)| <= C |sum_i c_i y_i|.
/// Equals |(X_x - X_y) pinv(X_y)| when ker X_y lies in ker(X_x - X_y) and is
/// +infinity otherwise. DimensionMismatch when the sizes differ.
double quadratic_closeness(const HilbertFrame& x, const HilbertFrame& y, double tol = kFrameTol);

struct DistanceReport {
  double c_yx = 0.0;
  double c_xy = 0.0;
  double d_xy = 0.0;  ///< log(max(c_xy, c_yx) + 1)
  /// Outcome of test_similarity on the shape [1] embeddings.
  bool similar = false;
  /// d finite exactly when the frames are similar.
  bool consistent = false;
};

DistanceReport nearness(const HilbertFrame& x, const HilbertFrame& y, double tol = kFrameTol);

struct TightCandidate {
  double lambda = 0.0;
  HilbertFrame frame;
  double minimum = 0.0;   ///< closed-form optimum
  double achieved = 0.0;  ///< the matching distance evaluated on `frame`
};

struct BalanResult {
  HilbertBounds bounds;
  TightCandidate arithmetic;  ///< lambda = (sqrt C + sqrt D) / 2, minimizes c(y, x)
  TightCandidate harmonic;    ///< lambda = 2 sqrt(CD) / (sqrt C + sqrt D), minimizes c(x, y)
  TightCandidate geometric;   ///< lambda = (CD)^{1/4}, minimizes d(x, y)
};

/// NotAFrame for a zero frame; VerificationFailed if an achieved value
/// misses its minimum by more than 1e-8 (1 + minimum).
BalanResult balan_minimizers(const HilbertFrame& x, double tol = kFrameTol);

struct SymmetricApproximation {
  HilbertFrame frame;          ///< {S^{1/2} x_i}
  double certificate = 0.0;    ///< |P - |T*||_{HS}, P the projection onto range(T)
  double distance_sq = 0.0;    ///< sum_j |S^{1/2} x_j - x_j|^2
  double tightness_defect = 0.0;  ///< |Y Y* - P_span| for the output Y
};

/// VerificationFailed if the output is not normalized tight within tol or
/// certificate^2 and distance_sq differ by more than 1e-8.
SymmetricApproximation symmetric_approximation(const HilbertFrame& x, double tol = kFrameTol);

struct LoewdinResult {
  SymmetricApproximation approximation;
  double orthonormality_defect = 0.0;  ///< |Y* Y - 1|
};

/// NotABasis if the vectors are linearly dependent (k > rank).
LoewdinResult loewdin_orthogonalization(const HilbertFrame& x, double tol = kFrameTol);

struct TightMultiple {
  double lambda = 0.0;
  HilbertFrame frame;
  double distance = 0.0;         ///< max_j |lambda - mu_j|
  double direct_distance = 0.0;  ///< |T_lambda - T_x| by SVD
};

/// lambda = (sqrt C + sqrt D) / 2. VerificationFailed if the spectral and
/// direct distances disagree beyond tol (1 + distance).
TightMultiple closest_tight_multiple(const HilbertFrame& x, double tol = kFrameTol);

struct LambdaScan {
  std::vector<double> lambdas;
  std::vector<double> distances;  ///< |lambda' S^{1/2} X - X| for each grid point
  double best_lambda = 0.0;
  double best_distance = 0.0;
  double resolution = 0.0;  ///< grid spacing
};

/// Scan of lambda' over [sqrt C, sqrt D] with `points` >= 2 grid points.
LambdaScan scan_tight_multiples(const HilbertFrame& x, std::size_t points, double tol = kFrameTol,
                                kernels::Execution ex = kernels::Execution::parallel);

/// x_1 = e_1, x_2 = 3 e_2, x_i = 2 e_i for 3 <= i <= n. InvalidArgument for n < 3.
HilbertFrame example_56_frame(std::size_t n = 4);

struct Example56Point {
  HilbertFrame y;  ///< y_i = 2 e_i except y_3 = 2 e^{i phi} e_3
  double distance = 0.0;  ///< |T_x - T_y|
};

Example56Point example_56_family(double phi, std::size_t n = 4);

/// Half-width 2 arcsin(1/4) of the interval of phi with |T_x - T_y| = 1.
double example_56_half_width();

}  // namespace modframe
