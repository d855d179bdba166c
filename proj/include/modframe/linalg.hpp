#pragma once

// Dense decompositions for small complex matrices. Everything above this
// layer (algebras, modules, frames) reduces to calls into these routines.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "modframe/matrix.hpp"

namespace modframe {

/// Relative rank cutoff: singular values below kRankTol * sigma_max count as zero.
inline constexpr double kRankTol = 1e-9;

/// 1e-10 * (1 + |m|_F): two orders above double round-off at desk scale.
double default_hermitian_tol(const CMatrix& m);
/// 1e-9 * (1 + |m|_F); eigenvalues in [-tol, 0) are clamped to zero.
double default_psd_tol(const CMatrix& m);

struct HermitianEigen {
  std::vector<double> values;  ///< ascending
  CMatrix vectors;             ///< unitary, column i pairs with values[i]
};

/// Cyclic complex Jacobi. Throws NotHermitian when |m - m*| exceeds `tol`
/// and NoConvergence when the sweep budget runs out.
HermitianEigen eig_hermitian(const CMatrix& m, std::optional<double> tol = std::nullopt);

struct Svd {
  CMatrix u;                            ///< rows x p, orthonormal columns
  std::vector<double> singular_values;  ///< p = min(rows, cols), descending
  CMatrix v;                            ///< cols x p, orthonormal columns
};

/// Thin SVD by one-sided (Hestenes) Jacobi, i.e. Jacobi on m*m without
/// forming the product.
Svd svd(const CMatrix& m);

struct Polar {
  CMatrix isometry;  ///< partial isometry w with w*w = support projection of `modulus`
  CMatrix modulus;   ///< (m*m)^{1/2}
};

/// m = isometry * modulus.
Polar polar(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);

/// Applies f to the spectrum of a Hermitian matrix.
CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& f,
                           std::optional<double> tol = std::nullopt);

/// Positive square root; NotPositive when an eigenvalue is below -tol.
CMatrix sqrt_psd(const CMatrix& m, std::optional<double> tol = std::nullopt);

/// Moore-Penrose inverse with relative cutoff `rank_tol` (default kRankTol).
CMatrix pinv(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);
/// Moore-Penrose inverse dropping singular values <= `cutoff` (absolute).
CMatrix pinv_with_cutoff(const CMatrix& m, double cutoff);

double op_norm(const CMatrix& m);
double hs_norm(const CMatrix& m);

/// Orthogonal projection onto the column space.
CMatrix range_projection(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);
CMatrix range_projection_with_cutoff(const CMatrix& m, double cutoff);

/// Orthonormal basis (as columns) of {v : m v = 0}.
CMatrix null_space(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);
CMatrix null_space_with_cutoff(const CMatrix& m, double cutoff);

std::size_t numerical_rank(const CMatrix& m, std::optional<double> rank_tol = std::nullopt);

}  // namespace modframe
