#include "modframe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "modframe/error.hpp"

namespace modframe {

namespace {

constexpr int kMaxSweeps = 80;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Columns of the one-sided iteration count as orthogonal once
// |w_p* w_q| <= kOrthoTol |w_p| |w_q|.
constexpr double kOrthoTol = 1e-15;

// Plane rotation that diagonalizes the Hermitian 2x2 [[app, apq], [conj(apq), aqq]].
// Acting on columns: new_p = c col_p - s conj(e) col_q, new_q = s e col_p + c col_q.
struct Rotation {
  double c;
  double s;
  Complex e;
};

Rotation jacobi_rotation(double app, double aqq, Complex apq) {
  const double mag = std::abs(apq);
  const Complex e = apq / mag;
  const double theta = (aqq - app) / (2.0 * mag);
  const double t = theta == 0.0 ? 1.0
                                : std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(1.0, theta));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, e};
}

void rotate_columns(CMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const Complex se = r.s * r.e;
  const Complex se_conj = r.s * std::conj(r.e);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const Complex mp = m(i, p);
    const Complex mq = m(i, q);
    m(i, p) = r.c * mp - se_conj * mq;
    m(i, q) = se * mp + r.c * mq;
  }
}

// Rows p, q of W* m, with W the rotation above.
void rotate_rows(CMatrix& m, std::size_t p, std::size_t q, const Rotation& r) {
  const Complex se = r.s * r.e;
  const Complex se_conj = r.s * std::conj(r.e);
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Complex mp = m(p, j);
    const Complex mq = m(q, j);
    m(p, j) = r.c * mp - se * mq;
    m(q, j) = se_conj * mp + r.c * mq;
  }
}

// Tall case (rows >= cols) of the one-sided Jacobi SVD.
Svd svd_tall(const CMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  CMatrix w = m;
  CMatrix v = CMatrix::identity(cols);

  bool converged = cols < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < cols; ++p) {
      for (std::size_t q = p + 1; q < cols; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(w(i, p));
          beta += std::norm(w(i, q));
          gamma += std::conj(w(i, p)) * w(i, q);
        }
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= kOrthoTol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const Rotation r = jacobi_rotation(alpha, beta, gamma);
        rotate_columns(w, p, q, r);
        rotate_columns(v, p, q, r);
      }
    }
  }
  if (!converged) throw Error(ErrorCode::no_convergence, "svd: one-sided Jacobi sweep budget exhausted");

  std::vector<double> norms(cols);
  for (std::size_t j = 0; j < cols; ++j) norms[j] = w.column(j).frobenius_norm();
  std::vector<std::size_t> order(cols);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return norms[a] > norms[b]; });

  Svd out{CMatrix(rows, cols), std::vector<double>(cols), CMatrix(cols, cols)};
  const double sigma_max = cols > 0 ? norms[order[0]] : 0.0;
  std::vector<std::size_t> deficient;
  for (std::size_t k = 0; k < cols; ++k) {
    const std::size_t j = order[k];
    out.singular_values[k] = norms[j];
    for (std::size_t i = 0; i < cols; ++i) out.v(i, k) = v(i, j);
    if (norms[j] > 0.0 && norms[j] > 1e-14 * sigma_max) {
      for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = w(i, j) / norms[j];
    } else {
      deficient.push_back(k);
    }
  }

  // Complete U with unit vectors orthogonalized against the columns set so far.
  std::vector<bool> filled(cols, true);
  for (std::size_t k : deficient) filled[k] = false;
  std::size_t candidate = 0;
  for (std::size_t k : deficient) {
    while (candidate < rows) {
      std::vector<Complex> x(rows, 0.0);
      x[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < cols; ++c) {
          if (!filled[c]) continue;
          Complex dot = 0.0;
          for (std::size_t i = 0; i < rows; ++i) dot += std::conj(out.u(i, c)) * x[i];
          for (std::size_t i = 0; i < rows; ++i) x[i] -= dot * out.u(i, c);
        }
      }
      double nrm = 0.0;
      for (const auto& xi : x) nrm += std::norm(xi);
      nrm = std::sqrt(nrm);
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < rows; ++i) out.u(i, k) = x[i] / nrm;
        filled[k] = true;
        break;
      }
    }
  }
  return out;
}

double relative_cutoff(const std::vector<double>& sigma, std::optional<double> rank_tol) {
  const double smax = sigma.empty() ? 0.0 : sigma.front();
  return rank_tol.value_or(kRankTol) * smax;
}

}  // namespace

double default_hermitian_tol(const CMatrix& m) { return 1e-10 * (1.0 + m.frobenius_norm()); }

double default_psd_tol(const CMatrix& m) { return 1e-9 * (1.0 + m.frobenius_norm()); }

HermitianEigen eig_hermitian(const CMatrix& m, std::optional<double> tol) {
  if (!m.is_square()) throw Error(ErrorCode::shape_mismatch, "eig_hermitian: matrix is not square");
  const double htol = tol.value_or(default_hermitian_tol(m));
  const double defect = hermitian_defect(m);
  if (defect > htol) {
    throw Error(ErrorCode::not_hermitian,
                "eig_hermitian: |m - m*| = " + std::to_string(defect) + " exceeds " + std::to_string(htol));
  }

  const std::size_t n = m.rows();
  CMatrix a = hermitian_part(m);
  CMatrix v = CMatrix::identity(n);
  const double scale = a.frobenius_norm();
  const double floor = kEps * kEps * scale;

  bool converged = n < 2 || scale == 0.0;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        if (mag <= std::max(kEps * std::sqrt(std::abs(app * aqq)), floor)) continue;
        converged = false;
        const Rotation r = jacobi_rotation(app, aqq, apq);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, r);
      }
    }
  }
  if (!converged) throw Error(ErrorCode::no_convergence, "eig_hermitian: Jacobi sweep budget exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermitianEigen out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

Svd svd(const CMatrix& m) {
  if (m.rows() >= m.cols()) return svd_tall(m);
  Svd t = svd_tall(m.adjoint());
  return {std::move(t.v), std::move(t.singular_values), std::move(t.u)};
}

Polar polar(const CMatrix& m, std::optional<double> rank_tol) {
  const Svd d = svd(m);
  const double cutoff = relative_cutoff(d.singular_values, rank_tol);
  CMatrix w(m.rows(), m.cols());
  CMatrix p(m.cols(), m.cols());
  for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
    const double sigma = d.singular_values[k];
    for (std::size_t i = 0; i < m.cols(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) p(i, j) += sigma * d.v(i, k) * std::conj(d.v(j, k));
    }
    if (sigma <= cutoff || sigma == 0.0) continue;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) += d.u(i, k) * std::conj(d.v(j, k));
    }
  }
  return {std::move(w), std::move(p)};
}

CMatrix hermitian_function(const CMatrix& m, const std::function<double(double)>& f,
                           std::optional<double> tol) {
  const HermitianEigen e = eig_hermitian(m, tol);
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double fk = f(e.values[k]);
    if (fk == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = fk * e.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return out;
}

CMatrix sqrt_psd(const CMatrix& m, std::optional<double> tol) {
  const double ptol = tol.value_or(default_psd_tol(m));
  const HermitianEigen e = eig_hermitian(m, std::max(ptol, default_hermitian_tol(m)));
  if (!e.values.empty() && e.values.front() < -ptol) {
    throw Error(ErrorCode::not_positive,
                "sqrt_psd: eigenvalue " + std::to_string(e.values.front()) + " below -" + std::to_string(ptol));
  }
  const std::size_t n = m.rows();
  CMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(0.0, e.values[k]));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex vik = root * e.vectors(i, k);
      for (std::size_t j = 0; j < n; ++j) out(i, j) += vik * std::conj(e.vectors(j, k));
    }
  }
  return out;
}

CMatrix pinv_with_cutoff(const CMatrix& m, double cutoff) {
  const Svd d = svd(m);
  CMatrix out(m.cols(), m.rows());
  for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
    const double sigma = d.singular_values[k];
    if (sigma <= cutoff || sigma == 0.0) continue;
    for (std::size_t i = 0; i < m.cols(); ++i) {
      const Complex vik = d.v(i, k) / sigma;
      for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += vik * std::conj(d.u(j, k));
    }
  }
  return out;
}

CMatrix pinv(const CMatrix& m, std::optional<double> rank_tol) {
  if (m.empty()) return CMatrix(m.cols(), m.rows());
  const Svd d = svd(m);
  return pinv_with_cutoff(m, relative_cutoff(d.singular_values, rank_tol));
}

double op_norm(const CMatrix& m) {
  if (m.empty()) return 0.0;
  const Svd d = svd(m);
  return d.singular_values.front();
}

double hs_norm(const CMatrix& m) { return m.frobenius_norm(); }

CMatrix range_projection_with_cutoff(const CMatrix& m, double cutoff) {
  const Svd d = svd(m);
  CMatrix out(m.rows(), m.rows());
  for (std::size_t k = 0; k < d.singular_values.size(); ++k) {
    const double sigma = d.singular_values[k];
    if (sigma <= cutoff || sigma == 0.0) continue;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.rows(); ++j) out(i, j) += d.u(i, k) * std::conj(d.u(j, k));
  }
  return out;
}

CMatrix range_projection(const CMatrix& m, std::optional<double> rank_tol) {
  if (m.empty()) return CMatrix(m.rows(), m.rows());
  const Svd d = svd(m);
  return range_projection_with_cutoff(m, relative_cutoff(d.singular_values, rank_tol));
}

CMatrix null_space_with_cutoff(const CMatrix& m, double cutoff) {
  const std::size_t n = m.cols();
  if (n == 0) return CMatrix(0, 0);
  // Complement of the row space, read off the spectrum of I - P_row.
  CMatrix complement = CMatrix::identity(n);
  if (m.rows() > 0) complement -= range_projection_with_cutoff(m.adjoint(), cutoff);
  const HermitianEigen e = eig_hermitian(hermitian_part(complement), 1e-6);
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < n; ++k)
    if (e.values[k] > 0.5) keep.push_back(k);
  CMatrix out(n, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    for (std::size_t i = 0; i < n; ++i) out(i, c) = e.vectors(i, keep[c]);
  return out;
}

CMatrix null_space(const CMatrix& m, std::optional<double> rank_tol) {
  if (m.empty()) return CMatrix::identity(m.cols());
  const Svd d = svd(m);
  return null_space_with_cutoff(m, relative_cutoff(d.singular_values, rank_tol));
}

std::size_t numerical_rank(const CMatrix& m, std::optional<double> rank_tol) {
  if (m.empty()) return 0;
  const Svd d = svd(m);
  const double cutoff = relative_cutoff(d.singular_values, rank_tol);
  return static_cast<std::size_t>(std::count_if(d.singular_values.begin(), d.singular_values.end(),
                                                [&](double s) { return s > cutoff && s > 0.0; }));
}

}  // namespace modframe
