#include "modframe/random.hpp"

#include <cmath>

#include "modframe/error.hpp"

namespace modframe {

double Rng::uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }

std::size_t Rng::uniform_index(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(gen_);
}

double Rng::normal() { return normal_(gen_); }

Complex Rng::complex_normal() {
  constexpr double kHalf = 0.70710678118654752440;
  const double re = normal_(gen_);
  const double im = normal_(gen_);
  return {kHalf * re, kHalf * im};
}

CMatrix Rng::gaussian(std::size_t rows, std::size_t cols) {
  CMatrix m(rows, cols);
  for (auto& v : m.data()) v = complex_normal();
  return m;
}

CMatrix Rng::hermitian(std::size_t n) { return hermitian_part(gaussian(n, n)); }

CMatrix Rng::isometry(std::size_t rows, std::size_t cols) {
  if (cols > rows) throw Error(ErrorCode::invalid_argument, "isometry: more columns than rows");
  CMatrix q = gaussian(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        Complex dot = 0.0;
        for (std::size_t i = 0; i < rows; ++i) dot += std::conj(q(i, k)) * q(i, j);
        for (std::size_t i = 0; i < rows; ++i) q(i, j) -= dot * q(i, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < rows; ++i) nrm += std::norm(q(i, j));
    nrm = std::sqrt(nrm);
    for (std::size_t i = 0; i < rows; ++i) q(i, j) /= nrm;
  }
  return q;
}

CMatrix Rng::unitary(std::size_t n) { return isometry(n, n); }

}  // namespace modframe
