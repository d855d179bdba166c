#pragma once

#include <cstdint>
#include <random>

#include "modframe/matrix.hpp"

namespace modframe {

/// Seeded source of random complex matrices for probes and generators.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi);
  std::size_t uniform_index(std::size_t lo, std::size_t hi);  ///< inclusive range
  double normal();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_normal();

  CMatrix gaussian(std::size_t rows, std::size_t cols);
  CMatrix hermitian(std::size_t n);
  /// Haar-distributed unitary (Gram-Schmidt on a Gaussian matrix).
  CMatrix unitary(std::size_t n);
  /// rows x cols with orthonormal columns (cols <= rows).
  CMatrix isometry(std::size_t rows, std::size_t cols);

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

}  // namespace modframe
