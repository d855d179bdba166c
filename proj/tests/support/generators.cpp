#include "generators.hpp"

#include <algorithm>
#include <cmath>

namespace modframe::testing {

const std::vector<AlgebraShape>& small_shapes() {
  static const std::vector<AlgebraShape> shapes = {AlgebraShape({1}), AlgebraShape({2}), AlgebraShape({1, 1}),
                                                   AlgebraShape({2, 1}), AlgebraShape({3})};
  return shapes;
}

AlgebraElement random_element(Rng& rng, const AlgebraShape& shape) {
  std::vector<CMatrix> blocks;
  for (std::size_t k : shape.blocks()) blocks.push_back(rng.gaussian(k, k));
  return AlgebraElement(shape, std::move(blocks));
}

ModuleVector random_vector(Rng& rng, const AlgebraShape& shape, std::size_t rank) {
  std::vector<CMatrix> flat;
  for (std::size_t k : shape.blocks()) flat.push_back(rng.gaussian(k, rank * k));
  return ModuleVector(shape, rank, std::move(flat));
}

AlgebraMatrix random_operator(Rng& rng, const AlgebraShape& shape, std::size_t rows, std::size_t cols) {
  std::vector<CMatrix> flat;
  for (std::size_t k : shape.blocks()) flat.push_back(rng.gaussian(rows * k, cols * k));
  return AlgebraMatrix(shape, rows, cols, std::move(flat));
}

AlgebraMatrix random_unitary_operator(Rng& rng, const AlgebraShape& shape, std::size_t n) {
  std::vector<CMatrix> flat;
  for (std::size_t k : shape.blocks()) flat.push_back(rng.unitary(n * k));
  return AlgebraMatrix(shape, n, n, std::move(flat));
}

AlgebraMatrix random_projection(Rng& rng, const AlgebraShape& shape, std::size_t n, std::size_t rank_per_block) {
  std::vector<CMatrix> flat;
  for (std::size_t k : shape.blocks()) {
    const std::size_t r = std::min(rank_per_block, n * k);
    const CMatrix w = rng.isometry(n * k, r);
    flat.push_back(hermitian_part(w * w.adjoint()));
  }
  return AlgebraMatrix(shape, n, n, std::move(flat));
}

AlgebraMatrix random_partial_isometry(Rng& rng, const AlgebraShape& shape, std::size_t n) {
  std::vector<CMatrix> flat;
  for (std::size_t k : shape.blocks()) {
    const std::size_t r = rng.uniform_index(1, n * k);
    const CMatrix left = rng.isometry(n * k, r);
    const CMatrix right = rng.isometry(n * k, r);
    flat.push_back(left * right.adjoint());
  }
  return AlgebraMatrix(shape, n, n, std::move(flat));
}

Frame random_free_frame(Rng& rng, const AlgebraShape& shape, std::size_t n, std::size_t k) {
  std::vector<ModuleVector> xs;
  for (std::size_t j = 0; j < k; ++j) xs.push_back(random_vector(rng, shape, n));
  return Frame::of_free_module(std::move(xs));
}

Frame random_submodule_frame(Rng& rng, const AlgebraShape& shape, std::size_t n, std::size_t k) {
  std::size_t smallest = n * shape.block_size(0);
  for (std::size_t b : shape.blocks()) smallest = std::min(smallest, n * b);
  const std::size_t rank = std::max<std::size_t>(1, smallest - 1);
  const AlgebraMatrix p = random_projection(rng, shape, n, rank);
  std::vector<ModuleVector> xs;
  for (std::size_t j = 0; j < k; ++j) xs.push_back(apply(p, random_vector(rng, shape, n)));
  return Frame(shape, SubmoduleDescriptor{n, p}, std::move(xs));
}

Frame random_normalized_tight_frame(Rng& rng, const AlgebraShape& shape, std::size_t n, std::size_t k) {
  const Frame f = random_free_frame(rng, shape, n, k);
  std::vector<CMatrix> root;
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    root.push_back(hermitian_function(f.gram_operator().flat(b), [](double v) { return 1.0 / std::sqrt(v); }));
  return transform_frame(f, AlgebraMatrix(shape, n, n, std::move(root)));
}

Frame transform_frame(const Frame& f, const AlgebraMatrix& u) {
  std::vector<ModuleVector> ys;
  for (const auto& x : f.elements()) ys.push_back(apply(u, x));
  return Frame::of_free_module(std::move(ys));
}

HilbertFrame random_hilbert_frame(Rng& rng, std::size_t n, std::size_t k) {
  return HilbertFrame(rng.gaussian(n, k));
}

}  // namespace modframe::testing
