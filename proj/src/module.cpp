#include "modframe/module.hpp"

#include <algorithm>
#include <cmath>

#include "modframe/error.hpp"

namespace modframe {

ModuleVector::ModuleVector(AlgebraShape shape, std::size_t rank) : shape_(std::move(shape)), rank_(rank) {
  flat_.reserve(shape_.block_count());
  for (std::size_t k : shape_.blocks()) flat_.emplace_back(k, rank_ * k);
}

ModuleVector::ModuleVector(AlgebraShape shape, std::span<const AlgebraElement> coords)
    : ModuleVector(std::move(shape), coords.size()) {
  for (std::size_t q = 0; q < coords.size(); ++q) set_coord(q, coords[q]);
}

ModuleVector::ModuleVector(AlgebraShape shape, std::size_t rank, std::vector<CMatrix> flat)
    : shape_(std::move(shape)), rank_(rank), flat_(std::move(flat)) {
  if (flat_.size() != shape_.block_count()) throw Error(ErrorCode::shape_mismatch, "module vector block count");
  for (std::size_t b = 0; b < flat_.size(); ++b) {
    const std::size_t k = shape_.block_size(b);
    if (flat_[b].rows() != k || flat_[b].cols() != rank_ * k)
      throw Error(ErrorCode::shape_mismatch, "module vector block " + std::to_string(b) + " has wrong size");
  }
}

ModuleVector ModuleVector::basis(const AlgebraShape& shape, std::size_t rank, std::size_t q) {
  if (q >= rank) throw Error(ErrorCode::invalid_argument, "basis index out of range");
  ModuleVector e(shape, rank);
  e.set_coord(q, AlgebraElement::unit(shape));
  return e;
}

AlgebraElement ModuleVector::coord(std::size_t q) const {
  if (q >= rank_) throw Error(ErrorCode::shape_mismatch, "coordinate index out of range");
  std::vector<CMatrix> blocks;
  blocks.reserve(flat_.size());
  for (std::size_t b = 0; b < flat_.size(); ++b) {
    const std::size_t k = shape_.block_size(b);
    blocks.push_back(flat_[b].block(0, q * k, k, k));
  }
  return AlgebraElement(shape_, std::move(blocks));
}

std::vector<AlgebraElement> ModuleVector::coords() const {
  std::vector<AlgebraElement> out;
  out.reserve(rank_);
  for (std::size_t q = 0; q < rank_; ++q) out.push_back(coord(q));
  return out;
}

void ModuleVector::set_coord(std::size_t q, const AlgebraElement& a) {
  require_same_shape(shape_, a.shape(), "set_coord");
  if (q >= rank_) throw Error(ErrorCode::shape_mismatch, "coordinate index out of range");
  for (std::size_t b = 0; b < flat_.size(); ++b) flat_[b].set_block(0, q * shape_.block_size(b), a.block(b));
}

double ModuleVector::norm() const { return std::sqrt(inner(*this, *this).norm()); }

ModuleVector& ModuleVector::operator+=(const ModuleVector& other) {
  require_same_shape(shape_, other.shape_, "ModuleVector +");
  if (rank_ != other.rank_) throw Error(ErrorCode::shape_mismatch, "ModuleVector +: rank");
  for (std::size_t b = 0; b < flat_.size(); ++b) flat_[b] += other.flat_[b];
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& other) {
  require_same_shape(shape_, other.shape_, "ModuleVector -");
  if (rank_ != other.rank_) throw Error(ErrorCode::shape_mismatch, "ModuleVector -: rank");
  for (std::size_t b = 0; b < flat_.size(); ++b) flat_[b] -= other.flat_[b];
  return *this;
}

ModuleVector& ModuleVector::operator*=(Complex s) {
  for (auto& f : flat_) f *= s;
  return *this;
}

ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
ModuleVector operator*(Complex s, ModuleVector x) { return x *= s; }

ModuleVector operator*(const AlgebraElement& a, const ModuleVector& x) {
  require_same_shape(a.shape(), x.shape(), "left action");
  std::vector<CMatrix> flat;
  flat.reserve(x.shape().block_count());
  for (std::size_t b = 0; b < x.shape().block_count(); ++b) flat.push_back(a.block(b) * x.flat(b));
  return ModuleVector(x.shape(), x.rank(), std::move(flat));
}

double max_abs_diff(const ModuleVector& a, const ModuleVector& b) {
  require_same_shape(a.shape(), b.shape(), "max_abs_diff");
  if (a.rank() != b.rank()) throw Error(ErrorCode::shape_mismatch, "max_abs_diff: rank");
  double d = 0.0;
  for (std::size_t i = 0; i < a.shape().block_count(); ++i) d = std::max(d, max_abs_diff(a.flat(i), b.flat(i)));
  return d;
}

AlgebraElement inner(const ModuleVector& x, const ModuleVector& y) {
  require_same_shape(x.shape(), y.shape(), "inner");
  if (x.rank() != y.rank()) throw Error(ErrorCode::shape_mismatch, "inner: rank mismatch");
  std::vector<CMatrix> blocks;
  blocks.reserve(x.shape().block_count());
  for (std::size_t b = 0; b < x.shape().block_count(); ++b) blocks.push_back(x.flat(b) * y.flat(b).adjoint());
  return AlgebraElement(x.shape(), std::move(blocks));
}

ModuleVector apply(const AlgebraMatrix& t, const ModuleVector& x) {
  require_same_shape(t.shape(), x.shape(), "apply");
  if (t.rows() != x.rank())
    throw Error(ErrorCode::shape_mismatch, "apply: operator expects rank " + std::to_string(t.rows()) +
                                               ", vector has rank " + std::to_string(x.rank()));
  std::vector<CMatrix> flat;
  flat.reserve(x.shape().block_count());
  for (std::size_t b = 0; b < x.shape().block_count(); ++b) flat.push_back(x.flat(b) * t.flat(b));
  return ModuleVector(x.shape(), t.cols(), std::move(flat));
}

AlgebraMatrix compose(const AlgebraMatrix& first, const AlgebraMatrix& second) { return first * second; }

std::vector<double> op_spectrum(const AlgebraMatrix& t, std::optional<double> tol) {
  if (t.rows() != t.cols()) throw Error(ErrorCode::shape_mismatch, "op_spectrum: operator is not square");
  std::vector<double> out;
  for (std::size_t b = 0; b < t.shape().block_count(); ++b) {
    const HermitianEigen e = eig_hermitian(t.flat(b), tol);
    out.insert(out.end(), e.values.begin(), e.values.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

AlgebraMatrix SubmoduleDescriptor::projection_or_identity(const AlgebraShape& shape) const {
  if (projection) {
    require_same_shape(projection->shape(), shape, "submodule projection");
    return *projection;
  }
  return AlgebraMatrix::identity(shape, ambient_rank);
}

void SubmoduleDescriptor::validate(double tol) const {
  if (!projection) return;
  const AlgebraMatrix& p = *projection;
  if (p.rows() != ambient_rank || p.cols() != ambient_rank)
    throw Error(ErrorCode::invalid_argument, "submodule projection must be " + std::to_string(ambient_rank) +
                                                 "x" + std::to_string(ambient_rank));
  const double idem = max_abs_diff(p * p, p);
  const double herm = max_abs_diff(p.adjoint(), p);
  if (idem > tol || herm > tol)
    throw Error(ErrorCode::invalid_argument, "submodule projection is not an orthogonal projection (|P^2-P| = " +
                                                 std::to_string(idem) + ", |P*-P| = " + std::to_string(herm) + ")");
}

std::vector<ModuleVector> embed_hilbert_frame(std::span<const std::vector<Complex>> vectors,
                                              const AlgebraShape& shape) {
  std::vector<ModuleVector> out;
  if (vectors.empty()) return out;
  const std::size_t n = vectors.front().size();
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != n) throw Error(ErrorCode::shape_mismatch, "embed_hilbert_frame: vectors differ in length");
    ModuleVector x(shape, n);
    for (std::size_t q = 0; q < n; ++q) x.set_coord(q, AlgebraElement::scalar(shape, v[q]));
    out.push_back(std::move(x));
  }
  return out;
}

CMatrix stack_block(std::span<const ModuleVector> vectors, std::size_t b) {
  if (vectors.empty()) return CMatrix();
  const std::size_t k = vectors.front().shape().block_size(b);
  const std::size_t n = vectors.front().rank();
  CMatrix out(vectors.size() * k, n * k);
  for (std::size_t j = 0; j < vectors.size(); ++j) out.set_block(j * k, 0, vectors[j].flat(b));
  return out;
}

}  // namespace modframe
