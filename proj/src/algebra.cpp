#include "modframe/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "modframe/error.hpp"

namespace modframe {

namespace {

std::string shape_string(const AlgebraShape& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.block_count(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(s.block_size(i));
  }
  return out + "]";
}

void check_flat(const AlgebraShape& shape, std::size_t rows, std::size_t cols, const std::vector<CMatrix>& flat) {
  if (flat.size() != shape.block_count())
    throw Error(ErrorCode::shape_mismatch, "expected " + std::to_string(shape.block_count()) + " blocks");
  for (std::size_t b = 0; b < flat.size(); ++b) {
    const std::size_t k = shape.block_size(b);
    if (flat[b].rows() != rows * k || flat[b].cols() != cols * k)
      throw Error(ErrorCode::shape_mismatch, "block " + std::to_string(b) + " has wrong size for shape " +
                                                 shape_string(shape));
  }
}

}  // namespace

void require_same_shape(const AlgebraShape& a, const AlgebraShape& b, const char* where) {
  if (!(a == b))
    throw Error(ErrorCode::shape_mismatch, std::string(where) + ": " + shape_string(a) + " vs " + shape_string(b));
}

AlgebraShape::AlgebraShape(std::vector<std::size_t> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorCode::invalid_argument, "algebra shape needs at least one block");
  for (std::size_t k : blocks_)
    if (k == 0) throw Error(ErrorCode::invalid_argument, "algebra block sizes must be positive");
}

std::size_t AlgebraShape::dimension() const noexcept {
  return std::accumulate(blocks_.begin(), blocks_.end(), std::size_t{0},
                         [](std::size_t acc, std::size_t k) { return acc + k * k; });
}

// --- AlgebraElement ---------------------------------------------------------

AlgebraElement::AlgebraElement(AlgebraShape shape) : shape_(std::move(shape)) {
  blocks_.reserve(shape_.block_count());
  for (std::size_t k : shape_.blocks()) blocks_.emplace_back(k, k);
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  check_flat(shape_, 1, 1, blocks_);
}

AlgebraElement AlgebraElement::unit(const AlgebraShape& shape) { return scalar(shape, 1.0); }

AlgebraElement AlgebraElement::scalar(const AlgebraShape& shape, Complex value) {
  AlgebraElement a(shape);
  for (std::size_t b = 0; b < shape.block_count(); ++b)
    for (std::size_t i = 0; i < shape.block_size(b); ++i) a.blocks_[b](i, i) = value;
  return a;
}

AlgebraElement AlgebraElement::adjoint() const {
  AlgebraElement out = *this;
  for (auto& b : out.blocks_) b = b.adjoint();
  return out;
}

double AlgebraElement::norm() const {
  double n = 0.0;
  for (const auto& b : blocks_) n = std::max(n, op_norm(b));
  return n;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_shape(shape_, other.shape_, "AlgebraElement +");
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] += other.blocks_[b];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_shape(shape_, other.shape_, "AlgebraElement -");
  for (std::size_t b = 0; b < blocks_.size(); ++b) blocks_[b] -= other.blocks_[b];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
AlgebraElement operator*(Complex s, AlgebraElement a) { return a *= s; }

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a.shape(), b.shape(), "AlgebraElement *");
  std::vector<CMatrix> blocks;
  blocks.reserve(a.shape().block_count());
  for (std::size_t i = 0; i < a.shape().block_count(); ++i) blocks.push_back(a.block(i) * b.block(i));
  return AlgebraElement(a.shape(), std::move(blocks));
}

double max_abs_diff(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_shape(a.shape(), b.shape(), "max_abs_diff");
  double d = 0.0;
  for (std::size_t i = 0; i < a.shape().block_count(); ++i) d = std::max(d, max_abs_diff(a.block(i), b.block(i)));
  return d;
}

double default_positivity_tol(const AlgebraElement& a) { return 1e-9 * (1.0 + a.norm()); }

bool is_positive(const AlgebraElement& a, std::optional<double> tol) {
  const double t = tol.value_or(default_positivity_tol(a));
  for (const auto& block : a.blocks()) {
    const HermitianEigen e = eig_hermitian(block, t);
    if (!e.values.empty() && e.values.front() < -t) return false;
  }
  return true;
}

bool leq(const AlgebraElement& a, const AlgebraElement& b, std::optional<double> tol) {
  return is_positive(b - a, tol);
}

AlgebraElement carrier_projection(const AlgebraElement& a, std::optional<double> rank_tol) {
  std::vector<HermitianEigen> spectra;
  double top = 0.0;
  for (const auto& block : a.blocks()) {
    spectra.push_back(eig_hermitian(block));
    const auto& values = spectra.back().values;
    if (!values.empty()) top = std::max(top, values.back());
  }
  const double neg_tol = default_positivity_tol(a);
  for (const auto& e : spectra) {
    if (!e.values.empty() && e.values.front() < -neg_tol)
      throw Error(ErrorCode::not_positive, "carrier_projection: element is not positive");
  }
  const double cutoff = rank_tol.value_or(kRankTol) * top;
  AlgebraElement p(a.shape());
  for (std::size_t b = 0; b < spectra.size(); ++b) {
    const auto& e = spectra[b];
    const std::size_t k = a.shape().block_size(b);
    for (std::size_t c = 0; c < k; ++c) {
      if (!(e.values[c] > cutoff) || top == 0.0) continue;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) p.block(b)(i, j) += e.vectors(i, c) * std::conj(e.vectors(j, c));
    }
  }
  return p;
}

// --- AlgebraMatrix ----------------------------------------------------------

AlgebraMatrix::AlgebraMatrix(AlgebraShape shape, std::size_t rows, std::size_t cols)
    : shape_(std::move(shape)), rows_(rows), cols_(cols) {
  flat_.reserve(shape_.block_count());
  for (std::size_t k : shape_.blocks()) flat_.emplace_back(rows * k, cols * k);
}

AlgebraMatrix::AlgebraMatrix(AlgebraShape shape, std::size_t rows, std::size_t cols, std::vector<CMatrix> flat)
    : shape_(std::move(shape)), rows_(rows), cols_(cols), flat_(std::move(flat)) {
  check_flat(shape_, rows_, cols_, flat_);
}

AlgebraMatrix AlgebraMatrix::identity(const AlgebraShape& shape, std::size_t n) {
  std::vector<CMatrix> flat;
  for (std::size_t k : shape.blocks()) flat.push_back(CMatrix::identity(n * k));
  return AlgebraMatrix(shape, n, n, std::move(flat));
}

AlgebraMatrix AlgebraMatrix::from_entries(const AlgebraShape& shape,
                                          const std::vector<std::vector<AlgebraElement>>& entries) {
  const std::size_t rows = entries.size();
  const std::size_t cols = rows == 0 ? 0 : entries.front().size();
  AlgebraMatrix m(shape, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (entries[i].size() != cols) throw Error(ErrorCode::shape_mismatch, "ragged matrix over A");
    for (std::size_t j = 0; j < cols; ++j) m.set_entry(i, j, entries[i][j]);
  }
  return m;
}

AlgebraMatrix AlgebraMatrix::from_element(const AlgebraElement& a) {
  return AlgebraMatrix(a.shape(), 1, 1, std::vector<CMatrix>(a.blocks().begin(), a.blocks().end()));
}

AlgebraElement AlgebraMatrix::entry(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::shape_mismatch, "entry index out of range");
  std::vector<CMatrix> blocks;
  blocks.reserve(flat_.size());
  for (std::size_t b = 0; b < flat_.size(); ++b) {
    const std::size_t k = shape_.block_size(b);
    blocks.push_back(flat_[b].block(i * k, j * k, k, k));
  }
  return AlgebraElement(shape_, std::move(blocks));
}

void AlgebraMatrix::set_entry(std::size_t i, std::size_t j, const AlgebraElement& a) {
  require_same_shape(shape_, a.shape(), "set_entry");
  if (i >= rows_ || j >= cols_) throw Error(ErrorCode::shape_mismatch, "entry index out of range");
  for (std::size_t b = 0; b < flat_.size(); ++b) {
    const std::size_t k = shape_.block_size(b);
    flat_[b].set_block(i * k, j * k, a.block(b));
  }
}

AlgebraMatrix AlgebraMatrix::adjoint() const {
  std::vector<CMatrix> flat;
  flat.reserve(flat_.size());
  for (const auto& f : flat_) flat.push_back(f.adjoint());
  return AlgebraMatrix(shape_, cols_, rows_, std::move(flat));
}

double AlgebraMatrix::norm() const { return max_singular_value(*this); }

AlgebraMatrix& AlgebraMatrix::operator+=(const AlgebraMatrix& other) {
  require_same_shape(shape_, other.shape_, "AlgebraMatrix +");
  for (std::size_t b = 0; b < flat_.size(); ++b) flat_[b] += other.flat_[b];
  return *this;
}

AlgebraMatrix& AlgebraMatrix::operator-=(const AlgebraMatrix& other) {
  require_same_shape(shape_, other.shape_, "AlgebraMatrix -");
  for (std::size_t b = 0; b < flat_.size(); ++b) flat_[b] -= other.flat_[b];
  return *this;
}

AlgebraMatrix& AlgebraMatrix::operator*=(Complex s) {
  for (auto& f : flat_) f *= s;
  return *this;
}

AlgebraMatrix operator+(AlgebraMatrix a, const AlgebraMatrix& b) { return a += b; }
AlgebraMatrix operator-(AlgebraMatrix a, const AlgebraMatrix& b) { return a -= b; }
AlgebraMatrix operator*(Complex s, AlgebraMatrix a) { return a *= s; }

AlgebraMatrix operator*(const AlgebraMatrix& a, const AlgebraMatrix& b) {
  require_same_shape(a.shape(), b.shape(), "AlgebraMatrix *");
  if (a.cols() != b.rows())
    throw Error(ErrorCode::shape_mismatch, "AlgebraMatrix *: inner dimensions " + std::to_string(a.cols()) +
                                               " vs " + std::to_string(b.rows()));
  std::vector<CMatrix> flat;
  flat.reserve(a.shape().block_count());
  for (std::size_t i = 0; i < a.shape().block_count(); ++i) flat.push_back(a.flat(i) * b.flat(i));
  return AlgebraMatrix(a.shape(), a.rows(), b.cols(), std::move(flat));
}

double max_abs_diff(const AlgebraMatrix& a, const AlgebraMatrix& b) {
  require_same_shape(a.shape(), b.shape(), "max_abs_diff");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::shape_mismatch, "max_abs_diff: matrix sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.shape().block_count(); ++i) d = std::max(d, max_abs_diff(a.flat(i), b.flat(i)));
  return d;
}

double max_entry_norm_diff(const AlgebraMatrix& a, const AlgebraMatrix& b) {
  const AlgebraMatrix diff = a - b;
  double d = 0.0;
  for (std::size_t i = 0; i < diff.rows(); ++i)
    for (std::size_t j = 0; j < diff.cols(); ++j) d = std::max(d, diff.entry(i, j).norm());
  return d;
}

double max_singular_value(const AlgebraMatrix& m) {
  double s = 0.0;
  for (std::size_t b = 0; b < m.shape().block_count(); ++b) s = std::max(s, op_norm(m.flat(b)));
  return s;
}

AlgebraMatrix mp_inverse_with_cutoff(const AlgebraMatrix& f, double cutoff) {
  std::vector<CMatrix> flat;
  flat.reserve(f.shape().block_count());
  for (std::size_t b = 0; b < f.shape().block_count(); ++b) flat.push_back(pinv_with_cutoff(f.flat(b), cutoff));
  return AlgebraMatrix(f.shape(), f.cols(), f.rows(), std::move(flat));
}

AlgebraMatrix mp_inverse_matrix(const AlgebraMatrix& f, std::optional<double> rank_tol) {
  return mp_inverse_with_cutoff(f, rank_tol.value_or(kRankTol) * max_singular_value(f));
}

double PenroseResiduals::max() const { return std::max({fgf, gfg, fg_hermitian, gf_hermitian}); }

PenroseResiduals penrose_residuals(const AlgebraMatrix& f, const AlgebraMatrix& g) {
  const AlgebraMatrix fg = f * g;
  const AlgebraMatrix gf = g * f;
  PenroseResiduals r;
  r.fgf = max_abs_diff(fg * f, f);
  r.gfg = max_abs_diff(gf * g, g);
  r.fg_hermitian = max_abs_diff(fg.adjoint(), fg);
  r.gf_hermitian = max_abs_diff(gf.adjoint(), gf);
  return r;
}

}  // namespace modframe
