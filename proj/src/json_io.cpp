#include "modframe/json_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "modframe/error.hpp"

namespace modframe::json_io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::parse_error, what); }

const Json& field(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) fail(std::string(where) + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(std::string(where) + ": missing field \"" + key + "\"");
  return *it;
}

std::size_t count(const Json& j, const char* where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) fail(std::string(where) + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

const Json& array(const Json& j, const char* where) {
  if (!j.is_array()) fail(std::string(where) + ": expected an array");
  return j;
}

CMatrix decode_flat(const Json& j, std::size_t rows, std::size_t cols, const char* where) {
  array(j, where);
  if (j.size() != rows * cols)
    fail(std::string(where) + ": expected " + std::to_string(rows * cols) + " entries, got " +
         std::to_string(j.size()));
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = decode_complex(j[i * cols + c]);
  return m;
}

// Structural errors found while building domain objects are input errors.
template <class F>
auto guarded(const char* where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    fail(std::string(where) + ": " + e.what());
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::shape_mismatch:
      case ErrorCode::dimension_mismatch:
      case ErrorCode::invalid_argument:
        fail(std::string(where) + ": " + e.what());
      default:
        throw;
    }
  }
}

}  // namespace

Json load_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::file_not_found, path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double to_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j == "inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  if (j == "nan") return std::numeric_limits<double>::quiet_NaN();
  fail("expected a number");
}

Json encode(Complex c) { return Json::array({c.real(), c.imag()}); }

Json encode(const CMatrix& m) {
  Json out = Json::array();
  for (const Complex& c : m.data()) out.push_back(encode(c));
  return out;
}

Json encode(const AlgebraShape& s) {
  Json out = Json::array();
  for (std::size_t k : s.blocks()) out.push_back(k);
  return out;
}

Json encode(const AlgebraElement& a) {
  Json blocks = Json::array();
  for (const CMatrix& b : a.blocks()) blocks.push_back(encode(b));
  return {{"shape", encode(a.shape())}, {"blocks", std::move(blocks)}};
}

Json encode(const ModuleVector& x) {
  Json coords = Json::array();
  for (const auto& c : x.coords()) coords.push_back(encode(c));
  return {{"rank", x.rank()}, {"shape", encode(x.shape())}, {"coords", std::move(coords)}};
}

Json encode(const AlgebraMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(encode(m.entry(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"shape", encode(m.shape())}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

Json encode(const SubmoduleDescriptor& d) {
  return {{"rank", d.ambient_rank}, {"projection", d.projection ? encode(*d.projection) : Json(nullptr)}};
}

Json encode(const Frame& f) {
  Json elements = Json::array();
  for (const auto& x : f.elements()) elements.push_back(encode(x));
  return {{"shape", encode(f.shape())}, {"module", encode(f.module())}, {"elements", std::move(elements)}};
}

Json encode(const GramInvariant& g) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < g.k; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < g.k; ++j) row.push_back(encode(g.gram.entry(i, j)));
    rows.push_back(std::move(row));
  }
  return {{"k", g.k}, {"gram", std::move(rows)}};
}

Json encode(const HilbertFrame& f) {
  Json vectors = Json::array();
  for (std::size_t j = 0; j < f.size(); ++j) vectors.push_back(encode(f.matrix().column(j)));
  return {{"dim", f.dim()}, {"vectors", std::move(vectors)}};
}

Json encode(const ResolutionSequence& seq) {
  Json b = Json::array();
  for (const auto& m : seq.b) b.push_back(encode(m));
  return {{"d", seq.d}, {"b", std::move(b)}};
}

Complex decode_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CMatrix decode_square(const Json& j, std::size_t d) { return decode_flat(j, d, d, "matrix"); }

AlgebraShape decode_shape(const Json& j) {
  return guarded("shape", [&] {
    std::vector<std::size_t> blocks;
    for (const auto& k : array(j, "shape")) blocks.push_back(count(k, "shape"));
    return AlgebraShape(std::move(blocks));
  });
}

AlgebraElement decode_element(const Json& j) {
  return guarded("algebra element", [&] {
    AlgebraShape shape = decode_shape(field(j, "shape", "algebra element"));
    const Json& blocks = array(field(j, "blocks", "algebra element"), "blocks");
    if (blocks.size() != shape.block_count()) fail("algebra element: block count does not match shape");
    std::vector<CMatrix> out;
    for (std::size_t b = 0; b < shape.block_count(); ++b)
      out.push_back(decode_flat(blocks[b], shape.block_size(b), shape.block_size(b), "algebra element block"));
    return AlgebraElement(std::move(shape), std::move(out));
  });
}

ModuleVector decode_vector(const Json& j) {
  return guarded("module vector", [&] {
    AlgebraShape shape = decode_shape(field(j, "shape", "module vector"));
    const std::size_t rank = count(field(j, "rank", "module vector"), "rank");
    const Json& coords = array(field(j, "coords", "module vector"), "coords");
    if (coords.size() != rank) fail("module vector: coords has " + std::to_string(coords.size()) + " entries, rank is " +
                                    std::to_string(rank));
    std::vector<AlgebraElement> elements;
    for (const auto& c : coords) {
      elements.push_back(decode_element(c));
      if (!(elements.back().shape() == shape)) fail("module vector: coordinate shape differs");
    }
    return ModuleVector(std::move(shape), elements);
  });
}

AlgebraMatrix decode_matrix(const Json& j) {
  return guarded("algebra matrix", [&] {
    AlgebraShape shape = decode_shape(field(j, "shape", "algebra matrix"));
    const std::size_t rows = count(field(j, "rows", "algebra matrix"), "rows");
    const std::size_t cols = count(field(j, "cols", "algebra matrix"), "cols");
    const Json& entries = array(field(j, "entries", "algebra matrix"), "entries");
    if (entries.size() != rows) fail("algebra matrix: wrong number of rows");
    std::vector<std::vector<AlgebraElement>> grid;
    for (const auto& row : entries) {
      if (!row.is_array() || row.size() != cols) fail("algebra matrix: wrong number of columns");
      std::vector<AlgebraElement> r;
      for (const auto& e : row) {
        r.push_back(decode_element(e));
        if (!(r.back().shape() == shape)) fail("algebra matrix: entry shape differs");
      }
      grid.push_back(std::move(r));
    }
    if (rows == 0 || cols == 0) return AlgebraMatrix(shape, rows, cols);
    return AlgebraMatrix::from_entries(shape, grid);
  });
}

SubmoduleDescriptor decode_submodule(const Json& j, const AlgebraShape& shape) {
  return guarded("module", [&] {
    SubmoduleDescriptor d{count(field(j, "rank", "module"), "rank"), std::nullopt};
    const auto it = j.find("projection");
    if (it != j.end() && !it->is_null()) {
      d.projection = decode_matrix(*it);
      if (!(d.projection->shape() == shape)) fail("module: projection shape differs from the frame shape");
    }
    return d;
  });
}

Frame decode_frame(const Json& j, double tol) {
  return guarded("frame", [&]() -> Frame {
    const Json& elements = array(field(j, "elements", "frame"), "elements");
    std::vector<ModuleVector> xs;
    for (const auto& e : elements) xs.push_back(decode_vector(e));

    std::optional<AlgebraShape> shape;
    if (j.contains("shape")) shape = decode_shape(j["shape"]);
    else if (!xs.empty()) shape = xs.front().shape();
    else if (j.contains("module") && j["module"].contains("projection") && !j["module"]["projection"].is_null())
      shape = decode_shape(field(j["module"]["projection"], "shape", "projection"));
    if (!shape) fail("frame: cannot determine the algebra shape");

    SubmoduleDescriptor module{xs.empty() ? 0 : xs.front().rank(), std::nullopt};
    if (j.contains("module")) module = decode_submodule(j["module"], *shape);
    return Frame(*shape, std::move(module), std::move(xs), tol);
  });
}

GramInvariant decode_gram_invariant(const Json& j) {
  return guarded("gram invariant", [&] {
    const std::size_t k = count(field(j, "k", "gram invariant"), "k");
    const Json& rows = array(field(j, "gram", "gram invariant"), "gram");
    if (rows.size() != k || k == 0) fail("gram invariant: expected k rows");
    std::vector<std::vector<AlgebraElement>> grid;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != k) fail("gram invariant: expected k columns");
      std::vector<AlgebraElement> r;
      for (const auto& e : row) r.push_back(decode_element(e));
      grid.push_back(std::move(r));
    }
    const AlgebraShape shape = grid[0][0].shape();
    return GramInvariant{k, AlgebraMatrix::from_entries(shape, grid)};
  });
}

HilbertFrame decode_hilbert_frame(const Json& j) {
  return guarded("hilbert frame", [&]() -> HilbertFrame {
    if (j.is_object() && j.contains("elements")) {
      const Frame f = decode_frame(j);
      if (!(f.shape() == AlgebraShape({1}))) fail("hilbert frame: a frame file must have shape [1]");
      return HilbertFrame(f.synthesis().flat(0).transpose());
    }
    const std::size_t dim = count(field(j, "dim", "hilbert frame"), "dim");
    std::vector<std::vector<Complex>> vectors;
    for (const auto& v : array(field(j, "vectors", "hilbert frame"), "vectors")) {
      std::vector<Complex> vec;
      for (const auto& c : array(v, "vector")) vec.push_back(decode_complex(c));
      vectors.push_back(std::move(vec));
    }
    return HilbertFrame(dim, vectors);
  });
}

ResolutionSequence decode_resolution(const Json& j) {
  return guarded("resolution", [&] {
    ResolutionSequence seq{count(field(j, "d", "resolution"), "d"), {}};
    for (const auto& m : array(field(j, "b", "resolution"), "b")) seq.b.push_back(decode_square(m, seq.d));
    seq.validate();
    return seq;
  });
}

}  // namespace modframe::json_io
