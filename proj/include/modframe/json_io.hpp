#pragma once

// JSON encodings.
//
//   complex          [re, im]
//   AlgebraElement   {"shape": [k_1, ...], "blocks": [[c, ...], ...]}   row-major per block
//   ModuleVector     {"rank": n, "shape": [...], "coords": [AlgebraElement, ...]}
//   AlgebraMatrix    {"shape": [...], "rows": r, "cols": c, "entries": [[AlgebraElement, ...], ...]}
//   Submodule        {"rank": n, "projection": AlgebraMatrix | null}
//   Frame file       {"module": Submodule, "elements": [ModuleVector, ...]}
//   GramInvariant    {"k": k, "gram": [[AlgebraElement, ...], ...]}
//   HilbertFrame     {"dim": n, "vectors": [[c, ...], ...]}
//   Resolution       {"d": d, "b": [[c, ...  d*d entries row-major], ...]}
//
// A frame file may omit "module" (free module of the elements' rank) and a
// Hilbert frame may be given as a frame file over shape [1]. Infinite values
// are written as the string "inf" since JSON has no literal for them.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "modframe/invariants.hpp"
#include "modframe/resolution.hpp"
#include "modframe/tight_approx.hpp"

namespace modframe::json_io {

using Json = nlohmann::json;

/// FileNotFound or ParseError.
Json load_file(const std::filesystem::path& path);

Json number(double v);
double to_number(const Json& j);

Json encode(Complex c);
Json encode(const CMatrix& m);  ///< flat row-major list
Json encode(const AlgebraShape& s);
Json encode(const AlgebraElement& a);
Json encode(const ModuleVector& x);
Json encode(const AlgebraMatrix& m);
Json encode(const SubmoduleDescriptor& d);
Json encode(const Frame& f);
Json encode(const GramInvariant& g);
Json encode(const HilbertFrame& f);
Json encode(const ResolutionSequence& seq);

// Decoders throw ParseError with the offending field in the message.
Complex decode_complex(const Json& j);
CMatrix decode_square(const Json& j, std::size_t d);
AlgebraShape decode_shape(const Json& j);
AlgebraElement decode_element(const Json& j);
ModuleVector decode_vector(const Json& j);
AlgebraMatrix decode_matrix(const Json& j);
SubmoduleDescriptor decode_submodule(const Json& j, const AlgebraShape& shape);
Frame decode_frame(const Json& j, double tol = kFrameTol);
GramInvariant decode_gram_invariant(const Json& j);
HilbertFrame decode_hilbert_frame(const Json& j);
ResolutionSequence decode_resolution(const Json& j);

}  // namespace modframe::json_io
