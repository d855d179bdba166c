#include "modframe/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "modframe/error.hpp"
#include "modframe/json_io.hpp"
#include "modframe/kernels.hpp"
#include "modframe/random.hpp"

namespace modframe::cli {

namespace {

using json_io::Json;
using json_io::number;

struct Report {
  std::string title;  ///< the result the subcommand exercises
  Json summary = Json::object();
  Json data = Json::object();
  Json curve = nullptr;  ///< {"columns": [...], "rows": [[...], ...]} or null
  std::optional<std::string> failure{};
};

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_scalar(const Json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string shape_string(const AlgebraShape& s) {
  std::string out = "[";
  for (std::size_t b = 0; b < s.block_count(); ++b) out += (b ? "," : "") + std::to_string(s.block_size(b));
  return out + "]";
}

void require_inputs(const RunConfig& c, std::size_t lo, std::size_t hi) {
  if (c.inputs.size() < lo || c.inputs.size() > hi)
    throw Error(ErrorCode::invalid_argument, std::string(to_string(c.subcommand)) + " expects " +
                                                 std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) +
                                                 " input file(s), got " + std::to_string(c.inputs.size()));
}

Frame load_frame(const std::filesystem::path& p, double tol) { return json_io::decode_frame(json_io::load_file(p), tol); }

HilbertFrame load_hilbert(const std::filesystem::path& p) {
  return json_io::decode_hilbert_frame(json_io::load_file(p));
}

ModuleVector random_module_vector(Rng& rng, const Frame& f) {
  std::vector<CMatrix> flat;
  for (std::size_t b = 0; b < f.shape().block_count(); ++b) {
    const std::size_t k = f.shape().block_size(b);
    flat.push_back(rng.gaussian(k, f.ambient_rank() * k));
  }
  return apply(f.projection(), ModuleVector(f.shape(), f.ambient_rank(), std::move(flat)));
}

Report analyze_report(const RunConfig& c) {
  require_inputs(c, 1, 1);
  const Frame f = load_frame(c.inputs[0], c.tol);
  const FrameReport r = analyze(f, c.tol);
  Report out{.title = "modular frame bounds: C<x,x> <= sum_j <x,x_j><x_j,x> <= D<x,x> on the submodule"};
  Json& s = out.summary;
  s["shape"] = shape_string(f.shape());
  s["elements"] = f.size();
  s["ambient_rank"] = f.ambient_rank();
  s["lower_bound"] = number(r.lower_bound);
  s["upper_bound"] = number(r.upper_bound);
  s["condition"] = number(r.condition);
  s["is_frame"] = r.is_frame;
  s["is_tight"] = r.is_tight;
  s["is_normalized_tight"] = r.is_normalized_tight;
  s["support_rank"] = r.support_rank;
  s["module_rank"] = r.module_rank;
  out.data["spectra"] = r.spectra;
  if (!r.is_frame) {
    out.failure = "the sequence does not generate its submodule";
    return out;
  }
  const FrameTransform t = frame_transform(f, c.tol);
  s["transform_projection_defect"] = number(t.projection_defect);
  s["transform_isometry_defect"] = number(t.isometry_defect);
  s["transform_is_isometry"] = t.is_isometry;
  s["is_riesz_basis"] = riesz_check(f, c.tol).is_riesz_basis;
  out.data["range_projection"] = json_io::encode(t.range_projection);
  return out;
}

Report dual_report(const RunConfig& c) {
  require_inputs(c, 1, 1);
  const Frame f = load_frame(c.inputs[0], c.tol);
  const Frame dual = canonical_dual(f, c.tol);
  const Frame dual_of_dual = canonical_dual(dual, c.tol);
  Report out{.title = "canonical dual frame and the reconstruction formula x = sum_j <x, S x_j> x_j"};

  Rng rng(c.seed);
  double residual = 0.0;
  for (std::size_t p = 0; p < c.probes; ++p) {
    const ModuleVector x = random_module_vector(rng, f);
    residual = std::max(residual, max_abs_diff(reconstruct(f, x, c.tol), x) / (1.0 + x.norm()));
  }
  double involution = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    involution = std::max(involution, max_abs_diff(dual_of_dual.element(j), f.element(j)));

  Json& s = out.summary;
  s["elements"] = f.size();
  s["probes"] = c.probes;
  s["seed"] = c.seed;
  s["reconstruction_residual"] = number(residual);
  s["dual_involution_residual"] = number(involution);
  out.data["dual"] = json_io::encode(dual);
  if (residual > c.tol || involution > c.tol * (1.0 + max_singular_value(f.synthesis())))
    out.failure = "reconstruction residual exceeds tolerance";
  return out;
}

Report tighten_report(const RunConfig& c) {
  require_inputs(c, 1, 1);
  const HilbertFrame x = load_hilbert(c.inputs[0]);
  const HilbertBounds b = frame_bounds(x, c.tol);
  const SymmetricApproximation sym = symmetric_approximation(x, c.tol);
  const TightMultiple mult = closest_tight_multiple(x, c.tol);
  Report out{.title = "symmetric approximation {S^(1/2) x_i} and the operator-norm closest tight multiple"};
  Json& s = out.summary;
  s["dim"] = x.dim();
  s["vectors"] = x.size();
  s["lower_bound"] = number(b.lower);
  s["upper_bound"] = number(b.upper);
  s["rank"] = b.rank;
  s["d_below_9_4_c"] = b.spans_same_space_flag;
  s["certificate"] = number(sym.certificate);
  s["certificate_squared"] = number(sym.certificate * sym.certificate);
  s["distance_squared"] = number(sym.distance_sq);
  s["tightness_defect"] = number(sym.tightness_defect);
  s["multiple_lambda"] = number(mult.lambda);
  s["multiple_distance"] = number(mult.distance);
  s["multiple_direct_distance"] = number(mult.direct_distance);
  s["is_basis"] = b.rank == x.size();
  if (b.rank == x.size()) {
    s["loewdin_orthonormality_defect"] = number(loewdin_orthogonalization(x, c.tol).orthonormality_defect);
  }
  out.data["symmetric_approximation"] = json_io::encode(sym.frame);
  out.data["closest_tight_multiple"] = json_io::encode(mult.frame);
  if (c.scan_points > 0) {
    const LambdaScan scan = scan_tight_multiples(x, c.scan_points, c.tol);
    s["scan_best_lambda"] = number(scan.best_lambda);
    s["scan_best_distance"] = number(scan.best_distance);
    s["scan_resolution"] = number(scan.resolution);
    Json rows = Json::array();
    for (std::size_t i = 0; i < scan.lambdas.size(); ++i)
      rows.push_back(Json::array({number(scan.lambdas[i]), number(scan.distances[i])}));
    out.curve = {{"columns", {"lambda", "distance"}}, {"rows", std::move(rows)}};
    if (scan.best_distance < mult.distance - scan.resolution)
      out.failure = "a grid point beats the closed-form multiple";
  }
  return out;
}

Report distance_report(const RunConfig& c) {
  require_inputs(c, 2, 2);
  const HilbertFrame x = load_hilbert(c.inputs[0]);
  const HilbertFrame y = load_hilbert(c.inputs[1]);
  const DistanceReport d = nearness(x, y, c.tol);
  Report out{.title = "quadratic closeness c(y,x), c(x,y) and nearness d(x,y): near exactly when similar"};
  Json& s = out.summary;
  s["c_yx"] = number(d.c_yx);
  s["c_xy"] = number(d.c_xy);
  s["d_xy"] = number(d.d_xy);
  s["similar"] = d.similar;
  s["consistent"] = d.consistent;
  if (!d.consistent) out.failure = "nearness and similarity disagree";
  return out;
}

Json candidate_json(const TightCandidate& t) {
  return {{"lambda", number(t.lambda)}, {"minimum", number(t.minimum)}, {"achieved", number(t.achieved)}};
}

Report balan_report(const RunConfig& c) {
  require_inputs(c, 1, 1);
  const HilbertFrame x = load_hilbert(c.inputs[0]);
  const BalanResult r = balan_minimizers(x, c.tol);
  Report out{.title = "Balan's closest tight frames: arithmetic, harmonic and geometric means of sqrt C, sqrt D"};
  Json& s = out.summary;
  s["lower_bound"] = number(r.bounds.lower);
  s["upper_bound"] = number(r.bounds.upper);
  s["d_below_9_4_c"] = r.bounds.spans_same_space_flag;
  for (const auto& [name, t] : {std::pair{"arithmetic", &r.arithmetic}, std::pair{"harmonic", &r.harmonic},
                                std::pair{"geometric", &r.geometric}}) {
    s[std::string(name) + "_lambda"] = number(t->lambda);
    s[std::string(name) + "_minimum"] = number(t->minimum);
    s[std::string(name) + "_achieved"] = number(t->achieved);
    out.data[name] = candidate_json(*t);
    out.data[name]["frame"] = json_io::encode(t->frame);
  }
  if (c.samples > 0) {
    const CMatrix& xm = x.matrix();
    const CMatrix& ya = r.arithmetic.frame.matrix();
    const CMatrix& yh = r.harmonic.frame.matrix();
    const auto arithmetic = kernels::sampled_max_ratio(xm - ya, ya, c.samples, c.seed);
    const auto harmonic = kernels::sampled_max_ratio(yh - xm, xm, c.samples, c.seed + 1);
    s["samples"] = c.samples;
    s["seed"] = c.seed;
    s["arithmetic_sampled_max"] = number(arithmetic.best);
    s["harmonic_sampled_max"] = number(harmonic.best);
    const double slack = 1.0 + 1e-9;
    if (arithmetic.best > r.arithmetic.minimum * slack + 1e-12 || harmonic.best > r.harmonic.minimum * slack + 1e-12)
      out.failure = "a sampled coefficient vector exceeds the closed-form closeness";
  }
  return out;
}

Json invariant_summary(const NormalizedTightMetric& m, const Frame& f, double tol) {
  const AlgebraMatrix& q = m.invariant.gram;
  return {{"k", m.invariant.k},
          {"idempotency_defect", number(max_abs_diff(q * q, q))},
          {"hermitian_defect", number(max_abs_diff(q.adjoint(), q))},
          {"svd_route_distance", number(max_abs_diff(q, gram_invariant_by_svd(f, tol)))},
          {"reanalysis_lower_bound", number(m.check.lower_bound)},
          {"reanalysis_upper_bound", number(m.check.upper_bound)},
          {"reconstruction_defect", number(m.check.reconstruction_defect)}};
}

Report invariant_report(const RunConfig& c) {
  require_inputs(c, 1, 2);
  const Frame f = load_frame(c.inputs[0], c.tol);
  const NormalizedTightMetric mf = normalized_tight_inner_product(f, c.tol);
  Report out{.title = "Gram invariant of the unique inner product making the generators normalized tight"};
  out.summary = invariant_summary(mf, f, c.tol);
  out.data["invariant"] = json_io::encode(mf.invariant);
  out.data["metric"] = json_io::encode(mf.metric);
  if (c.inputs.size() == 1) return out;

  const Frame g = load_frame(c.inputs[1], c.tol);
  const NormalizedTightMetric mg = normalized_tight_inner_product(g, c.tol);
  out.data["second_invariant"] = json_io::encode(mg.invariant);
  Json& s = out.summary;
  bool match = f.size() == g.size() && grams_match(mf.invariant.gram, mg.invariant.gram, c.tol);
  std::optional<std::vector<std::size_t>> perm;
  if (!match && c.permute && f.size() == g.size()) {
    perm = find_matching_permutation(mf.invariant.gram, mg.invariant.gram, c.tol);
    match = perm.has_value();
  }
  s["invariants_match"] = match;
  if (perm) out.data["permutation"] = *perm;
  if (match && analyze(f, c.tol).is_normalized_tight && analyze(g, c.tol).is_normalized_tight) {
    const Frame g_ordered = perm ? permute_frame(g, *perm, c.tol) : g;
    const UnitaryReconstruction v = build_unitary_from_matching_grams(f, g_ordered, c.tol);
    s["unitary_image_residual"] = number(v.image_residual);
    s["unitary_isometry_defect"] = number(v.isometry_defect);
    s["unitary_range_defect"] = number(v.range_defect);
    out.data["unitary"] = json_io::encode(v.v);
  }
  return out;
}

Report modcheck_report(const RunConfig& c) {
  require_inputs(c, 1, 2);
  const Frame f = load_frame(c.inputs[0], c.tol);
  const RieszReport r = riesz_check(f, c.tol);
  Report out{.title = "modular Riesz basis: sum_j a_j x_j = 0 forces every a_j x_j = 0"};
  Json& s = out.summary;
  s["is_riesz_basis"] = r.is_riesz_basis;
  s["is_orthogonal_hilbert_basis"] = r.is_orthogonal_hilbert_basis;
  s["kernel_generators"] = r.kernel_generators.size();
  s["max_summand_norm"] = number(r.max_summand_norm);
  s["max_kernel_residual"] = number(r.max_kernel_residual);
  Json gens = Json::array();
  for (const auto& a : r.kernel_generators) gens.push_back(json_io::encode(a));
  out.data["kernel_generators"] = std::move(gens);
  if (c.inputs.size() == 1) return out;

  const Frame g = load_frame(c.inputs[1], c.tol);
  const SimilarityResult sim = test_similarity(f, g, c.tol);
  s["relation"] = to_string(sim.relation);
  s["range_distance"] = number(sim.range_distance);
  s["witness_residual"] = number(sim.witness_residual);
  s["gram_distance"] = number(sim.gram_distance);
  if (sim.witness) out.data["witness"] = json_io::encode(*sim.witness);
  if (r.is_riesz_basis && riesz_check(g, c.tol).is_riesz_basis && f.ambient_rank() == g.ambient_rank()) {
    try {
      const ChangeOfBasis cb = change_of_basis_mp(f, g, c.tol);
      s["change_of_basis_mp_residual"] = number(cb.mp.max());
      out.data["change_of_basis"] = {{"f", json_io::encode(cb.f)}, {"g", json_io::encode(cb.g)}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::expansion_residual_too_large) throw;
      s["change_of_basis_mp_residual"] = "n/a: the bases generate different submodules";
    }
  }
  return out;
}

Report resolution_report(const RunConfig& c) {
  require_inputs(c, 1, 1);
  const ResolutionSequence seq = json_io::decode_resolution(json_io::load_file(c.inputs[0]));
  const ResolutionReport v = verify_resolution(seq, std::nullopt, c.seed);
  Report out{.title = "resolution of the identity sum_i b_i* b_i = 1 as a normalized tight frame of M_d"};
  Json& s = out.summary;
  s["d"] = seq.d;
  s["k"] = seq.b.size();
  s["passed"] = v.passed;
  s["sum_residual"] = number(v.sum_residual);
  s["probe_residual"] = number(v.probe_residual);
  s["note"] = std::string(kDilationNote);
  if (!v.passed) {
    out.failure = "sum_i b_i* b_i differs from the identity";
    return out;
  }
  const FrameReport fr = analyze(as_frame(seq), resolution_tol(seq));
  s["frame_lower_bound"] = number(fr.lower_bound);
  s["frame_upper_bound"] = number(fr.upper_bound);
  const RangeReport range = frame_transform_range(seq);
  s["transform_isometry_defect"] = number(range.isometry_defect);
  s["range_projection_defect"] = number(range.projection_defect);
  s["decomposition_defect"] = number(range.decomposition_defect);
  const PolarReport polar = polar_factorization(seq);
  s["polar_reconstruction_residual"] = number(polar.reconstruction_residual);
  s["polar_support_residual"] = number(polar.support_residual);
  s["modulus_square_sum_residual"] = number(polar.modulus_sum_residual);
  const CoefficientReport coeff = coefficient_inequality(seq);
  s["endpoint_identity_residual"] = number(coeff.endpoint_residual);
  s["dominance_margin"] = number(coeff.dominance_margin);
  Json factors = Json::array();
  for (const auto& p : polar.factors) factors.push_back({{"u", json_io::encode(p.u)}, {"m", json_io::encode(p.m)}});
  out.data["polar_factors"] = std::move(factors);
  return out;
}

Report example56_report(const RunConfig& c) {
  require_inputs(c, 0, 0);
  const HilbertFrame x = example_56_frame(c.n);
  const HilbertBounds b = frame_bounds(x, c.tol);
  const TightMultiple mult = closest_tight_multiple(x, c.tol);
  const Example56Point p = example_56_family(c.phi, c.n);
  const double half = example_56_half_width();
  Report out{.title = "tight frames y(phi) at equal operator-norm distance from x = (e1, 3e2, 2e3, ...)"};
  Json& s = out.summary;
  s["n"] = c.n;
  s["lower_bound"] = number(b.lower);
  s["upper_bound"] = number(b.upper);
  s["lambda"] = number(mult.lambda);
  s["multiple_distance"] = number(mult.distance);
  s["phi"] = number(c.phi);
  s["distance"] = number(p.distance);
  s["half_width"] = number(half);
  s["phi_inside_interval"] = std::abs(c.phi) < half;
  out.data["y"] = json_io::encode(p.y);
  if (c.sweep > 0) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < c.sweep; ++i) {
      const double phi = c.sweep == 1 ? 0.0
                                      : -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) /
                                                                static_cast<double>(c.sweep - 1);
      rows.push_back(Json::array({number(phi), number(example_56_family(phi, c.n).distance)}));
    }
    out.curve = {{"columns", {"phi", "distance"}}, {"rows", std::move(rows)}};
  }
  return out;
}

Report build(const RunConfig& c) {
  switch (c.subcommand) {
    case Subcommand::analyze: return analyze_report(c);
    case Subcommand::dual: return dual_report(c);
    case Subcommand::tighten: return tighten_report(c);
    case Subcommand::distance: return distance_report(c);
    case Subcommand::balan: return balan_report(c);
    case Subcommand::invariant: return invariant_report(c);
    case Subcommand::modcheck: return modcheck_report(c);
    case Subcommand::resolution: return resolution_report(c);
    case Subcommand::example56: return example56_report(c);
  }
  throw Error(ErrorCode::invalid_argument, "unknown subcommand");
}

void render(const RunConfig& c, const Report& r, std::ostream& os) {
  switch (c.format) {
    case Format::json: {
      Json doc = {{"subcommand", to_string(c.subcommand)}, {"result", r.title}, {"summary", r.summary},
                  {"data", r.data}};
      if (!r.curve.is_null()) doc["curve"] = r.curve;
      os << doc.dump(2) << '\n';
      return;
    }
    case Format::csv: {
      if (!r.curve.is_null()) {
        const Json& cols = r.curve["columns"];
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i].get<std::string>();
        os << '\n';
        for (const auto& row : r.curve["rows"]) {
          for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_scalar(row[i]);
          os << '\n';
        }
        return;
      }
      os << "key,value\n";
      for (const auto& [k, v] : r.summary.items()) os << k << ',' << format_scalar(v) << '\n';
      return;
    }
    case Format::text: {
      os << to_string(c.subcommand) << ": " << r.title << '\n';
      for (const auto& [k, v] : r.summary.items()) os << "  " << k << " = " << format_scalar(v) << '\n';
      if (!r.curve.is_null()) {
        os << '\n';
        const Json& cols = r.curve["columns"];
        for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? " " : "") << cols[i].get<std::string>();
        os << '\n';
        for (const auto& row : r.curve["rows"]) {
          for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << format_scalar(row[i]);
          os << '\n';
        }
      }
      return;
    }
  }
}

void error_record(std::ostream& err, std::string_view code, const std::string& message) {
  err << Json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

Subcommand parse_subcommand(const std::string& name) {
  for (Subcommand s : {Subcommand::analyze, Subcommand::dual, Subcommand::tighten, Subcommand::distance,
                       Subcommand::balan, Subcommand::invariant, Subcommand::modcheck, Subcommand::resolution,
                       Subcommand::example56})
    if (name == to_string(s)) return s;
  throw Error(ErrorCode::parse_error, "unknown subcommand \"" + name + "\"");
}

const char* to_string(Subcommand s) noexcept {
  switch (s) {
    case Subcommand::analyze: return "analyze";
    case Subcommand::dual: return "dual";
    case Subcommand::tighten: return "tighten";
    case Subcommand::distance: return "distance";
    case Subcommand::balan: return "balan";
    case Subcommand::invariant: return "invariant";
    case Subcommand::modcheck: return "modcheck";
    case Subcommand::resolution: return "resolution";
    case Subcommand::example56: return "example56";
  }
  return "?";
}

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "text") return Format::text;
  throw Error(ErrorCode::parse_error, "unknown format \"" + name + "\"");
}

double tol_from_env(double fallback) {
  const char* raw = std::getenv("MODFRAME_TOL");
  if (raw == nullptr || *raw == '\0') return fallback;
  std::istringstream in(raw);
  in.imbue(std::locale::classic());
  double v = 0.0;
  if (!(in >> v) || !in.eof() || !(v > 0.0) || !std::isfinite(v))
    throw Error(ErrorCode::parse_error, std::string("MODFRAME_TOL must be a positive number, got \"") + raw + "\"");
  return v;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (!(config.tol > 0.0)) throw Error(ErrorCode::invalid_argument, "tol must be positive");
    const Report report = build(config);
    if (config.out) {
      std::ofstream file(*config.out);
      if (!file) throw Error(ErrorCode::file_not_found, "cannot open " + config.out->string() + " for writing");
      render(config, report, file);
    } else {
      render(config, report, out);
    }
    if (report.failure) {
      error_record(err, to_string(ErrorCode::verification_failed), *report.failure);
      return kExitVerification;
    }
    return kExitOk;
  } catch (const Error& e) {
    error_record(err, to_string(e.code()), e.what());
    switch (e.code()) {
      case ErrorCode::parse_error:
      case ErrorCode::file_not_found:
      case ErrorCode::invalid_argument:
        return kExitIo;
      default:
        return kExitVerification;
    }
  }
}

}  // namespace modframe::cli
