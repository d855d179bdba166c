#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "generators.hpp"
#include "modframe/cli.hpp"
#include "modframe/error.hpp"
#include "modframe/json_io.hpp"

using namespace modframe;
using namespace modframe::testing;
using modframe::json_io::Json;

namespace {

std::filesystem::path fixture(const char* name) { return std::filesystem::path(MODFRAME_FIXTURES) / name; }

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome run_cli(cli::Subcommand sub, std::vector<std::filesystem::path> inputs,
                cli::Format format = cli::Format::json) {
  cli::RunConfig c;
  c.subcommand = sub;
  c.inputs = std::move(inputs);
  c.format = format;
  std::ostringstream out, err;
  const int code = cli::run(c, out, err);
  return {code, out.str(), err.str()};
}

Outcome run_config(const cli::RunConfig& c) {
  std::ostringstream out, err;
  const int code = cli::run(c, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(JsonIo, NumbersRoundTripBitExactly) {
  Rng rng(91);
  for (int t = 0; t < 200; ++t) {
    const double v = rng.uniform(-1e6, 1e6) * std::pow(10.0, rng.uniform(-20, 20));
    const Json j = Json::parse(Json(json_io::number(v)).dump());
    EXPECT_EQ(json_io::to_number(j), v);
  }
  const Json inf = json_io::number(std::numeric_limits<double>::infinity());
  EXPECT_EQ(inf, "inf");
  EXPECT_TRUE(std::isinf(json_io::to_number(inf)));
}

TEST(JsonIo, FramesRoundTrip) {
  Rng rng(92);
  for (const auto& shape : small_shapes()) {
    const Frame f = random_submodule_frame(rng, shape, 2, 3);
    const Frame g = json_io::decode_frame(Json::parse(json_io::encode(f).dump()));
    ASSERT_EQ(g.size(), f.size());
    for (std::size_t j = 0; j < f.size(); ++j) EXPECT_EQ(max_abs_diff(g.element(j), f.element(j)), 0.0);
    EXPECT_EQ(max_abs_diff(g.projection(), f.projection()), 0.0);
  }
}

TEST(JsonIo, ResolutionAndHilbertFramesRoundTrip) {
  Rng rng(93);
  const ResolutionSequence seq = random_resolution(rng, 3, 2);
  const ResolutionSequence back = json_io::decode_resolution(Json::parse(json_io::encode(seq).dump()));
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(back.b[i], seq.b[i]);
  const HilbertFrame x = random_hilbert_frame(rng, 3, 4);
  EXPECT_EQ(json_io::decode_hilbert_frame(Json::parse(json_io::encode(x).dump())).matrix(), x.matrix());
  // A shape [1] frame file is also a Hilbert frame.
  const HilbertFrame y = json_io::decode_hilbert_frame(json_io::load_file(fixture("mercedes.json")));
  EXPECT_EQ(y.dim(), 2u);
  EXPECT_EQ(y.size(), 3u);
}

TEST(JsonIo, StructuralErrorsAreParseErrors) {
  const auto expect_parse_error = [](const char* text) {
    try {
      json_io::decode_frame(Json::parse(text));
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::parse_error) << text;
    }
  };
  expect_parse_error(R"({"elements": 3})");
  expect_parse_error(R"({"elements": [{"shape": [1], "rank": 2, "coords": []}]})");
  expect_parse_error(R"({"elements": [{"shape": [0], "rank": 0, "coords": []}]})");
  expect_parse_error(R"({"elements": [{"shape": [1], "rank": 1, "coords": [{"shape": [1], "blocks": [[1, 2]]}]}]})");
  try {
    json_io::load_file(fixture("malformed.json"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
  }
  try {
    json_io::load_file(fixture("does_not_exist.json"));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::file_not_found);
  }
}

TEST(Cli, AnalyzeOrthonormalBasis) {
  const Outcome o = run_cli(cli::Subcommand::analyze, {fixture("orthonormal_basis.json")});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const Json j = o.json();
  EXPECT_EQ(j["subcommand"], "analyze");
  EXPECT_EQ(json_io::to_number(j["summary"]["lower_bound"]), 1.0);
  EXPECT_EQ(json_io::to_number(j["summary"]["upper_bound"]), 1.0);
  EXPECT_EQ(j["summary"]["is_normalized_tight"], true);
  EXPECT_EQ(j["summary"]["is_riesz_basis"], true);
}

TEST(Cli, AnalyzeNonFrameIsAVerificationFailure) {
  const Outcome o = run_cli(cli::Subcommand::analyze, {fixture("not_a_frame.json")});
  EXPECT_EQ(o.code, cli::kExitVerification);
  EXPECT_EQ(o.json()["summary"]["is_frame"], false);
  EXPECT_EQ(o.json()["summary"]["condition"], "inf");
  EXPECT_EQ(Json::parse(o.err)["error"], "VerificationFailed");
}

TEST(Cli, IoErrorsExitWithOne) {
  for (const char* name : {"does_not_exist.json", "malformed.json"}) {
    const Outcome o = run_cli(cli::Subcommand::analyze, {fixture(name)});
    EXPECT_EQ(o.code, cli::kExitIo) << name;
    EXPECT_TRUE(o.out.empty());
    const Json e = Json::parse(o.err);
    EXPECT_TRUE(e["error"] == "FileNotFound" || e["error"] == "ParseError");
    EXPECT_EQ(o.err.find('\n'), o.err.size() - 1);
  }
  EXPECT_EQ(run_cli(cli::Subcommand::distance, {fixture("diagonal_frame.json")}).code, cli::kExitIo);
}

TEST(Cli, EquidistantFamilyAtZeroHasDistanceOne) {
  cli::RunConfig c;
  c.subcommand = cli::Subcommand::example56;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const Json s = o.json()["summary"];
  EXPECT_EQ(json_io::to_number(s["distance"]), 1.0);
  EXPECT_EQ(json_io::to_number(s["lambda"]), 2.0);
  EXPECT_EQ(json_io::to_number(s["lower_bound"]), 1.0);
  EXPECT_EQ(json_io::to_number(s["upper_bound"]), 9.0);
}

TEST(Cli, EquidistantFamilySweepAsCsv) {
  cli::RunConfig c;
  c.subcommand = cli::Subcommand::example56;
  c.format = cli::Format::csv;
  c.sweep = 5;
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, cli::kExitOk);
  std::istringstream lines(o.out);
  std::string header, first;
  std::getline(lines, header);
  EXPECT_EQ(header, "phi,distance");
  std::getline(lines, first);
  // phi = -pi: |2 e^{-i pi} - 2| = 4.
  EXPECT_EQ(first.substr(first.find(',') + 1), "4");
}

TEST(Cli, ResolutionProjectionsFixture) {
  const Outcome o = run_cli(cli::Subcommand::resolution, {fixture("projections_resolution.json")});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const Json j = o.json();
  EXPECT_EQ(j["summary"]["passed"], true);
  const ResolutionSequence seq = json_io::decode_resolution(json_io::load_file(fixture("projections_resolution.json")));
  const Json& factors = j["data"]["polar_factors"];
  ASSERT_EQ(factors.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    const CMatrix u = json_io::decode_square(factors[i]["u"], 4);
    const CMatrix m = json_io::decode_square(factors[i]["m"], 4);
    EXPECT_LE(max_abs_diff(u, seq.b[i]), 1e-14);
    EXPECT_LE(max_abs_diff(m, seq.b[i]), 1e-14);
  }
}

TEST(Cli, DistanceBalanAndTighten) {
  const Outcome d = run_cli(cli::Subcommand::distance, {fixture("diagonal_frame.json"), fixture("diagonal_frame_tight.json")});
  ASSERT_EQ(d.code, cli::kExitOk) << d.err;
  EXPECT_EQ(d.json()["summary"]["similar"], true);
  EXPECT_NEAR(json_io::to_number(d.json()["summary"]["c_yx"]), 0.5, 1e-14);

  cli::RunConfig c;
  c.subcommand = cli::Subcommand::balan;
  c.inputs = {fixture("diagonal_frame.json")};
  c.samples = 20000;
  c.seed = 3;
  const Outcome b = run_config(c);
  ASSERT_EQ(b.code, cli::kExitOk) << b.err;
  EXPECT_NEAR(json_io::to_number(b.json()["summary"]["geometric_lambda"]), std::sqrt(3.0), 1e-14);

  const Outcome t = run_cli(cli::Subcommand::tighten, {fixture("diagonal_frame.json")}, cli::Format::text);
  ASSERT_EQ(t.code, cli::kExitOk) << t.err;
  EXPECT_EQ(t.out.rfind("tighten: ", 0), 0u);
}

TEST(Cli, InvariantComparesShiftedMercedesFrames) {
  const Outcome o = run_cli(cli::Subcommand::invariant, {fixture("mercedes.json"), fixture("mercedes_shifted.json")});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  const Json s = o.json()["summary"];
  EXPECT_EQ(s["invariants_match"], true);
  EXPECT_LE(json_io::to_number(s["unitary_image_residual"]), 1e-12);
}

TEST(Cli, ModcheckZeroDivisorFrame) {
  const Outcome o = run_cli(cli::Subcommand::modcheck, {fixture("zero_divisor_frame.json")});
  ASSERT_EQ(o.code, cli::kExitOk) << o.err;
  EXPECT_EQ(o.json()["summary"]["is_riesz_basis"], true);
  const Outcome sim = run_cli(cli::Subcommand::modcheck, {fixture("mercedes.json"), fixture("mercedes_shifted.json")});
  ASSERT_EQ(sim.code, cli::kExitOk) << sim.err;
  EXPECT_EQ(sim.json()["summary"]["relation"], "unitarily_equivalent");
}

TEST(Cli, DualIsDeterministicForAFixedSeed) {
  cli::RunConfig c;
  c.subcommand = cli::Subcommand::dual;
  c.inputs = {fixture("mercedes.json")};
  c.seed = 17;
  const Outcome a = run_config(c);
  const Outcome b = run_config(c);
  ASSERT_EQ(a.code, cli::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, OutputFileOption) {
  cli::RunConfig c;
  c.subcommand = cli::Subcommand::example56;
  c.out = std::filesystem::temp_directory_path() / "modframe_cli_out.json";
  const Outcome o = run_config(c);
  ASSERT_EQ(o.code, cli::kExitOk);
  EXPECT_TRUE(o.out.empty());
  std::ifstream in(*c.out);
  EXPECT_EQ(Json::parse(in)["subcommand"], "example56");
  std::filesystem::remove(*c.out);
}

TEST(Cli, ToleranceFromEnvironment) {
  ::unsetenv("MODFRAME_TOL");
  EXPECT_EQ(cli::tol_from_env(1e-9), 1e-9);
  ::setenv("MODFRAME_TOL", "1e-6", 1);
  EXPECT_EQ(cli::tol_from_env(1e-9), 1e-6);
  ::setenv("MODFRAME_TOL", "-1", 1);
  EXPECT_THROW(cli::tol_from_env(1e-9), Error);
  ::setenv("MODFRAME_TOL", "abc", 1);
  EXPECT_THROW(cli::tol_from_env(1e-9), Error);
  ::unsetenv("MODFRAME_TOL");
}

TEST(Cli, SubcommandAndFormatNames) {
  for (const char* name : {"analyze", "dual", "tighten", "distance", "balan", "invariant", "modcheck", "resolution",
                           "example56"})
    EXPECT_STREQ(cli::to_string(cli::parse_subcommand(name)), name);
  EXPECT_THROW(cli::parse_subcommand("nope"), Error);
  EXPECT_THROW(cli::parse_format("xml"), Error);
}
