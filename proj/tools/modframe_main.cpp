#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "modframe/cli.hpp"
#include "modframe/error.hpp"

namespace {

struct Subcommand {
  const char* name;
  const char* description;
  std::size_t min_inputs;
  std::size_t max_inputs;
};

constexpr Subcommand kSubcommands[] = {
    {"analyze", "frame bounds, tightness and frame transform of a modular frame", 1, 1},
    {"dual", "canonical dual frame and reconstruction check", 1, 1},
    {"tighten", "symmetric approximation and closest tight multiple of a Hilbert frame", 1, 1},
    {"distance", "quadratic closeness and nearness of two Hilbert frames", 2, 2},
    {"balan", "the three closest tight frames of a Hilbert frame", 1, 1},
    {"invariant", "Gram invariant of a generating set; compare two with a second file", 1, 2},
    {"modcheck", "modular Riesz-basis test; similarity and change of basis with a second file", 1, 2},
    {"resolution", "resolution of the identity in M_d", 1, 1},
    {"example56", "the frame (e1, 3e2, 2e3, ...) and its equidistant tight frames", 0, 0},
};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = modframe::cli;
  CLI::App app{"Numerical toolkit for frames in Hilbert C*-modules over finite-dimensional algebras"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::string format = "json";
  std::optional<double> tol;
  std::string out;

  app.add_option("--tol", tol, "tolerance (default: MODFRAME_TOL, else 1e-9)")->check(CLI::PositiveNumber);
  app.add_option("--seed", config.seed, "seed for randomized checks")->capture_default_str();
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();
  app.add_option("--out", out, "write the report to this file instead of stdout");

  std::vector<std::string> inputs;
  for (const auto& s : kSubcommands) {
    CLI::App* sub = app.add_subcommand(s.name, s.description);
    if (s.max_inputs > 0) {
      sub->add_option("inputs", inputs, "input JSON file(s)")->required()->expected(
          static_cast<int>(s.min_inputs), static_cast<int>(s.max_inputs));
    }
    // Common flags are accepted after the subcommand as well.
    sub->fallthrough();
    const std::string name = s.name;
    if (name == "dual") sub->add_option("--probes", config.probes, "random reconstruction probes")->capture_default_str();
    if (name == "balan") sub->add_option("--samples", config.samples, "coefficient samples per minimizer");
    if (name == "tighten") sub->add_option("--scan", config.scan_points, "lambda grid points for a CSV scan");
    if (name == "invariant") sub->add_flag("--permute", config.permute, "search element permutations (k <= 8)");
    if (name == "example56") {
      sub->add_option("--phi", config.phi, "phase of y_3")->capture_default_str();
      sub->add_option("--n", config.n, "truncation dimension (>= 3)")->capture_default_str();
      sub->add_option("--sweep", config.sweep, "phi grid points over [-pi, pi] for a CSV curve");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << nlohmann::json{{"error", "ParseError"}, {"message", e.what()}}.dump() << '\n';
    return cli::kExitIo;
  }

  try {
    config.subcommand = cli::parse_subcommand(app.get_subcommands().front()->get_name());
    config.format = cli::parse_format(format);
    config.tol = tol ? *tol : cli::tol_from_env(1e-9);
  } catch (const modframe::Error& e) {
    std::cerr << nlohmann::json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << '\n';
    return cli::kExitIo;
  }
  config.inputs.assign(inputs.begin(), inputs.end());
  if (!out.empty()) config.out = out;
  return cli::run(config, std::cout, std::cerr);
}
