#pragma once

// Batch front end shared by the `modframe` executable and the tests.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace modframe::cli {

enum class Subcommand { analyze, dual, tighten, distance, balan, invariant, modcheck, resolution, example56 };
enum class Format { json, csv, text };

/// Exit codes of run().
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitVerification = 2;

struct RunConfig {
  Subcommand subcommand = Subcommand::analyze;
  std::vector<std::filesystem::path> inputs;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  Format format = Format::json;
  std::optional<std::filesystem::path> out;

  std::size_t probes = 10;     ///< dual: random reconstruction probes
  std::size_t samples = 0;     ///< balan: coefficient samples per minimizer, 0 to skip
  std::size_t scan_points = 0; ///< tighten: lambda grid points, 0 to skip
  bool permute = false;        ///< invariant: search element permutations (k <= 8)
  double phi = 0.0;            ///< example56
  std::size_t n = 4;           ///< example56: truncation dimension
  std::size_t sweep = 0;       ///< example56: phi grid points over [-pi, pi], 0 to skip
};

Subcommand parse_subcommand(const std::string& name);
const char* to_string(Subcommand s) noexcept;
Format parse_format(const std::string& name);

/// Tolerance from MODFRAME_TOL, or `fallback` when unset. Throws ParseError
/// for a malformed or non-positive value.
double tol_from_env(double fallback);

/// Runs one subcommand, writing the report to `out` (or to config.out) and a
/// one-line JSON error record to `err` on failure. Returns an exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace modframe::cli
