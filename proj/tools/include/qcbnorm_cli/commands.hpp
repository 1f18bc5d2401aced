#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcbnorm_cli/channel_spec.hpp"
#include "qcbnorm_cli/report.hpp"

namespace qcbnorm::cli {

/// Exit codes of the tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInputError = 2;

/// Invalid command-line configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { kCompute, kVerify };
enum class Format { kJson, kCsv };

struct Tolerances {
  double gap = 2e-3;         // multiplicativity, additivity and agreement gaps, bits
  double dispersion = 5e-3;  // dispersion additivity
  double center = 1e-4;      // trace distance
  double cmi = 1e-4;         // bits
  double probe = 1e-10;      // Carlen-Lieb convexity violation
};

struct RunConfig {
  Command command = Command::kCompute;
  std::vector<ChannelSpec> channels;
  std::vector<double> alphas{0.5, 0.7, 0.9};
  std::uint64_t seed = 0;
  int restarts = 8;
  int trials = 5;
  std::array<std::size_t, 3> dims{2, 2, 2};  // random channels: input, output, environment
  std::size_t dimension_cap = 9;
  int probes = 200;  // Carlen-Lieb samples per (p, q)
  std::optional<std::string> out;
  Format format = Format::kJson;
  bool timing = true;
  bool zoo_pairs = true;  // verify: include the pairs of verify_zoo()
  Tolerances tol;

  /// Throws ConfigError.
  void validate() const;
};

/// Per channel and alpha: cb quasi-norm (primal, dual, pure-state ratio) and I_alpha
/// (primal, dual); per channel: I(N), the center and the dispersions.
Report cmd_compute(const RunConfig& cfg);

/// Random channel pairs plus the zoo pairs: multiplicativity, Renyi additivity,
/// dispersion and mutual-information additivity, center and structure checks, and
/// Carlen-Lieb convexity probes.
Report cmd_verify(const RunConfig& cfg);

/// The zoo channels paired by cmd_verify.
std::vector<ChannelSpec> verify_zoo();

/// Parses the command line into a RunConfig. Throws ConfigError or ParseError;
/// returns std::nullopt after printing help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// Whole tool: parse, run, write the report to cfg.out (atomically) or `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qcbnorm::cli
