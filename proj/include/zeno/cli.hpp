#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "zeno/diagnostics.hpp"
#include "zeno/io.hpp"

namespace zeno {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  /// Builtin spec strings or paths to JSON files (relative to base_dir).
  std::vector<std::string> scenarios;
  std::vector<std::string> measures;
  std::filesystem::path base_dir = ".";
  std::filesystem::path out_dir = "zeno_out";
  std::vector<double> t_grid{1.0};
  std::vector<std::size_t> n_grid = geometric_n_grid(6, 20);
  std::vector<double> lambda_grid = geometric_lambda_grid(4, 40);
  std::vector<double> s_grid{1e-2, 1e-3, 1e-4};
  std::vector<int> tauberian_orders{1, 2};
  double tol = 1e-11;
  double classifier_tol = 1e-6;
  bool force_sequential = false;
  bool emit_svg = false;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  /// Throws ConfigError; creates the output directory and checks it is writable.
  void validate() const;
  DiagnosticsConfig diagnostics() const;
};

/// Keys mirror the long flags with underscores: scenarios, measures, out,
/// t_grid, n_grid, lambda_grid, s_grid, tauberian_orders, tol,
/// classifier_tol, force_sequential, emit_svg, seed, threads.
/// Unknown keys are a ConfigError.
RunConfig run_config_from_json(const Json& j, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// "64,128,256" or the power-of-two range "2^6..2^20".
std::vector<double> parse_grid(const std::string& text);

/// Per scenario: <stem>_qzd.csv (t,N,error), <stem>_qzd.json and optionally <stem>_qzd.svg.
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Per measure: falloff, zeno_probability, zeno_phase, tauberian and
/// derivative_parts CSVs plus <stem>_measure.json.
int cmd_measure(const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_plot(const std::filesystem::path& csv, const std::filesystem::path& svg, std::ostream& out,
             std::ostream& err);

/// Full command line, without the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zeno
