#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "zeno/engine.hpp"
#include "zeno/measure.hpp"
#include "zeno/sequence.hpp"

namespace zeno {

enum class Classification { kQzeAndQzd, kQzeOnly, kNeither, kUndetermined };

/// "QZE+QZD", "QZE-only", "neither" or "undetermined".
std::string_view to_string(Classification c);

/// Rule table: fall-off vanishing with a convergent mean gives QZE+QZD,
/// fall-off vanishing with a divergent mean gives QZE-only, persisting
/// fall-off gives neither, anything else is undetermined.
Classification classify(VanishingTrend falloff, LimitTrend mean);

struct RateFit {
  double exponent = 0.0;
  double constant = 0.0;
  /// RMS residual of the fit in log space.
  double residual = 0.0;
  std::size_t points_used = 0;
};

/// Least-squares fit error ≈ constant · N^exponent on the upper half of the grid.
/// Needs ≥ 4 points; throws DegenerateFit when every error is below 1e-13.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

std::vector<std::size_t> geometric_n_grid(int first_exponent, int last_exponent);
std::vector<double> geometric_lambda_grid(int first_exponent, int last_exponent);

struct DiagnosticsConfig {
  std::vector<std::size_t> n_grid = geometric_n_grid(6, 20);
  std::vector<double> lambda_grid = geometric_lambda_grid(4, 40);
  std::vector<double> t_grid{1.0};
  std::vector<double> s_grid{1e-2, 1e-3, 1e-4};
  double quadrature_tol = 1e-11;
  double classifier_tol = 1e-6;
  bool force_sequential = false;
  /// Worker threads for sweeps; 0 uses the hardware concurrency.
  std::size_t threads = 0;

  /// Throws ConfigError on empty grids or nonpositive tolerances.
  void validate() const;
};

struct MeasureScenario {
  std::string label;
  SpectralMeasure1D measure;
};

using SweepInput = std::variant<ZenoScenario, MeasureScenario>;

const std::string& label_of(const SweepInput& input);

struct SeriesPoint {
  double x = 0.0;
  double value = 0.0;
  double error_bound = 0.0;
};

struct Series {
  std::string name;
  std::string x_name;
  std::vector<SeriesPoint> points;
};

struct ConvergenceReport {
  std::string label;
  /// "operator" for (H, P) pairs, "measure" for spectral measures.
  std::string kind;
  double t = 0.0;
  std::vector<Series> quantities;
  std::optional<RateFit> fit;
  /// "ok", "degenerate" or "insufficient".
  std::string fit_status;
  std::string falloff_trend;
  std::string mean_trend;
  Classification classification = Classification::kUndetermined;
  /// Reference the per-N errors are measured against.
  std::string oracle;
  std::optional<double> zeno_energy;
  /// Errors raised while evaluating this cell; the sweep continues regardless.
  std::vector<std::string> errors;

  const Series* find(std::string_view name) const;
};

ConvergenceReport classify_scenario(const ZenoScenario& scenario, const DiagnosticsConfig& config, double t = 1.0);
ConvergenceReport classify_scenario(const MeasureScenario& scenario, const DiagnosticsConfig& config, double t = 1.0);
ConvergenceReport classify_scenario(const SweepInput& input, const DiagnosticsConfig& config, double t = 1.0);

/// Evaluates every (scenario, t) cell, possibly concurrently; reports are
/// ordered by scenario index, then t index.
std::vector<ConvergenceReport> run_sweep(std::span<const SweepInput> scenarios, std::span<const double> t_grid,
                                         std::span<const std::size_t> n_grid, const DiagnosticsConfig& config);

}  // namespace zeno
