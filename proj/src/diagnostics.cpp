#include "zeno/diagnostics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "zeno/errors.hpp"

namespace zeno {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::kQzeAndQzd: return "QZE+QZD";
    case Classification::kQzeOnly: return "QZE-only";
    case Classification::kNeither: return "neither";
    case Classification::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

Classification classify(VanishingTrend falloff, LimitTrend mean) {
  if (falloff == VanishingTrend::kPersists) return Classification::kNeither;
  if (falloff != VanishingTrend::kVanishes) return Classification::kUndetermined;
  switch (mean) {
    case LimitTrend::kConverges: return Classification::kQzeAndQzd;
    case LimitTrend::kDiverges: return Classification::kQzeOnly;
    case LimitTrend::kUndetermined: return Classification::kUndetermined;
  }
  return Classification::kUndetermined;
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw InvalidArgument("fit_rate: need at least 4 points");
  for (const auto& [n, err] : points) {
    if (!(n > 0.0) || !std::isfinite(n) || !(err >= 0.0) || !std::isfinite(err)) {
      throw InvalidArgument("fit_rate: grid values must be positive and errors nonnegative");
    }
  }
  if (std::all_of(points.begin(), points.end(), [](const auto& p) { return p.second < 1e-13; })) {
    throw DegenerateFit("fit_rate: all errors are below 1e-13");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = points.size() / 2; i < points.size(); ++i) {
    if (points[i].second <= 0.0) continue;
    xs.push_back(std::log(points[i].first));
    ys.push_back(std::log(points[i].second));
  }
  if (xs.size() < 2) throw DegenerateFit("fit_rate: fewer than two positive errors in the upper half of the grid");
  const double m = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DegenerateFit("fit_rate: grid values in the upper half coincide");
  RateFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.constant = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  fit.points_used = xs.size();
  return fit;
}

std::vector<std::size_t> geometric_n_grid(int first_exponent, int last_exponent) {
  if (first_exponent < 0 || last_exponent < first_exponent || last_exponent > 62) {
    throw InvalidArgument("geometric_n_grid: bad exponent range");
  }
  std::vector<std::size_t> grid;
  for (int k = first_exponent; k <= last_exponent; ++k) grid.push_back(std::size_t{1} << k);
  return grid;
}

std::vector<double> geometric_lambda_grid(int first_exponent, int last_exponent) {
  if (last_exponent < first_exponent) throw InvalidArgument("geometric_lambda_grid: bad exponent range");
  std::vector<double> grid;
  for (int k = first_exponent; k <= last_exponent; ++k) grid.push_back(std::ldexp(1.0, k));
  return grid;
}

void DiagnosticsConfig::validate() const {
  if (n_grid.empty()) throw ConfigError("N grid must be nonempty");
  if (lambda_grid.empty()) throw ConfigError("Λ grid must be nonempty");
  if (t_grid.empty()) throw ConfigError("t grid must be nonempty");
  if (s_grid.empty()) throw ConfigError("s grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw ConfigError("N grid must be positive and strictly increasing");
    }
  }
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > 0.0) || !std::isfinite(lambda_grid[i]) || (i > 0 && lambda_grid[i] <= lambda_grid[i - 1])) {
      throw ConfigError("Λ grid must be positive, finite and strictly increasing");
    }
  }
  for (double t : t_grid) {
    if (!std::isfinite(t)) throw ConfigError("t grid entries must be finite");
  }
  if (!(quadrature_tol > 0.0)) throw ConfigError("quadrature tolerance must be positive");
  if (!(classifier_tol > 0.0)) throw ConfigError("classifier tolerance must be positive");
}

const std::string& label_of(const SweepInput& input) {
  return std::visit(
      [](const auto& s) -> const std::string& {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ZenoScenario>) {
          return s.label();
        } else {
          return s.label;
        }
      },
      input);
}

const Series* ConvergenceReport::find(std::string_view name) const {
  for (const Series& s : quantities) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

void attach_fit(ConvergenceReport& report, const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    report.fit_status = "insufficient";
    return;
  }
  try {
    report.fit = fit_rate(points);
    report.fit_status = "ok";
  } catch (const DegenerateFit&) {
    report.fit_status = "degenerate";
  }
}

}  // namespace

ConvergenceReport classify_scenario(const ZenoScenario& scenario, const DiagnosticsConfig& config, double t) {
  config.validate();
  ConvergenceReport report;
  report.label = scenario.label();
  report.kind = "operator";
  report.t = t;
  report.oracle = "P exp(-i t PHP) on the range of P, by eigendecomposition of the compressed PHP";

  Series falloff{"falloff", "lambda", {}};
  Series mean{"truncated_mean_norm", "lambda", {}};
  std::vector<double> falloff_values;
  std::vector<double> mean_norms;
  std::vector<double> mean_steps;
  ComplexMatrix previous(1, 1);
  for (std::size_t i = 0; i < config.lambda_grid.size(); ++i) {
    const double cut = config.lambda_grid[i];
    const double f = cut * operator_norm(falloff_operator(scenario, cut));
    const ComplexMatrix m = projected_truncated_mean(scenario, cut);
    const double norm = operator_norm(m);
    if (i > 0) mean_steps.push_back(operator_norm(m - previous));
    previous = m;
    falloff_values.push_back(f);
    mean_norms.push_back(norm);
    falloff.points.push_back({cut, f, 0.0});
    mean.points.push_back({cut, norm, 0.0});
  }
  const VanishingTrend falloff_trend = classify_vanishing(falloff_values, config.classifier_tol);
  const LimitTrend mean_trend = classify_limit(mean_norms, mean_steps, config.classifier_tol);
  report.falloff_trend = std::string(to_string(falloff_trend));
  report.mean_trend = std::string(to_string(mean_trend));
  report.classification = classify(falloff_trend, mean_trend);

  ProductOptions options;
  options.force_sequential = config.force_sequential;
  const ZenoLimitResult limit = qzd_limit(scenario, t, config.n_grid, options);
  Series errors{"qzd_error", "N", {}};
  std::vector<std::pair<double, double>> points;
  for (const auto& [n, err] : limit.per_n_errors) {
    errors.points.push_back({static_cast<double>(n), err, 0.0});
    points.emplace_back(static_cast<double>(n), err);
  }
  report.quantities = {std::move(errors), std::move(falloff), std::move(mean)};
  attach_fit(report, points);
  return report;
}

ConvergenceReport classify_scenario(const MeasureScenario& scenario, const DiagnosticsConfig& config, double t) {
  config.validate();
  const SpectralMeasure1D& mu = scenario.measure;
  ConvergenceReport report;
  report.label = scenario.label;
  report.kind = "measure";
  report.t = t;
  report.oracle = "1 (the QZE limit of the survival probability)";

  Series falloff{"falloff", "lambda", {}};
  Series mean{"truncated_mean", "lambda", {}};
  std::vector<double> falloff_values;
  std::vector<double> means;
  for (const FalloffPoint& p : falloff_diagnostic(mu, config.lambda_grid)) {
    falloff.points.push_back({p.lambda_cut, p.value, p.error_bound});
    falloff_values.push_back(p.value);
  }
  for (double cut : config.lambda_grid) {
    const Estimate e = truncated_moment_estimate(mu, 1, cut);
    mean.points.push_back({cut, e.value, e.error_bound});
    means.push_back(e.value);
  }
  const VanishingTrend falloff_trend = classify_vanishing(falloff_values, config.classifier_tol);
  const LimitTrend mean_trend = classify_limit(means, config.classifier_tol);
  report.falloff_trend = std::string(to_string(falloff_trend));
  report.mean_trend = std::string(to_string(mean_trend));
  report.classification = classify(falloff_trend, mean_trend);
  report.quantities = {std::move(falloff), std::move(mean)};

  if (t == 0.0) {
    report.fit_status = "degenerate";
    return report;
  }
  try {
    const ZenoPhaseReport phase = zeno_phase(mu, t, config.n_grid, config.quadrature_tol, config.classifier_tol);
    Series probability{"zeno_probability", "N", {}};
    Series phases{"zeno_phase", "N", {}};
    std::vector<std::pair<double, double>> points;
    for (const ZenoPhasePoint& p : phase.points) {
      const double n = static_cast<double>(p.n);
      // [p(t/N)]^N = |[𝒜(t/N)]^N|², with twice the relative log-space bound.
      const double value = std::min(1.0, p.modulus * p.modulus);
      probability.points.push_back({n, value, value * std::expm1(2.0 * p.error_bound)});
      phases.points.push_back({n, p.phase, p.error_bound});
      points.emplace_back(n, 1.0 - value);
    }
    report.quantities.push_back(std::move(probability));
    report.quantities.push_back(std::move(phases));
    report.zeno_energy = phase.zeno_energy;
    attach_fit(report, points);
  } catch (const Error& e) {
    report.errors.emplace_back(e.what());
    report.fit_status = "insufficient";
  }
  return report;
}

ConvergenceReport classify_scenario(const SweepInput& input, const DiagnosticsConfig& config, double t) {
  return std::visit([&](const auto& s) { return classify_scenario(s, config, t); }, input);
}

std::vector<ConvergenceReport> run_sweep(std::span<const SweepInput> scenarios, std::span<const double> t_grid,
                                         std::span<const std::size_t> n_grid, const DiagnosticsConfig& config) {
  if (scenarios.empty()) throw InvalidArgument("run_sweep: scenario list is empty");
  if (t_grid.empty()) throw InvalidArgument("run_sweep: t grid is empty");
  DiagnosticsConfig cell_config = config;
  cell_config.n_grid.assign(n_grid.begin(), n_grid.end());
  cell_config.t_grid.assign(t_grid.begin(), t_grid.end());
  cell_config.validate();

  const std::size_t cells = scenarios.size() * t_grid.size();
  std::vector<ConvergenceReport> reports(cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t cell = next++; cell < cells; cell = next++) {
      const SweepInput& input = scenarios[cell / t_grid.size()];
      const double t = t_grid[cell % t_grid.size()];
      try {
        reports[cell] = classify_scenario(input, cell_config, t);
      } catch (const std::exception& e) {
        ConvergenceReport failed;
        failed.label = label_of(input);
        failed.kind = std::holds_alternative<ZenoScenario>(input) ? "operator" : "measure";
        failed.t = t;
        failed.fit_status = "insufficient";
        failed.errors.emplace_back(e.what());
        reports[cell] = std::move(failed);
      }
    }
  };
  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::clamp<std::size_t>(threads, 1, cells);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  return reports;
}

}  // namespace zeno
