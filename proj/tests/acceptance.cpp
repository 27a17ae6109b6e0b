// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "zeno/cli.hpp"
#include "zeno/diagnostics.hpp"
#include "zeno/engine.hpp"
#include "zeno/errors.hpp"
#include "zeno/io.hpp"
#include "zeno/measure.hpp"
#include "zeno/quadrature.hpp"
#include "zeno/random.hpp"
#include "zeno/registry.hpp"

using namespace zeno;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// dim ∈ [2, 16], rank ∈ [1, min(4, dim − 1)], ‖H‖ ∈ [1, 2].
ZenoScenario random_case(std::uint64_t seed) {
  SeededRandom rng(seed * 7919 + 13);
  const auto dim = static_cast<std::size_t>(2 + std::floor(rng.uniform() * 15.0));
  const std::size_t max_rank = std::min<std::size_t>(4, dim - 1);
  const auto rank = static_cast<std::size_t>(1 + std::floor(rng.uniform() * static_cast<double>(max_rank)));
  const double norm = rng.uniform(1.0, 2.0);
  return ZenoScenario("random_" + std::to_string(seed), random_hermitian(dim, norm, seed),
                      random_projection(dim, rank, seed + 1000003));
}

std::vector<ZenoScenario> random_suite() {
  std::vector<ZenoScenario> out;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) out.push_back(random_case(seed));
  return out;
}

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::size_t> grid = geometric_n_grid(8, 15);
  double lo = INFINITY;
  double hi = -INFINITY;
  bool monotone = true;
  for (const ZenoScenario& s : random_suite()) {
    const ZenoLimitResult r = qzd_limit(s, 1.0, grid);
    std::vector<std::pair<double, double>> points;
    for (std::size_t k = 0; k < r.per_n_errors.size(); ++k) {
      points.emplace_back(static_cast<double>(r.per_n_errors[k].first), r.per_n_errors[k].second);
      if (k > 0 && r.per_n_errors[k].second >= r.per_n_errors[k - 1].second) monotone = false;
    }
    const RateFit fit = fit_rate(points);
    lo = std::min(lo, fit.exponent);
    hi = std::max(hi, fit.exponent);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool pass = monotone && lo >= -1.2 && hi <= -0.8 && seconds < 30.0;
  return {pass, "20 scenarios, exponents in [" + num(lo) + ", " + num(hi) + "], errors decreasing: " +
                    (monotone ? "yes" : "no") + ", " + num(seconds) + " s"};
}

Outcome criterion2() {
  const ZenoScenario s = builtin_scenario("sigma_x");
  const ComplexMatrix& p = s.projection().matrix();
  double worst = 0.0;
  for (std::size_t n = 1; n <= 1000; ++n) {
    const double nd = static_cast<double>(n);
    ComplexMatrix expected = p;
    expected *= std::pow(std::cos(1.0 / nd), nd);
    worst = std::max(worst, max_abs_difference(zeno_product(s, 1.0, n), expected));
  }
  const std::vector<std::size_t> n100{100};
  const double error = qzd_limit(s, 1.0, n100).per_n_errors[0].second;
  const double closed = 1.0 - std::pow(std::cos(0.01), 100.0);
  const bool pass = worst <= 1e-10 && std::abs(error - closed) <= 1e-9;
  return {pass, "max |V_N - cos^N(1/N) P| = " + num(worst) + " over N = 1..1000; error(100) = " + num(error) +
                    " vs 1 - cos^100(0.01) = " + num(closed)};
}

Outcome criterion3() {
  double telescoping = 0.0;
  double ergodic = 0.0;
  double derivative = 0.0;
  bool sandwich = true;
  for (const ZenoScenario& s : random_suite()) {
    for (std::size_t n : {1u, 7u, 64u}) {
      telescoping = std::max(telescoping, telescoping_residual(s, 1.0, n));
      ergodic = std::max(ergodic, ergodic_telescoping_residual(s, 1.0, n));
      const ComplexMatrix z = qze_product(s, 1.0, n);
      const ComplexMatrix avg = ergodic_sum(s, 1.0, n);
      const ComplexMatrix zero(s.dim(), s.dim());
      sandwich = sandwich && psd_order_holds(zero, z, 1e-9) && psd_order_holds(z, avg, 1e-9) &&
                 psd_order_holds(avg, s.projection().matrix(), 1e-9);
    }
    derivative = std::max(derivative, operator_norm(derivative_at_zero(s, DerivativeTarget::kQzeStep)));
  }
  const bool pass = telescoping <= 1e-8 && ergodic <= 1e-8 && sandwich && derivative <= 1e-6;
  return {pass, "telescoping residual " + num(telescoping) + ", ergodic form " + num(ergodic) +
                    ", 0 <= Z_N <= S_N <= P: " + (sandwich ? "holds" : "fails") + ", |Z_1'(0)| <= " +
                    num(derivative)};
}

Outcome criterion4() {
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SeededRandom rng(seed * 104729);
    const auto dim = static_cast<std::size_t>(2 + std::floor(rng.uniform() * 15.0));
    const auto rank = static_cast<std::size_t>(1 + std::floor(rng.uniform() * static_cast<double>(dim)));
    const ZenoScenario s("psd_" + std::to_string(seed), random_psd(dim, 2.0, seed + 500),
                         random_projection(dim, rank, seed + 900));
    worst = std::max(worst, operator_norm(zeno_generator_sqrt(s) - zeno_hamiltonian(s)));
  }
  return {worst <= 1e-9, "max |(sqrt(H) P)*(sqrt(H) P) - PHP| = " + num(worst) + " over 20 PSD H"};
}

Outcome criterion5() {
  const SpectralMeasure1D heavy = HeavyLogTail{std::numbers::e};
  const double a = std::numbers::e;
  // 1 − ∫_a^1000 dμ by adaptive Simpson in u = ln λ.
  const DensityOnIntervals d = as_density(heavy);
  QuadratureBudget budget(10'000'000);
  const auto inner = adaptive_simpson(
      [&](double u) {
        const double lambda = std::exp(u);
        return Complex(d.density(lambda) * lambda, 0.0);
      },
      std::log(a), std::log(1000.0), 1e-14, budget);
  const double quad_tail = 1.0 - inner.value.real();
  const double tail = tail_mass(heavy, 1000.0);
  const std::vector<double> cut{1000.0};
  const double falloff = falloff_diagnostic(heavy, cut)[0].value;
  const double mean = truncated_moment(heavy, 1, 1000.0);
  const std::vector<double> grid = geometric_lambda_grid(4, 40);
  bool increasing = true;
  double previous = -INFINITY;
  for (double l : grid) {
    const double m = truncated_moment(heavy, 1, l);
    increasing = increasing && m > previous;
    previous = m;
  }
  // Λ·μ([Λ,∞)) = e/ln Λ for a = e. The 5-digit decimal 0.39351 is itself
  // 1.2e-6 away from it, so the 1e-6 check is made against the exact value.
  const double falloff_exact = a / std::log(1000.0);
  const bool pass = std::abs(tail - 3.9351e-4) <= 1e-8 && std::abs(tail - quad_tail) <= 1e-8 &&
                    std::abs(falloff - falloff_exact) <= 1e-6 && std::abs(falloff - 0.39351) <= 5e-6 &&
                    std::abs(mean - 7.5783) <= 1e-4 && increasing;
  return {pass, "tail(1e3) = " + num(tail) + " (quadrature " + num(quad_tail) + "), falloff = " +
                    format_double(falloff) + " (e/ln 1e3 = " + format_double(falloff_exact) + ")" +
                    ", mean = " + num(mean) + ", moments strictly increasing: " + (increasing ? "yes" : "no")};
}

Outcome criterion6() {
  const std::vector<double> s{1e-2, 1e-3, 1e-4};
  const DerivativePartsReport r = amplitude_derivative_parts(HeavyLogTail{std::numbers::e}, s, 1e-11);
  bool pass = true;
  for (std::size_t k = 0; k < s.size(); ++k) {
    pass = pass && r.im_part[k] < 0.0;
    if (k > 0) {
      pass = pass && r.im_part[k] < r.im_part[k - 1];
      pass = pass && std::abs(r.re_part[k]) < std::abs(r.re_part[k - 1]);
    }
  }
  return {pass, "Im parts " + num(r.im_part[0]) + ", " + num(r.im_part[1]) + ", " + num(r.im_part[2]) +
                    "; |Re| parts " + num(std::abs(r.re_part[0])) + ", " + num(std::abs(r.re_part[1])) + ", " +
                    num(std::abs(r.re_part[2]))};
}

Outcome criterion7() {
  const SpectralMeasure1D cauchy = Cauchy{1.0, 0.0};
  double worst = 0.0;
  for (std::size_t n : {100u, 1000u, 10000u, 100000u, 1000000u}) {
    worst = std::max(worst, std::abs(zeno_probability(cauchy, 1.0, n, 1e-11).value - std::exp(-2.0)));
  }
  const std::vector<double> grid = geometric_lambda_grid(4, 40);
  const double falloff = falloff_diagnostic(cauchy, grid).back().value;
  DiagnosticsConfig config;
  config.n_grid = geometric_n_grid(6, 14);
  const ConvergenceReport report = classify_scenario(MeasureScenario{"cauchy", cauchy}, config);
  const std::string cls(to_string(report.classification));
  const bool pass = worst <= 1e-6 && std::abs(falloff - 2.0 / std::numbers::pi) <= 1e-4 && cls == "neither";
  return {pass, "max |p_N - e^-2| = " + num(worst) + " for N = 1e2..1e6, falloff(2^40) = " + num(falloff) +
                    ", classification " + cls};
}

Outcome criterion8() {
  const std::vector<std::size_t> grid = geometric_n_grid(6, 20);
  double worst = 0.0;
  bool all = true;
  for (double m : {-3.0, 0.0, 3.0}) {
    const ZenoPhaseReport r = zeno_phase(Gaussian{m, 1.0}, 1.0, grid, 1e-11);
    if (!r.zeno_energy) {
      all = false;
      continue;
    }
    worst = std::max(worst, std::abs(*r.zeno_energy - m));
  }
  const SpectralMeasure1D sym = symmetrize(HeavyLogTail{std::numbers::e});
  const ZenoPhaseReport r = zeno_phase(sym, 1.0, grid, 1e-11);
  const double sym_energy = r.zeno_energy.value_or(NAN);
  std::vector<double> abs_moments;
  for (double l : geometric_lambda_grid(4, 40)) abs_moments.push_back(truncated_abs_moment(sym, 1, l));
  const LimitTrend trend = classify_limit(abs_moments, 1e-6);
  const bool pass = all && worst <= 1e-3 && std::abs(sym_energy) <= 1e-3 && trend == LimitTrend::kDiverges;
  return {pass, "Gaussian max |E_Z - m| = " + num(worst) + ", symmetrized heavy E_Z = " + num(sym_energy) +
                    ", |lambda| moment " + std::string(to_string(trend))};
}

Outcome criterion9() {
  const std::vector<double> grid = geometric_lambda_grid(4, 40);
  std::string failures;
  std::size_t checks = 0;
  for (const std::string& name : builtin_measure_names()) {
    const SpectralMeasure1D mu = builtin_measure(name);
    for (int k : {1, 2}) {
      ++checks;
      const TauberianReport r = tauberian_check(mu, k, grid);
      if (!r.consistent) failures += " " + name + "(k=" + std::to_string(k) + ")";
    }
  }
  return {failures.empty(), std::to_string(checks) + " checks over " + std::to_string(builtin_measure_names().size()) +
                                " families" + (failures.empty() ? "" : ", inconsistent:" + failures)};
}

Outcome criterion10() {
  const fs::path root = fs::temp_directory_path() / "zenolab_acceptance";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> runs;
  for (const char* run : {"a", "b"}) {
    const fs::path out = root / run;
    std::ostringstream sink;
    const int sim = run_cli({"simulate", "--scenario", "sigma_x", "--scenario", "random_hermitian dim=8 rank=2",
                             "--seed", "3", "--t-grid", "0.5,1", "--n-grid", "2^6..2^14", "--emit-svg", "--out",
                             out.string()},
                            sink, sink);
    std::vector<std::string> args{"measure"};
    for (const std::string& name : builtin_measure_names()) {
      args.push_back("--scenario");
      args.push_back(name);
    }
    for (const char* extra : {"--n-grid", "2^6..2^16", "--emit-svg", "--out"}) args.emplace_back(extra);
    args.push_back(out.string());
    const int meas = run_cli(args, sink, sink);
    if (sim != 0 || meas != 0) {
      fs::remove_all(root);
      return {false, "commands exited with " + std::to_string(sim) + " and " + std::to_string(meas) + ": " +
                         sink.str()};
    }
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(out)) {
      files[entry.path().filename().string()] = read_text_file(entry.path());
    }
    runs.push_back(std::move(files));
  }
  fs::remove_all(root);
  std::size_t csv = 0, json = 0, svg = 0;
  for (const auto& [name, body] : runs[0]) {
    const std::string ext = fs::path(name).extension().string();
    csv += ext == ".csv";
    json += ext == ".json";
    svg += ext == ".svg";
  }
  const bool pass = runs[0] == runs[1] && csv > 0 && json > 0 && svg > 0;
  return {pass, std::to_string(runs[0].size()) + " files (" + std::to_string(csv) + " CSV, " + std::to_string(json) +
                    " JSON, " + std::to_string(svg) + " SVG) " + (pass ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"finite-dimensional QZD rate", criterion1},
      {"sigma_x closed form", criterion2},
      {"telescoping identity and PSD sandwich", criterion3},
      {"finite-rank generator identity", criterion4},
      {"heavy log tail closed forms", criterion5},
      {"heavy log tail cusp", criterion6},
      {"Cauchy counterexample", criterion7},
      {"Zeno phase", criterion8},
      {"Tauberian consistency", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (k + 1) << " (" << criteria[k].first
              << "): " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
