#include "zeno/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "zeno/errors.hpp"
#include "zeno/quadrature.hpp"

namespace zeno {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxEvaluations = 200'000'000;
constexpr std::size_t kMaxSegments = 4'000'000;
// Moments are sign-definite or nearly so; a relative target suffices.
constexpr double kMomentRelTol = 1e-13;
constexpr double kMassTol = 1e-10;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_cut(double cut, const char* what) {
  if (!(cut > 0.0) || !std::isfinite(cut)) throw InvalidArgument(std::string(what) + ": Λ must be positive and finite");
}

void require_tol(double tol, const char* what) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument(std::string(what) + ": tolerance must be positive");
}

// ---------------------------------------------------------------------------
// Closed forms for the families.

double heavy_density(double a, double lambda) {
  if (lambda < a) return 0.0;
  const double l = std::log(lambda);
  return a * std::log(a) * (1.0 + l) / (lambda * lambda * l * l);
}

double heavy_tail(double a, double cut) { return cut <= a ? 1.0 : a * std::log(a) / (cut * std::log(cut)); }

// a ln a [ln(ln Λ / ln a) + 1/ln a − 1/ln Λ], from the antiderivative ln u − 1/u in u = ln λ.
double heavy_mean(double a, double cut) {
  if (cut <= a) return 0.0;
  const double la = std::log(a);
  const double lc = std::log(cut);
  return a * la * (std::log(lc / la) + 1.0 / la - 1.0 / lc);
}

double cauchy_density(const Cauchy& c, double lambda) {
  const double d = lambda - c.center;
  return c.gamma / (kPi * (d * d + c.gamma * c.gamma));
}

double cauchy_tail(const Cauchy& c, double cut) {
  return (std::atan2(1.0, (cut - c.center) / c.gamma) + std::atan2(1.0, (cut + c.center) / c.gamma)) / kPi;
}

// (γ/π) Σ_j C(k,j) c^{k−j} J_j with J_j = ∫ x^j/(x² + γ²) dx over the shifted window.
double cauchy_moment(const Cauchy& c, int k, double cut) {
  const double g = c.gamma;
  const double x0 = -cut - c.center;
  const double x1 = cut - c.center;
  std::vector<double> j(static_cast<std::size_t>(k) + 1);
  j[0] = (std::atan(x1 / g) - std::atan(x0 / g)) / g;
  if (k >= 1) j[1] = 0.5 * std::log((x1 * x1 + g * g) / (x0 * x0 + g * g));
  for (int m = 2; m <= k; ++m) {
    j[m] = (std::pow(x1, m - 1) - std::pow(x0, m - 1)) / (m - 1) - g * g * j[m - 2];
  }
  double sum = 0.0;
  double binom = 1.0;
  for (int m = 0; m <= k; ++m) {
    sum += binom * std::pow(c.center, k - m) * j[m];
    binom = binom * (k - m) / (m + 1);
  }
  return g / kPi * sum;
}

double gaussian_density(const Gaussian& g, double lambda) {
  const double z = (lambda - g.mean) / g.sigma;
  return std::exp(-0.5 * z * z) / (g.sigma * std::sqrt(2.0 * kPi));
}

double gaussian_tail(const Gaussian& g, double cut) {
  const double r = g.sigma * std::numbers::sqrt2;
  return 0.5 * std::erfc((cut - g.mean) / r) + 0.5 * std::erfc((cut + g.mean) / r);
}

// e^z − 1 without cancellation for small z.
Complex complex_expm1(Complex z) {
  const double h = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * h * h, std::exp(z.real()) * std::sin(z.imag())};
}

// log(1 + d) without cancellation for small d.
Complex complex_log1p(Complex d) {
  const double re = 0.5 * std::log1p(2.0 * d.real() + std::norm(d));
  return {re, std::atan2(d.imag(), 1.0 + d.real())};
}

// ---------------------------------------------------------------------------
// Density quadrature.

enum class KernelKind { kDefect, kPower, kAbsPower };

struct Kernel {
  KernelKind kind = KernelKind::kPower;
  double s = 0.0;
  int k = 0;

  Complex operator()(double lambda) const {
    switch (kind) {
      case KernelKind::kDefect: {
        // e^{-isλ} − 1
        const double h = std::sin(0.5 * lambda * s);
        return {-2.0 * h * h, -std::sin(lambda * s)};
      }
      case KernelKind::kPower: return k == 0 ? 1.0 : std::pow(lambda, k);
      case KernelKind::kAbsPower: return k == 0 ? 1.0 : std::pow(std::abs(lambda), k);
    }
    return 0.0;
  }
};

bool unbounded(const DensityPiece& p) { return std::isinf(p.lo) || std::isinf(p.hi); }

struct Segment {
  std::size_t piece;
  double lo;
  double hi;
};

// Splits [lo, hi] ⊂ piece into segments marching away from the origin, each at
// most osc_step long.
void append_segments(const DensityPiece& p, std::size_t index, double lo, double hi, double osc_step,
                     std::vector<Segment>& out) {
  if (!(hi > lo)) return;
  if (lo < 0.0 && hi > 0.0) {
    append_segments(p, index, lo, 0.0, osc_step, out);
    append_segments(p, index, 0.0, hi, osc_step, out);
    return;
  }
  const bool negative = hi <= 0.0;
  const double near = negative ? -hi : lo;
  const double far = negative ? -lo : hi;
  const double growth = p.log_coordinates ? 1.0 : 0.25;
  double x = near;
  while (x < far) {
    double step = p.geometric ? std::max(p.scale, growth * x) : p.scale;
    step = std::min(step, osc_step);
    const double next = far - x <= step * (1.0 + 1e-12) ? far : x + step;
    if (negative) {
      out.push_back({index, -next, -x});
    } else {
      out.push_back({index, x, next});
    }
    if (out.size() > kMaxSegments) throw QuadratureBudgetExceeded("quadrature needs too many segments");
    x = next;
  }
}

struct MappedSegment {
  ComplexIntegrand f;
  double a;
  double b;
};

MappedSegment map_segment(const DensityOnIntervals& d, const DensityPiece& p, const Segment& seg, const Kernel& kernel) {
  if (p.log_coordinates) {
    const double sign = seg.lo >= 0.0 ? 1.0 : -1.0;
    const double u0 = std::log(sign > 0.0 ? seg.lo : -seg.hi);
    const double u1 = std::log(sign > 0.0 ? seg.hi : -seg.lo);
    auto f = [&d, kernel, sign](double u) {
      const double e = std::exp(u);
      const double lambda = sign * e;
      return kernel(lambda) * (d.density(lambda) * e);
    };
    return {f, u0, u1};
  }
  auto f = [&d, kernel](double lambda) { return kernel(lambda) * d.density(lambda); };
  return {f, seg.lo, seg.hi};
}

struct WindowResult {
  Complex value;
  double error = 0.0;
  bool depth_limited = false;
  double tolerance = 0.0;
};

// ∫_{[lo, hi]} kernel dμ over the density pieces. The absolute tolerance is
// max(abs_tol, rel_tol·M), with M a sampled estimate of ∫|kernel| dμ; it is
// shared among segments half by estimated mass and half equally.
WindowResult integrate_window(const DensityOnIntervals& d, const Kernel& kernel, double lo, double hi, double osc_step,
                              double abs_tol, double rel_tol, QuadratureBudget& budget) {
  std::vector<Segment> segments;
  for (std::size_t i = 0; i < d.pieces.size(); ++i) {
    const DensityPiece& p = d.pieces[i];
    append_segments(p, i, std::max(p.lo, lo), std::min(p.hi, hi), osc_step, segments);
  }
  WindowResult out;
  if (segments.empty()) return out;

  std::vector<MappedSegment> mapped;
  std::vector<double> weights;
  mapped.reserve(segments.size());
  weights.reserve(segments.size());
  double total = 0.0;
  for (const Segment& seg : segments) {
    const DensityPiece& p = d.pieces[seg.piece];
    MappedSegment m = map_segment(d, p, seg, kernel);
    budget.charge(3);
    double peak = 0.0;
    for (double x : {m.a, 0.5 * (m.a + m.b), m.b}) {
      const double lambda = p.log_coordinates ? (seg.lo >= 0.0 ? std::exp(x) : -std::exp(x)) : x;
      const double density = d.density(lambda);
      if (!(density >= 0.0) || !std::isfinite(density)) {
        throw InvalidMeasure("density is negative or non-finite at λ = " + std::to_string(lambda));
      }
      peak = std::max(peak, std::abs(m.f(x)));
    }
    const double w = peak * (m.b - m.a);
    weights.push_back(w);
    total += w;
    mapped.push_back(std::move(m));
  }

  const double tol = std::max({abs_tol, rel_tol * total, std::numeric_limits<double>::min()});
  out.tolerance = tol;
  const double n = static_cast<double>(segments.size());
  for (std::size_t i = 0; i < mapped.size(); ++i) {
    const double share = total > 0.0 ? 0.5 * weights[i] / total + 0.5 / n : 1.0 / n;
    const QuadratureResult r = adaptive_simpson(mapped[i].f, mapped[i].a, mapped[i].b, tol * share, budget);
    out.value += r.value;
    out.error += r.error_estimate;
    out.depth_limited = out.depth_limited || r.depth_limited;
  }
  return out;
}

void check_window(const WindowResult& w) {
  if (w.depth_limited && w.error > w.tolerance) {
    throw QuadratureBudgetExceeded("adaptive quadrature hit its depth limit; requested tolerance unreachable");
  }
}

// Start of the outer region: beyond every finite endpoint and every
// monotonicity threshold of the unbounded pieces.
double outer_start(const DensityOnIntervals& d) {
  double x = 1.0;
  for (const DensityPiece& p : d.pieces) {
    if (std::isfinite(p.lo)) x = std::max(x, std::abs(p.lo));
    if (std::isfinite(p.hi)) x = std::max(x, std::abs(p.hi));
    if (unbounded(p) && std::isfinite(p.monotone_from)) x = std::max(x, p.monotone_from);
  }
  return x;
}

struct ComplexEstimate {
  Complex value;
  double error_bound = 0.0;
};

// 𝒜(s) − 1 for a density. Half of tol goes to the window [−X, X], half to
// the outer region, where
//   ∫_{|λ|>X} (e^{-isλ} − 1) dμ = ∫_{|λ|>X} e^{-isλ} dμ − tail(X)
// and the oscillatory part is bounded by min(tail(X), Σ 2√2 f(±X)/|s|), the
// second term by the second mean value theorem for densities nonincreasing in
// |λ| beyond X.
ComplexEstimate density_defect(const DensityOnIntervals& d, double s, double tol) {
  if (s == 0.0) return {};
  const double osc = kPi / std::abs(s);
  QuadratureBudget budget(kMaxEvaluations);
  const bool has_outer = std::any_of(d.pieces.begin(), d.pieces.end(), unbounded);

  double x = kInf;
  double outer_bound = 0.0;
  double outer_mass = 0.0;
  double window_tol = tol;
  if (has_outer) {
    window_tol = 0.5 * tol;
    x = outer_start(d);
    for (int iter = 0;; ++iter) {
      double bonnet = 0.0;
      for (const DensityPiece& p : d.pieces) {
        if (!unbounded(p)) continue;
        if (!(x >= p.monotone_from)) {
          bonnet = kInf;
          break;
        }
        const double edge = std::isinf(p.hi) ? x : -x;
        bonnet += 2.0 * std::numbers::sqrt2 * d.density(edge) / std::abs(s);
      }
      outer_mass = d.tail(x);
      outer_bound = std::min(outer_mass, bonnet);
      if (outer_bound <= 0.5 * tol) break;
      if (iter > 2000 || x > 1e300) {
        throw QuadratureBudgetExceeded("no integration window meets the tail tolerance");
      }
      x *= 2.0;
    }
    if (x / osc > static_cast<double>(kMaxSegments)) {
      throw QuadratureBudgetExceeded("integration window holds too many oscillations");
    }
  }
  const WindowResult w = integrate_window(d, Kernel{KernelKind::kDefect, s, 0}, -x, x, osc, window_tol, 0.0, budget);
  check_window(w);
  ComplexEstimate out{w.value - outer_mass, w.error + outer_bound};
  if (out.error_bound > tol) {
    throw QuadratureBudgetExceeded("amplitude error bound " + std::to_string(out.error_bound) +
                                   " exceeds the requested tolerance");
  }
  if (d.symmetric) out.value.imag(0.0);
  return out;
}

Estimate density_moment(const DensityOnIntervals& d, const Kernel& kernel, double lo, double hi) {
  QuadratureBudget budget(kMaxEvaluations);
  const WindowResult w = integrate_window(d, kernel, lo, hi, kInf, 0.0, kMomentRelTol, budget);
  check_window(w);
  return {w.value.real(), w.error};
}

double density_total_mass(const DensityOnIntervals& d) {
  const bool has_outer = std::any_of(d.pieces.begin(), d.pieces.end(), unbounded);
  if (!has_outer) return density_moment(d, Kernel{}, -kInf, kInf).value;
  double x = outer_start(d);
  while (d.tail(x) > 1e-13) {
    if (x > 1e300) throw InvalidMeasure("declared tail does not decay");
    x *= 2.0;
  }
  return density_moment(d, Kernel{}, -x, x).value + d.tail(x);
}

void validate_density(const DensityOnIntervals& d) {
  if (!d.density) throw InvalidMeasure("density function is missing");
  if (d.pieces.empty()) throw InvalidMeasure("density needs at least one support interval");
  std::vector<std::pair<double, double>> spans;
  for (const DensityPiece& p : d.pieces) {
    if (std::isnan(p.lo) || std::isnan(p.hi) || !(p.lo < p.hi)) throw InvalidMeasure("support interval must have lo < hi");
    if (std::isinf(p.lo) && std::isinf(p.hi)) throw InvalidMeasure("split the real line at 0 into two intervals");
    if ((std::isinf(p.hi) && p.lo < 0.0) || (std::isinf(p.lo) && p.hi > 0.0)) {
      throw InvalidMeasure("an unbounded interval must not contain 0");
    }
    if (p.log_coordinates && p.lo < 0.0 && p.hi > 0.0) throw InvalidMeasure("log coordinates need a one-signed interval");
    if (p.log_coordinates && (p.lo == 0.0 || p.hi == 0.0)) throw InvalidMeasure("log coordinates need |λ| bounded away from 0");
    if (!(p.scale > 0.0) || !std::isfinite(p.scale)) throw InvalidMeasure("segment scale must be positive");
    if (unbounded(p) && !d.tail) throw InvalidMeasure("an unbounded support interval needs a tail function");
    spans.emplace_back(p.lo, p.hi);
  }
  std::sort(spans.begin(), spans.end());
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i].first < spans[i - 1].second) throw InvalidMeasure("support intervals overlap");
  }
  const double mass = density_total_mass(d);
  if (std::abs(mass - 1.0) > kMassTol) throw InvalidMeasure("density has total mass " + std::to_string(mass));
}

void validate_atoms(const DiscreteAtoms& atoms) {
  if (atoms.locations.empty()) throw InvalidMeasure("atom list is empty");
  if (atoms.locations.size() != atoms.weights.size()) throw InvalidMeasure("atom locations and weights differ in length");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.weights.size(); ++i) {
    if (!std::isfinite(atoms.locations[i])) throw InvalidMeasure("atom location must be finite");
    if (!(atoms.weights[i] > 0.0) || !std::isfinite(atoms.weights[i])) throw InvalidMeasure("atom weight must be positive");
    total += atoms.weights[i];
  }
  if (std::abs(total - 1.0) > kMassTol) throw InvalidMeasure("atom weights sum to " + std::to_string(total));
}

// ---------------------------------------------------------------------------
// Density forms.

DensityOnIntervals heavy_as_density(const HeavyLogTail& h) {
  const double a = h.a;
  DensityOnIntervals d;
  d.density = [a](double lambda) { return heavy_density(a, lambda); };
  d.pieces = {DensityPiece{a, kInf, true, true, a, a}};
  d.tail = [a](double cut) { return heavy_tail(a, cut); };
  return d;
}

DensityOnIntervals cauchy_as_density(const Cauchy& c) {
  DensityOnIntervals d;
  d.density = [c](double lambda) { return cauchy_density(c, lambda); };
  const double from = std::abs(c.center);
  d.pieces = {DensityPiece{-kInf, 0.0, false, true, c.gamma, from}, DensityPiece{0.0, kInf, false, true, c.gamma, from}};
  d.tail = [c](double cut) { return cauchy_tail(c, cut); };
  d.symmetric = c.center == 0.0;
  return d;
}

DensityOnIntervals gaussian_as_density(const Gaussian& g) {
  // ±(|m| + 40σ) leaves a tail below 1e-340.
  const double r = std::abs(g.mean) + 40.0 * g.sigma;
  DensityOnIntervals d;
  d.density = [g](double lambda) { return gaussian_density(g, lambda); };
  d.pieces = {DensityPiece{-r, r, false, false, 0.25 * g.sigma, kInf}};
  d.tail = [g](double cut) { return gaussian_tail(g, cut); };
  d.symmetric = g.mean == 0.0;
  return d;
}

DensityOnIntervals mirrored_density(const DensityOnIntervals& base, std::shared_ptr<const SpectralMeasure1D> origin) {
  std::vector<DensityPiece> pieces;
  auto add = [&pieces](const DensityPiece& p) {
    for (DensityPiece& q : pieces) {
      if (q.lo == p.lo && q.hi == p.hi) {
        q.monotone_from = std::max(q.monotone_from, p.monotone_from);
        q.scale = std::min(q.scale, p.scale);
        q.geometric = q.geometric && p.geometric;
        q.log_coordinates = q.log_coordinates && p.log_coordinates;
        return;
      }
    }
    pieces.push_back(p);
  };
  for (const DensityPiece& p : base.pieces) add(p);
  for (const DensityPiece& p : base.pieces) {
    DensityPiece m = p;
    m.lo = -p.hi;
    m.hi = -p.lo;
    add(m);
  }
  std::sort(pieces.begin(), pieces.end(), [](const DensityPiece& x, const DensityPiece& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].lo < pieces[i - 1].hi) {
      throw InvalidMeasure("cannot symmetrize: support overlaps its mirror image without coinciding");
    }
  }
  auto inside = [support = base.pieces](double x) {
    return std::any_of(support.begin(), support.end(), [x](const DensityPiece& p) { return p.lo <= x && x <= p.hi; });
  };
  DensityOnIntervals d;
  d.density = [f = base.density, inside](double x) {
    double v = 0.0;
    if (inside(x)) v += f(x);
    if (inside(-x)) v += f(-x);
    return 0.5 * v;
  };
  d.pieces = std::move(pieces);
  d.tail = base.tail;
  d.symmetric = true;
  d.mirror_of = std::move(origin);
  return d;
}

// ---------------------------------------------------------------------------
// Amplitude in defect/log form.

struct AmplitudeParts {
  Complex defect;      // 𝒜 − 1
  Complex log_amp;     // log 𝒜 (continuous in s near 0)
  double error = 0.0;  // bound on |𝒜 − computed|
};

AmplitudeParts amplitude_parts(const SpectralMeasure1D& mu, double s, double tol) {
  if (!std::isfinite(s)) throw InvalidArgument("survival_amplitude: s must be finite");
  require_tol(tol, "survival_amplitude");
  if (s == 0.0) return {};
  auto from_log = [](Complex log_amp) { return AmplitudeParts{complex_expm1(log_amp), log_amp, 0.0}; };
  auto from_defect = [](ComplexEstimate e) { return AmplitudeParts{e.value, complex_log1p(e.value), e.error_bound}; };
  return std::visit(
      Overloaded{
          [&](const DiscreteAtoms& atoms) {
            const Kernel kernel{KernelKind::kDefect, s, 0};
            Complex sum;
            for (std::size_t i = 0; i < atoms.weights.size(); ++i) sum += atoms.weights[i] * kernel(atoms.locations[i]);
            return from_defect({sum, 0.0});
          },
          [&](const DensityOnIntervals& d) { return from_defect(density_defect(d, s, tol)); },
          [&](const HeavyLogTail& h) { return from_defect(density_defect(heavy_as_density(h), s, tol)); },
          [&](const Cauchy& c) { return from_log({-c.gamma * std::abs(s), -c.center * s}); },
          [&](const Gaussian& g) { return from_log({-0.5 * g.sigma * g.sigma * s * s, -g.mean * s}); },
          [&](const PointMass& p) { return from_log({0.0, -p.location * s}); },
      },
      mu.variant());
}

}  // namespace

// ---------------------------------------------------------------------------

SpectralMeasure1D::SpectralMeasure1D(Variant variant) : variant_(std::move(variant)) {
  std::visit(Overloaded{
                 [](const DiscreteAtoms& atoms) { validate_atoms(atoms); },
                 [](const DensityOnIntervals& d) { validate_density(d); },
                 [](const HeavyLogTail& h) {
                   if (!(h.a > 1.0) || !std::isfinite(h.a)) throw InvalidMeasure("heavy log tail needs a > 1");
                 },
                 [](const Cauchy& c) {
                   if (!(c.gamma > 0.0) || !std::isfinite(c.gamma) || !std::isfinite(c.center)) {
                     throw InvalidMeasure("Cauchy needs γ > 0 and a finite center");
                   }
                 },
                 [](const Gaussian& g) {
                   if (!(g.sigma > 0.0) || !std::isfinite(g.sigma) || !std::isfinite(g.mean)) {
                     throw InvalidMeasure("Gaussian needs σ > 0 and a finite mean");
                   }
                 },
                 [](const PointMass& p) {
                   if (!std::isfinite(p.location)) throw InvalidMeasure("point mass location must be finite");
                 },
             },
             variant_);
}

std::string SpectralMeasure1D::kind() const {
  static constexpr const char* kNames[] = {"discrete_atoms", "density", "heavy_log_tail", "cauchy", "gaussian",
                                           "point_mass"};
  return kNames[variant_.index()];
}

bool SpectralMeasure1D::is_symmetric() const {
  return std::visit(Overloaded{
                        [](const DiscreteAtoms& atoms) {
                          std::vector<std::pair<double, double>> plus, minus;
                          for (std::size_t i = 0; i < atoms.weights.size(); ++i) {
                            plus.emplace_back(atoms.locations[i], atoms.weights[i]);
                            minus.emplace_back(-atoms.locations[i], atoms.weights[i]);
                          }
                          std::sort(plus.begin(), plus.end());
                          std::sort(minus.begin(), minus.end());
                          return plus == minus;
                        },
                        [](const DensityOnIntervals& d) { return d.symmetric; },
                        [](const HeavyLogTail&) { return false; },
                        [](const Cauchy& c) { return c.center == 0.0; },
                        [](const Gaussian& g) { return g.mean == 0.0; },
                        [](const PointMass& p) { return p.location == 0.0; },
                    },
                    variant_);
}

DensityOnIntervals as_density(const SpectralMeasure1D& mu) {
  return std::visit(Overloaded{
                        [](const DiscreteAtoms&) -> DensityOnIntervals {
                          throw InvalidArgument("atomic measures have no density");
                        },
                        [](const DensityOnIntervals& d) { return d; },
                        [](const HeavyLogTail& h) { return heavy_as_density(h); },
                        [](const Cauchy& c) { return cauchy_as_density(c); },
                        [](const Gaussian& g) { return gaussian_as_density(g); },
                        [](const PointMass&) -> DensityOnIntervals {
                          throw InvalidArgument("atomic measures have no density");
                        },
                    },
                    mu.variant());
}

Estimate tail_mass_estimate(const SpectralMeasure1D& mu, double lambda_cut) {
  require_cut(lambda_cut, "tail_mass");
  const double cut = lambda_cut;
  const Estimate e = std::visit(
      Overloaded{
          [&](const DiscreteAtoms& atoms) {
            double sum = 0.0;
            for (std::size_t i = 0; i < atoms.weights.size(); ++i) {
              if (std::abs(atoms.locations[i]) >= cut) sum += atoms.weights[i];
            }
            return Estimate{sum, 0.0};
          },
          [&](const DensityOnIntervals& d) {
            if (d.tail) return Estimate{d.tail(cut), 0.0};
            const Estimate left = density_moment(d, Kernel{}, -kInf, -cut);
            const Estimate right = density_moment(d, Kernel{}, cut, kInf);
            return Estimate{left.value + right.value, left.error_bound + right.error_bound};
          },
          [&](const HeavyLogTail& h) { return Estimate{heavy_tail(h.a, cut), 0.0}; },
          [&](const Cauchy& c) { return Estimate{cauchy_tail(c, cut), 0.0}; },
          [&](const Gaussian& g) { return Estimate{gaussian_tail(g, cut), 0.0}; },
          [&](const PointMass& p) { return Estimate{std::abs(p.location) >= cut ? 1.0 : 0.0, 0.0}; },
      },
      mu.variant());
  return {std::clamp(e.value, 0.0, 1.0), e.error_bound};
}

double tail_mass(const SpectralMeasure1D& mu, double lambda_cut) { return tail_mass_estimate(mu, lambda_cut).value; }

std::vector<FalloffPoint> falloff_diagnostic(const SpectralMeasure1D& mu, std::span<const double> lambda_grid) {
  if (lambda_grid.empty()) throw InvalidArgument("falloff_diagnostic: Λ grid must be nonempty");
  std::vector<FalloffPoint> out;
  out.reserve(lambda_grid.size());
  for (double cut : lambda_grid) {
    const Estimate e = tail_mass_estimate(mu, cut);
    out.push_back({cut, cut * e.value, cut * e.error_bound});
  }
  return out;
}

Estimate truncated_moment_estimate(const SpectralMeasure1D& mu, int k, double lambda_cut) {
  require_cut(lambda_cut, "truncated_moment");
  if (k < 0) throw InvalidArgument("truncated_moment: k must be ≥ 0");
  const double cut = lambda_cut;
  const Kernel kernel{KernelKind::kPower, 0.0, k};
  return std::visit(
      Overloaded{
          [&](const DiscreteAtoms& atoms) {
            double sum = 0.0;
            for (std::size_t i = 0; i < atoms.weights.size(); ++i) {
              if (std::abs(atoms.locations[i]) < cut) sum += atoms.weights[i] * kernel(atoms.locations[i]).real();
            }
            return Estimate{sum, 0.0};
          },
          [&](const DensityOnIntervals& d) {
            if (d.symmetric && k % 2 == 1) return Estimate{0.0, 0.0};
            return density_moment(d, kernel, -cut, cut);
          },
          [&](const HeavyLogTail& h) {
            if (k == 0) return Estimate{1.0 - heavy_tail(h.a, cut), 0.0};
            if (k == 1) return Estimate{heavy_mean(h.a, cut), 0.0};
            return density_moment(heavy_as_density(h), kernel, -cut, cut);
          },
          [&](const Cauchy& c) {
            if (c.center == 0.0 && k % 2 == 1) return Estimate{0.0, 0.0};
            return Estimate{cauchy_moment(c, k, cut), 0.0};
          },
          [&](const Gaussian& g) {
            if (g.mean == 0.0 && k % 2 == 1) return Estimate{0.0, 0.0};
            return density_moment(gaussian_as_density(g), kernel, -cut, cut);
          },
          [&](const PointMass& p) {
            return Estimate{std::abs(p.location) < cut ? kernel(p.location).real() : 0.0, 0.0};
          },
      },
      mu.variant());
}

double truncated_moment(const SpectralMeasure1D& mu, int k, double lambda_cut) {
  return truncated_moment_estimate(mu, k, lambda_cut).value;
}

Estimate truncated_abs_moment_estimate(const SpectralMeasure1D& mu, int k, double lambda_cut) {
  require_cut(lambda_cut, "truncated_abs_moment");
  if (k < 0) throw InvalidArgument("truncated_abs_moment: k must be ≥ 0");
  const double cut = lambda_cut;
  const Kernel kernel{KernelKind::kAbsPower, 0.0, k};
  return std::visit(
      Overloaded{
          [&](const DiscreteAtoms& atoms) {
            double sum = 0.0;
            for (std::size_t i = 0; i < atoms.weights.size(); ++i) {
              if (std::abs(atoms.locations[i]) < cut) sum += atoms.weights[i] * kernel(atoms.locations[i]).real();
            }
            return Estimate{sum, 0.0};
          },
          [&](const DensityOnIntervals& d) { return density_moment(d, kernel, -cut, cut); },
          [&](const HeavyLogTail& h) {
            if (k <= 1) return truncated_moment_estimate(mu, k, cut);
            return density_moment(heavy_as_density(h), kernel, -cut, cut);
          },
          [&](const Cauchy& c) {
            if (k % 2 == 0) return Estimate{cauchy_moment(c, k, cut), 0.0};
            return density_moment(cauchy_as_density(c), kernel, -cut, cut);
          },
          [&](const Gaussian& g) { return density_moment(gaussian_as_density(g), kernel, -cut, cut); },
          [&](const PointMass& p) {
            return Estimate{std::abs(p.location) < cut ? kernel(p.location).real() : 0.0, 0.0};
          },
      },
      mu.variant());
}

double truncated_abs_moment(const SpectralMeasure1D& mu, int k, double lambda_cut) {
  return truncated_abs_moment_estimate(mu, k, lambda_cut).value;
}

TauberianReport tauberian_check(const SpectralMeasure1D& mu, int k, std::span<const double> lambda_grid,
                                double classifier_tol) {
  if (k < 1) throw InvalidArgument("tauberian_check: k must be ≥ 1");
  if (lambda_grid.empty()) throw InvalidArgument("tauberian_check: Λ grid must be nonempty");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i) {
    if (!(lambda_grid[i] > lambda_grid[i - 1])) throw InvalidArgument("tauberian_check: Λ grid must be increasing");
  }
  TauberianReport report;
  report.k = k;
  report.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  for (double cut : lambda_grid) {
    report.lhs.push_back(cut * tail_mass(mu, cut));
    report.rhs.push_back(std::pow(cut, -k) * truncated_moment(mu, k + 1, cut));
  }
  report.lhs_trend = classify_vanishing(report.lhs, classifier_tol);
  report.rhs_trend = classify_vanishing(report.rhs, classifier_tol);
  const bool determined =
      report.lhs_trend != VanishingTrend::kUndetermined && report.rhs_trend != VanishingTrend::kUndetermined;
  const bool forward = report.lhs_trend != VanishingTrend::kVanishes || report.rhs_trend == VanishingTrend::kVanishes;
  const bool converse = k % 2 == 0 || report.rhs_trend != VanishingTrend::kVanishes ||
                        report.lhs_trend == VanishingTrend::kVanishes;
  report.consistent = determined && forward && converse;
  return report;
}

AmplitudeValue survival_amplitude(const SpectralMeasure1D& mu, double s, double tol) {
  const AmplitudeParts parts = amplitude_parts(mu, s, tol);
  return {s, Complex(1.0, 0.0) + parts.defect, parts.error};
}

double survival_probability(const SpectralMeasure1D& mu, double s, double tol) {
  const AmplitudeParts parts = amplitude_parts(mu, s, tol);
  const double p = 1.0 + 2.0 * parts.defect.real() + std::norm(parts.defect);
  return std::clamp(p, 0.0, 1.0);
}

ZenoProbability zeno_probability(const SpectralMeasure1D& mu, double t, std::size_t n, double tol) {
  if (n == 0) throw InvalidArgument("zeno_probability: N must be ≥ 1");
  if (!std::isfinite(t)) throw InvalidArgument("zeno_probability: t must be finite");
  require_tol(tol, "zeno_probability");
  if (t == 0.0) return {};
  const double nd = static_cast<double>(n);
  const AmplitudeParts parts = amplitude_parts(mu, t / nd, tol);
  const double modulus = std::exp(parts.log_amp.real());
  if (modulus == 0.0) {
    if (parts.error == 0.0) return {0.0, 0.0, 0.0};
    throw PrecisionLoss("zeno_probability: amplitude indistinguishable from 0");
  }
  // ln p = 2 Re log 𝒜; |δ ln p| ≤ 2|δ𝒜|/|𝒜|.
  const double log_bound = nd * 2.0 * parts.error / modulus;
  if (log_bound > 1e-3) {
    throw PrecisionLoss("zeno_probability: propagated log-space bound " + std::to_string(log_bound) + " exceeds 1e-3");
  }
  const double value = std::min(1.0, std::exp(nd * 2.0 * parts.log_amp.real()));
  return {value, value * std::expm1(log_bound), log_bound};
}

std::string_view to_string(PhaseStatus status) {
  switch (status) {
    case PhaseStatus::kConverges: return "converges";
    case PhaseStatus::kDiverges: return "diverges";
    case PhaseStatus::kUndetermined: return "undetermined";
    case PhaseStatus::kNoQze: return "no_zeno";
  }
  return "undetermined";
}

ZenoPhaseReport zeno_phase(const SpectralMeasure1D& mu, double t, std::span<const std::size_t> n_grid, double tol,
                           double classifier_tol) {
  if (!std::isfinite(t) || t == 0.0) throw InvalidArgument("zeno_phase: t must be finite and nonzero");
  if (n_grid.empty()) throw InvalidArgument("zeno_phase: N grid must be nonempty");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0) throw InvalidArgument("zeno_phase: N must be ≥ 1");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) throw InvalidArgument("zeno_phase: N grid must be increasing");
  }
  ZenoPhaseReport report;
  report.t = t;
  std::vector<double> deficits;
  std::vector<double> phases;
  for (std::size_t n : n_grid) {
    const double nd = static_cast<double>(n);
    const AmplitudeParts parts = amplitude_parts(mu, t / nd, tol);
    const Complex exponent = nd * parts.log_amp;
    ZenoPhasePoint point;
    point.n = n;
    point.power = std::exp(exponent);
    point.modulus = std::exp(exponent.real());
    point.phase = exponent.imag();
    const double modulus_one = std::exp(parts.log_amp.real());
    point.error_bound = modulus_one > 0.0 ? nd * parts.error / modulus_one : kInf;
    deficits.push_back(std::abs(1.0 - point.modulus));
    phases.push_back(point.phase);
    report.points.push_back(point);
  }
  report.modulus_deficit_trend = classify_vanishing(deficits, classifier_tol);
  report.phase_trend = classify_limit(phases, classifier_tol);
  if (phases.size() >= 2) report.divergence_flag = std::abs(phases.back() - phases[phases.size() - 2]) >= 0.1;

  switch (report.modulus_deficit_trend) {
    case VanishingTrend::kPersists: report.status = PhaseStatus::kNoQze; break;
    case VanishingTrend::kUndetermined: report.status = PhaseStatus::kUndetermined; break;
    case VanishingTrend::kVanishes:
      if (report.divergence_flag || report.phase_trend == LimitTrend::kDiverges) {
        report.status = PhaseStatus::kDiverges;
      } else if (report.phase_trend == LimitTrend::kConverges) {
        report.status = PhaseStatus::kConverges;
        report.zeno_energy = -phases.back() / t;
      } else {
        report.status = PhaseStatus::kUndetermined;
      }
      break;
  }
  return report;
}

DerivativePartsReport amplitude_derivative_parts(const SpectralMeasure1D& mu, std::span<const double> s_grid,
                                                 double tol) {
  if (s_grid.empty()) throw InvalidArgument("amplitude_derivative_parts: s grid must be nonempty");
  const bool positive = s_grid.front() > 0.0;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const double s = s_grid[i];
    if (!std::isfinite(s) || s == 0.0 || (s > 0.0) != positive) {
      throw InvalidArgument("amplitude_derivative_parts: s grid must be nonzero and one-signed");
    }
    if (i > 0 && !(std::abs(s) < std::abs(s_grid[i - 1]))) {
      throw InvalidArgument("amplitude_derivative_parts: s grid must approach 0 monotonically");
    }
  }
  DerivativePartsReport report;
  for (double s : s_grid) {
    const AmplitudeParts parts = amplitude_parts(mu, s, tol);
    report.s.push_back(s);
    report.re_part.push_back(2.0 * parts.defect.real() / s);
    report.im_part.push_back(parts.defect.imag() / s);
    report.error_bound.push_back(2.0 * parts.error / std::abs(s));
  }
  return report;
}

SpectralMeasure1D symmetrize(const SpectralMeasure1D& mu) {
  auto mirror_atoms = [](const std::vector<double>& locations, const std::vector<double>& weights) {
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < locations.size(); ++i) {
      atoms.emplace_back(locations[i], 0.5 * weights[i]);
      atoms.emplace_back(-locations[i], 0.5 * weights[i]);
    }
    std::sort(atoms.begin(), atoms.end());
    DiscreteAtoms out;
    for (const auto& [x, w] : atoms) {
      if (!out.locations.empty() && out.locations.back() == x) {
        out.weights.back() += w;
      } else {
        out.locations.push_back(x);
        out.weights.push_back(w);
      }
    }
    return out;
  };
  if (const auto* atoms = std::get_if<DiscreteAtoms>(&mu.variant())) {
    return SpectralMeasure1D(mirror_atoms(atoms->locations, atoms->weights));
  }
  if (const auto* point = std::get_if<PointMass>(&mu.variant())) {
    return SpectralMeasure1D(mirror_atoms({point->location}, {1.0}));
  }
  return SpectralMeasure1D(mirrored_density(as_density(mu), std::make_shared<const SpectralMeasure1D>(mu)));
}

}  // namespace zeno
