#include "zeno/quadrature.hpp"

#include <cmath>
#include <limits>

#include "zeno/errors.hpp"

namespace zeno {

void QuadratureBudget::charge(std::size_t evaluations) {
  if (evaluations > remaining_) {
    throw QuadratureBudgetExceeded("quadrature evaluation budget exhausted");
  }
  remaining_ -= evaluations;
}

namespace {

using C = std::complex<double>;

struct Panel {
  double a, m, b;
  C fa, fm, fb;
  C whole;
};

C simpson(double a, double b, C fa, C fm, C fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

void refine(const ComplexIntegrand& f, const Panel& p, double tol, int depth, QuadratureBudget& budget,
            QuadratureResult& out) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  budget.charge(2);
  out.evaluations += 2;
  const C flm = f(lm);
  const C frm = f(rm);
  const C left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const C right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const C refined = left + right;
  const C delta = refined - p.whole;
  const double err = std::abs(delta) / 15.0;
  // Roundoff floor: no further bisection can resolve below a few ulps of the panel value.
  const double floor = 8.0 * std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
  if (err <= tol || err <= floor || depth <= 0) {
    if (depth <= 0 && err > tol && err > floor) out.depth_limited = true;
    out.value += refined + delta / 15.0;
    out.error_estimate += err;
    return;
  }
  refine(f, Panel{p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1, budget, out);
  refine(f, Panel{p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1, budget, out);
}

}  // namespace

QuadratureResult adaptive_simpson(const ComplexIntegrand& f, double a, double b, double tol, QuadratureBudget& budget,
                                  int max_depth) {
  QuadratureResult out{};
  if (a == b) return out;
  if (!(tol > 0.0)) throw InvalidArgument("adaptive_simpson: tolerance must be positive");
  budget.charge(3);
  out.evaluations = 3;
  const double m = 0.5 * (a + b);
  const C fa = f(a);
  const C fm = f(m);
  const C fb = f(b);
  // Always bisect once so that a single coincidental Simpson match on the
  // coarsest panel cannot terminate the recursion.
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  budget.charge(2);
  out.evaluations += 2;
  const C flm = f(lm);
  const C frm = f(rm);
  refine(f, Panel{a, lm, m, fa, flm, fm, simpson(a, m, fa, flm, fm)}, 0.5 * tol, max_depth - 1, budget, out);
  refine(f, Panel{m, rm, b, fm, frm, fb, simpson(m, b, fm, frm, fb)}, 0.5 * tol, max_depth - 1, budget, out);
  return out;
}

}  // namespace zeno
