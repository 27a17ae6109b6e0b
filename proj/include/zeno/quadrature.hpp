#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace zeno {

struct QuadratureResult {
  std::complex<double> value;
  /// Sum of the local Richardson error estimates |S₂ − S₁|/15.
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  /// True when some subinterval hit the depth limit before meeting its tolerance.
  bool depth_limited = false;
};

/// Shared evaluation budget for a family of quadratures.
class QuadratureBudget {
 public:
  explicit QuadratureBudget(std::size_t max_evaluations) : remaining_(max_evaluations) {}
  /// Throws QuadratureBudgetExceeded when exhausted.
  void charge(std::size_t evaluations);
  std::size_t remaining() const noexcept { return remaining_; }

 private:
  std::size_t remaining_;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

/// Adaptive Simpson with interval bisection on [a, b].
///
/// A panel is accepted when |S₂ − S₁| ≤ 15·tol (tolerance halves at each
/// bisection) and the Richardson-corrected value S₂ + (S₂ − S₁)/15 is kept.
QuadratureResult adaptive_simpson(const ComplexIntegrand& f, double a, double b, double tol, QuadratureBudget& budget,
                                  int max_depth = 48);

}  // namespace zeno
