#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "zeno/sequence.hpp"

namespace zeno {

using Complex = std::complex<double>;

struct DiscreteAtoms {
  std::vector<double> locations;
  std::vector<double> weights;
};

/// One support interval of a density together with hints for the quadrature.
///
/// An interval may be unbounded on one side only, and then must not contain 0
/// in its interior (split at 0 instead).
struct DensityPiece {
  double lo = 0.0;
  double hi = 0.0;
  /// Integrate in u = ln|λ| (the interval must not contain 0).
  bool log_coordinates = false;
  /// Let segment lengths grow like |λ| away from the origin.
  bool geometric = false;
  /// Smallest segment length, in λ.
  double scale = 1.0;
  /// The density is nonincreasing in |λ| for |λ| ≥ monotone_from; enables an
  /// oscillatory tail bound on unbounded intervals.
  double monotone_from = std::numeric_limits<double>::infinity();
};

class SpectralMeasure1D;

struct DensityOnIntervals {
  std::function<double(double)> density;
  std::vector<DensityPiece> pieces;
  /// Λ ↦ μ((−Λ,Λ)^c); required when some piece is unbounded.
  std::function<double(double)> tail;
  /// μ(E) = μ(−E): odd moments and Im 𝒜 vanish identically.
  bool symmetric = false;
  /// Set by symmetrize(): the measure this one is the symmetric part of.
  std::shared_ptr<const SpectralMeasure1D> mirror_of;
};

/// dμ = a ln a (1 + ln λ)/(λ² ln² λ) dλ on [a, ∞), a > 1.
struct HeavyLogTail {
  double a = std::numbers::e;
};

struct Cauchy {
  double gamma = 1.0;
  double center = 0.0;
};

struct Gaussian {
  double mean = 0.0;
  double sigma = 1.0;
};

struct PointMass {
  double location = 0.0;
};

/// Borel probability measure on the real line. Immutable; validated on construction.
class SpectralMeasure1D {
 public:
  using Variant = std::variant<DiscreteAtoms, DensityOnIntervals, HeavyLogTail, Cauchy, Gaussian, PointMass>;

  SpectralMeasure1D(Variant variant);  // NOLINT(google-explicit-constructor)
  template <class T>
    requires(!std::is_same_v<std::decay_t<T>, Variant> && !std::is_same_v<std::decay_t<T>, SpectralMeasure1D> &&
             std::is_constructible_v<Variant, T>)
  SpectralMeasure1D(T&& alternative)  // NOLINT(google-explicit-constructor)
      : SpectralMeasure1D(Variant(std::forward<T>(alternative))) {}

  const Variant& variant() const noexcept { return variant_; }
  /// "discrete_atoms", "density", "heavy_log_tail", "cauchy", "gaussian" or "point_mass".
  std::string kind() const;
  bool is_symmetric() const;

 private:
  Variant variant_;
};

struct Estimate {
  double value = 0.0;
  double error_bound = 0.0;
};

struct AmplitudeValue {
  double s = 0.0;
  Complex amplitude{1.0, 0.0};
  double quadrature_error_bound = 0.0;
};

/// μ((−Λ,Λ)^c).
double tail_mass(const SpectralMeasure1D& mu, double lambda_cut);
Estimate tail_mass_estimate(const SpectralMeasure1D& mu, double lambda_cut);

struct FalloffPoint {
  double lambda_cut = 0.0;
  double value = 0.0;  ///< Λ · μ((−Λ,Λ)^c)
  double error_bound = 0.0;
};

std::vector<FalloffPoint> falloff_diagnostic(const SpectralMeasure1D& mu, std::span<const double> lambda_grid);

/// ∫_{(−Λ,Λ)} λ^k dμ for k ≥ 0.
double truncated_moment(const SpectralMeasure1D& mu, int k, double lambda_cut);
Estimate truncated_moment_estimate(const SpectralMeasure1D& mu, int k, double lambda_cut);

/// ∫_{(−Λ,Λ)} |λ|^k dμ for k ≥ 0.
double truncated_abs_moment(const SpectralMeasure1D& mu, int k, double lambda_cut);
Estimate truncated_abs_moment_estimate(const SpectralMeasure1D& mu, int k, double lambda_cut);

struct TauberianReport {
  int k = 1;
  std::vector<double> lambda_grid;
  std::vector<double> lhs;  ///< Λ μ((−Λ,Λ)^c)
  std::vector<double> rhs;  ///< Λ^{-k} ∫_{(−Λ,Λ)} λ^{k+1} dμ
  VanishingTrend lhs_trend = VanishingTrend::kUndetermined;
  VanishingTrend rhs_trend = VanishingTrend::kUndetermined;
  bool consistent = false;
};

/// Compares the tail condition with the normalized truncated moment condition.
///
/// A vanishing lhs must come with a vanishing rhs. The converse is required
/// only for odd k: an even moment of order k+1 can cancel between the two
/// half-lines (a centred Cauchy law has rhs ≡ 0 at k = 2 while its tail
/// condition fails). An undetermined verdict on either side is inconsistent.
TauberianReport tauberian_check(const SpectralMeasure1D& mu, int k, std::span<const double> lambda_grid,
                                double classifier_tol = 1e-6);

/// 𝒜(s) = ∫ e^{-isλ} dμ(λ) with a rigorous-in-intent error bound ≤ tol.
AmplitudeValue survival_amplitude(const SpectralMeasure1D& mu, double s, double tol);

/// |𝒜(s)|², clamped to [0, 1].
double survival_probability(const SpectralMeasure1D& mu, double s, double tol);

struct ZenoProbability {
  double value = 1.0;
  double error_bound = 0.0;
  /// Propagated bound on N ln p(t/N).
  double log_error_bound = 0.0;
};

/// [p(t/N)]^N, computed as exp(N ln p) with ln p from the amplitude defect 𝒜 − 1.
/// Throws PrecisionLoss when the propagated log-space bound exceeds 1e-3.
ZenoProbability zeno_probability(const SpectralMeasure1D& mu, double t, std::size_t n, double tol);

enum class PhaseStatus { kConverges, kDiverges, kUndetermined, kNoQze };
std::string_view to_string(PhaseStatus status);

struct ZenoPhasePoint {
  std::size_t n = 0;
  Complex power;  ///< [𝒜(t/N)]^N
  double modulus = 1.0;
  double phase = 0.0;  ///< Im N log 𝒜(t/N), not reduced modulo 2π
  double error_bound = 0.0;
};

struct ZenoPhaseReport {
  double t = 0.0;
  std::vector<ZenoPhasePoint> points;
  VanishingTrend modulus_deficit_trend = VanishingTrend::kUndetermined;
  LimitTrend phase_trend = LimitTrend::kUndetermined;
  /// Phase moved by ≥ 0.1 rad between the last two grid points.
  bool divergence_flag = false;
  std::optional<double> zeno_energy;
  PhaseStatus status = PhaseStatus::kUndetermined;
};

ZenoPhaseReport zeno_phase(const SpectralMeasure1D& mu, double t, std::span<const std::size_t> n_grid, double tol,
                           double classifier_tol = 1e-6);

struct DerivativePartsReport {
  std::vector<double> s;
  std::vector<double> re_part;  ///< (2/s) ∫ (cos λs − 1) dμ
  std::vector<double> im_part;  ///< −(1/s) ∫ sin λs dμ
  std::vector<double> error_bound;
};

DerivativePartsReport amplitude_derivative_parts(const SpectralMeasure1D& mu, std::span<const double> s_grid,
                                                 double tol);

/// (μ(E) + μ(−E))/2. Atoms stay atoms; everything else becomes a density.
SpectralMeasure1D symmetrize(const SpectralMeasure1D& mu);

/// The density representation used by the quadrature for the continuous
/// families (and the identity on densities). Throws for atomic measures.
DensityOnIntervals as_density(const SpectralMeasure1D& mu);

}  // namespace zeno
