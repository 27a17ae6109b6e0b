#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zeno/linalg.hpp"

namespace zeno {

struct ProductOptions {
  /// Multiply the compressed step N times in sequence instead of using
  /// square-and-multiply. Used to cross-check the two product orders.
  bool force_sequential = false;
};

/// A Hamiltonian/projection pair with a label.
///
/// All product formulas live on the range of P, so the scenario caches the
/// spectral coordinates C = Q* B of the range basis B; a step V(τ) is then the
/// rank × rank block B* U(τ) B = C* diag(e^{-iτλ}) C.
class ZenoScenario {
 public:
  ZenoScenario(std::string label, HermitianOperator hamiltonian, OrthogonalProjection projection);

  const std::string& label() const noexcept { return label_; }
  const HermitianOperator& hamiltonian() const noexcept { return hamiltonian_; }
  const OrthogonalProjection& projection() const noexcept { return projection_; }
  std::size_t dim() const noexcept { return projection_.dim(); }
  std::size_t rank() const noexcept { return projection_.rank(); }

  /// B* U(dt) B.
  ComplexMatrix compressed_step(double dt) const;
  /// B* H B.
  ComplexMatrix compressed_hamiltonian() const;
  /// B* f(H) B for a real spectral function f.
  template <class F>
  ComplexMatrix compressed_function(F&& f) const {
    const std::size_t r = rank();
    ComplexMatrix out(r, r);
    for (std::size_t k = 0; k < dim(); ++k) {
      const double weight = f(hamiltonian_.eigenvalues()[k]);
      if (weight == 0.0) continue;
      for (std::size_t i = 0; i < r; ++i) {
        const Complex left = std::conj(spectral_coords_(k, i)) * weight;
        for (std::size_t j = 0; j < r; ++j) out(i, j) += left * spectral_coords_(k, j);
      }
    }
    return out;
  }
  /// B · block · B*, the full-dimensional operator supported on the range.
  ComplexMatrix embed(const ComplexMatrix& block) const;

 private:
  std::string label_;
  HermitianOperator hamiltonian_;
  OrthogonalProjection projection_;
  ComplexMatrix spectral_coords_;
};

/// V(dt) = P U(dt) P.
ComplexMatrix contraction_step(const ZenoScenario& s, double dt);

/// V_N(t) = (P U(t/N) P)^N.
ComplexMatrix zeno_product(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options = {});

/// Z_N(t) = V_N(t)* V_N(t).
ComplexMatrix qze_product(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options = {});

/// p_N(t) = tr(V_N ρ₀ V_N*) for ρ₀ supported in the range of P.
double survival_probability_state(const ZenoScenario& s, const DensityMatrix& rho0, double t, std::size_t n,
                                  const ProductOptions& options = {});

/// H_Z = P H P.
ComplexMatrix zeno_hamiltonian(const ZenoScenario& s);

/// (√H P)* (√H P); H must be positive.
ComplexMatrix zeno_generator_sqrt(const ZenoScenario& s);

/// H P^H_{(-Λ,Λ)}.
ComplexMatrix truncated_hamiltonian(const ZenoScenario& s, double lambda_cut);

/// P H P^H_{(-Λ,Λ)} P.
ComplexMatrix projected_truncated_mean(const ZenoScenario& s, double lambda_cut);

/// P P^H_{(-Λ,Λ)^c} P.
ComplexMatrix falloff_operator(const ZenoScenario& s, double lambda_cut);

/// S_N(t) = (P/N) Σ_{k<N} (V*)^k V^k with V = V(t/N).
ComplexMatrix ergodic_sum(const ZenoScenario& s, double t, std::size_t n);

/// Norm of (Z_N − P) − Σ_{k<N} (V*)^k (Z_1(t/N) − P) V^k with V = V(t/N);
/// zero in exact arithmetic.
double telescoping_residual(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options = {});

/// Norm of (Z_N − P) − N (V* S_N V − S_N); zero in exact arithmetic.
double ergodic_telescoping_residual(const ZenoScenario& s, double t, std::size_t n);

enum class DerivativeTarget {
  kContraction,  ///< V(s) = P U(s) P
  kQzeStep,      ///< Z_1(s) = V(s)* V(s)
};

/// d/ds at s = 0 by central differences on h ∈ {1e-3, 5e-4, 2.5e-4} with
/// Richardson extrapolation.
ComplexMatrix derivative_at_zero(const ZenoScenario& s, DerivativeTarget which);

struct ZenoLimitResult {
  double t = 0.0;
  ComplexMatrix zeno_hamiltonian;
  ComplexMatrix limit_at_t;
  std::vector<std::pair<std::size_t, double>> per_n_errors;
};

/// ‖V_N(t) − P e^{-itH_Z}‖ over an increasing N grid.
ZenoLimitResult qzd_limit(const ZenoScenario& s, double t, std::span<const std::size_t> n_grid,
                          const ProductOptions& options = {});

/// e^{-itH_Z} on the range of P, as a rank × rank block.
ComplexMatrix compressed_zeno_limit(const ZenoScenario& s, double t);

/// Block power by square-and-multiply, or by repeated multiplication.
ComplexMatrix matrix_power(const ComplexMatrix& base, std::size_t n, bool sequential);

}  // namespace zeno
