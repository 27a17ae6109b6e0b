#include "zeno/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

void require_positive_n(std::size_t n, const char* what) {
  if (n == 0) throw InvalidArgument(std::string(what) + ": N must be ≥ 1");
}

void require_cut(double lambda_cut, const char* what) {
  if (!(lambda_cut > 0.0) || !std::isfinite(lambda_cut)) {
    throw InvalidArgument(std::string(what) + ": Λ must be positive and finite");
  }
}

ComplexMatrix compressed_identity(const ZenoScenario& s) { return ComplexMatrix::identity(s.rank()); }

// v^N in compressed coordinates, with the t = 0 short circuit.
ComplexMatrix compressed_product(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options) {
  require_positive_n(n, "zeno_product");
  if (!std::isfinite(t)) throw InvalidArgument("zeno_product: t must be finite");
  if (t == 0.0) return compressed_identity(s);
  return matrix_power(s.compressed_step(t / static_cast<double>(n)), n, options.force_sequential);
}

}  // namespace

ZenoScenario::ZenoScenario(std::string label, HermitianOperator hamiltonian, OrthogonalProjection projection)
    : label_(std::move(label)),
      hamiltonian_(std::move(hamiltonian)),
      projection_(std::move(projection)),
      spectral_coords_(1, 1) {
  if (label_.empty()) throw InvalidArgument("scenario label must be nonempty");
  if (hamiltonian_.dim() != projection_.dim()) {
    throw DimensionMismatch("Hamiltonian is " + std::to_string(hamiltonian_.dim()) + "-dimensional, projection " +
                            std::to_string(projection_.dim()) + "-dimensional");
  }
  spectral_coords_ = hamiltonian_.eigenvectors().adjoint() * projection_.range_basis();
}

ComplexMatrix ZenoScenario::compressed_step(double dt) const {
  if (dt == 0.0) return ComplexMatrix::identity(rank());
  const std::size_t r = rank();
  ComplexMatrix out(r, r);
  for (std::size_t k = 0; k < dim(); ++k) {
    const Complex phase = std::polar(1.0, -dt * hamiltonian_.eigenvalues()[k]);
    for (std::size_t i = 0; i < r; ++i) {
      const Complex left = std::conj(spectral_coords_(k, i)) * phase;
      for (std::size_t j = 0; j < r; ++j) out(i, j) += left * spectral_coords_(k, j);
    }
  }
  return out;
}

ComplexMatrix ZenoScenario::compressed_hamiltonian() const {
  return compressed_function([](double lambda) { return lambda; }).hermitian_part();
}

ComplexMatrix ZenoScenario::embed(const ComplexMatrix& block) const {
  const ComplexMatrix& basis = projection_.range_basis();
  return basis * block * basis.adjoint();
}

ComplexMatrix matrix_power(const ComplexMatrix& base, std::size_t n, bool sequential) {
  if (!base.is_square()) throw DimensionMismatch("matrix_power requires a square matrix");
  if (n == 0) return ComplexMatrix::identity(base.rows());
  if (sequential) {
    ComplexMatrix acc = base;
    for (std::size_t k = 1; k < n; ++k) acc = acc * base;
    return acc;
  }
  ComplexMatrix result = ComplexMatrix::identity(base.rows());
  ComplexMatrix square = base;
  bool first = true;
  while (n > 0) {
    if (n & 1U) {
      result = first ? square : result * square;
      first = false;
    }
    n >>= 1U;
    if (n > 0) square = square * square;
  }
  return result;
}

ComplexMatrix contraction_step(const ZenoScenario& s, double dt) {
  if (!std::isfinite(dt)) throw InvalidArgument("contraction_step: dt must be finite");
  if (dt == 0.0) return s.projection().matrix();
  return s.embed(s.compressed_step(dt));
}

ComplexMatrix zeno_product(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options) {
  if (t == 0.0) {
    require_positive_n(n, "zeno_product");
    return s.projection().matrix();
  }
  return s.embed(compressed_product(s, t, n, options));
}

ComplexMatrix qze_product(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options) {
  if (t == 0.0) {
    require_positive_n(n, "qze_product");
    return s.projection().matrix();
  }
  const ComplexMatrix v = compressed_product(s, t, n, options);
  return s.embed((v.adjoint() * v).hermitian_part()).hermitian_part();
}

double survival_probability_state(const ZenoScenario& s, const DensityMatrix& rho0, double t, std::size_t n,
                                  const ProductOptions& options) {
  if (rho0.dim() != s.dim()) throw DimensionMismatch("state and scenario differ in dimension");
  const ComplexMatrix& p = s.projection().matrix();
  const ComplexMatrix& rho = rho0.matrix();
  if (max_abs_difference(p * rho * p, rho) > 1e-10) {
    throw UnsupportedState("initial state is not supported in the range of P (ρ₀ ≠ Pρ₀P)");
  }
  if (std::abs((rho * p).trace().real() - 1.0) > 1e-10) {
    throw UnsupportedState("initial state has tr(ρ₀P) ≠ 1");
  }
  // Work in the range coordinates: tr(V ρ V*) = tr(v r v*) with r = B* ρ B.
  const ComplexMatrix& basis = s.projection().range_basis();
  const ComplexMatrix r = basis.adjoint() * rho * basis;
  const ComplexMatrix v = compressed_product(s, t, n, options);
  const double value = (v * r * v.adjoint()).trace().real();
  return std::clamp(value, 0.0, 1.0);
}

ComplexMatrix zeno_hamiltonian(const ZenoScenario& s) {
  return s.embed(s.compressed_hamiltonian()).hermitian_part();
}

ComplexMatrix zeno_generator_sqrt(const ZenoScenario& s) {
  const HermitianOperator root = positive_sqrt(s.hamiltonian());
  const ComplexMatrix factor = root.matrix() * s.projection().matrix();
  return (factor.adjoint() * factor).hermitian_part();
}

ComplexMatrix truncated_hamiltonian(const ZenoScenario& s, double lambda_cut) {
  require_cut(lambda_cut, "truncated_hamiltonian");
  return s.hamiltonian()
      .spectral_function([lambda_cut](double lambda) { return std::abs(lambda) < lambda_cut ? lambda : 0.0; })
      .hermitian_part();
}

ComplexMatrix projected_truncated_mean(const ZenoScenario& s, double lambda_cut) {
  require_cut(lambda_cut, "projected_truncated_mean");
  const ComplexMatrix block =
      s.compressed_function([lambda_cut](double lambda) { return std::abs(lambda) < lambda_cut ? lambda : 0.0; });
  return s.embed(block.hermitian_part()).hermitian_part();
}

ComplexMatrix falloff_operator(const ZenoScenario& s, double lambda_cut) {
  require_cut(lambda_cut, "falloff_operator");
  const ComplexMatrix block =
      s.compressed_function([lambda_cut](double lambda) { return std::abs(lambda) >= lambda_cut ? 1.0 : 0.0; });
  return s.embed(block.hermitian_part()).hermitian_part();
}

ComplexMatrix ergodic_sum(const ZenoScenario& s, double t, std::size_t n) {
  require_positive_n(n, "ergodic_sum");
  if (t == 0.0) return s.projection().matrix();
  const ComplexMatrix v = s.compressed_step(t / static_cast<double>(n));
  ComplexMatrix power = compressed_identity(s);
  ComplexMatrix sum(s.rank(), s.rank());
  for (std::size_t k = 0; k < n; ++k) {
    sum += power.adjoint() * power;
    power = power * v;
  }
  sum *= 1.0 / static_cast<double>(n);
  return s.embed(sum.hermitian_part()).hermitian_part();
}

double telescoping_residual(const ZenoScenario& s, double t, std::size_t n, const ProductOptions& options) {
  require_positive_n(n, "telescoping_residual");
  const ComplexMatrix id = compressed_identity(s);
  const ComplexMatrix vn = compressed_product(s, t, n, options);
  const ComplexMatrix lhs = vn.adjoint() * vn - id;

  const ComplexMatrix v = t == 0.0 ? id : s.compressed_step(t / static_cast<double>(n));
  const ComplexMatrix defect = v.adjoint() * v - id;
  std::vector<ComplexMatrix> powers;
  powers.reserve(n);
  powers.push_back(id);
  for (std::size_t k = 1; k < n; ++k) powers.push_back(powers.back() * v);

  ComplexMatrix rhs(s.rank(), s.rank());
  for (std::size_t k = 0; k < n; ++k) rhs += powers[k].adjoint() * defect * powers[k];
  return operator_norm(lhs - rhs);
}

double ergodic_telescoping_residual(const ZenoScenario& s, double t, std::size_t n) {
  require_positive_n(n, "ergodic_telescoping_residual");
  const ComplexMatrix id = compressed_identity(s);
  const ComplexMatrix v = t == 0.0 ? id : s.compressed_step(t / static_cast<double>(n));
  ComplexMatrix power = id;
  ComplexMatrix sum(s.rank(), s.rank());
  for (std::size_t k = 0; k < n; ++k) {
    sum += power.adjoint() * power;
    power = power * v;
  }
  // power = V^N, sum = N S_N
  const ComplexMatrix lhs = power.adjoint() * power - id;
  const ComplexMatrix rhs = v.adjoint() * sum * v - sum;
  return operator_norm(lhs - rhs);
}

ComplexMatrix derivative_at_zero(const ZenoScenario& s, DerivativeTarget which) {
  auto value = [&](double h) {
    const ComplexMatrix v = s.compressed_step(h);
    return which == DerivativeTarget::kContraction ? v : v.adjoint() * v;
  };
  auto central = [&](double h) {
    ComplexMatrix d = value(h) - value(-h);
    d *= 1.0 / (2.0 * h);
    return d;
  };
  constexpr std::array<double, 3> kSteps{1e-3, 5e-4, 2.5e-4};
  // Richardson table for an even error expansion in h with halving steps.
  std::array<ComplexMatrix, 3> level0{central(kSteps[0]), central(kSteps[1]), central(kSteps[2])};
  auto extrapolate = [](const ComplexMatrix& coarse, const ComplexMatrix& fine, double factor) {
    ComplexMatrix out = fine - coarse;
    out *= 1.0 / (factor - 1.0);
    return fine + out;
  };
  const ComplexMatrix r10 = extrapolate(level0[0], level0[1], 4.0);
  const ComplexMatrix r11 = extrapolate(level0[1], level0[2], 4.0);
  const ComplexMatrix r2 = extrapolate(r10, r11, 16.0);
  return s.embed(r2);
}

ComplexMatrix compressed_zeno_limit(const ZenoScenario& s, double t) {
  if (t == 0.0) return compressed_identity(s);
  const HermitianOperator hz = hermitian_eigendecompose(s.compressed_hamiltonian());
  return unitary_at(hz, t);
}

ZenoLimitResult qzd_limit(const ZenoScenario& s, double t, std::span<const std::size_t> n_grid,
                          const ProductOptions& options) {
  if (n_grid.empty()) throw InvalidArgument("qzd_limit: N grid must be nonempty");
  for (std::size_t k = 0; k < n_grid.size(); ++k) {
    require_positive_n(n_grid[k], "qzd_limit");
    if (k > 0 && n_grid[k] <= n_grid[k - 1]) throw InvalidArgument("qzd_limit: N grid must be strictly increasing");
  }
  ZenoLimitResult result{t, zeno_hamiltonian(s), ComplexMatrix(1, 1), {}};
  const ComplexMatrix limit = compressed_zeno_limit(s, t);
  result.limit_at_t = s.embed(limit);
  result.per_n_errors.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    const double error = t == 0.0 ? 0.0 : operator_norm(compressed_product(s, t, n, options) - limit);
    result.per_n_errors.emplace_back(n, error);
  }
  return result;
}

}  // namespace zeno
