#include <doctest.h>

#include <cmath>
#include <vector>

#include "zeno/engine.hpp"
#include "zeno/errors.hpp"
#include "zeno/random.hpp"

using namespace zeno;

namespace {

ComplexMatrix diag(std::initializer_list<double> values) {
  const std::vector<double> v(values);
  return ComplexMatrix::diagonal(v);
}

ZenoScenario make(const ComplexMatrix& h, const ComplexMatrix& p, const char* label = "s") {
  return ZenoScenario(label, hermitian_eigendecompose(h), OrthogonalProjection::from_matrix(p));
}

ZenoScenario sigma_x() { return make(ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}), diag({1.0, 0.0}), "sigma_x"); }
ZenoScenario sigma_z() { return make(diag({1.0, -1.0}), diag({1.0, 0.0}), "sigma_z"); }

ZenoScenario random_scenario(std::uint64_t seed, double norm = 2.0) {
  const std::size_t dim = 2 + seed % 15;
  const std::size_t rank = 1 + seed % std::min<std::size_t>(4, dim - 1);
  return ZenoScenario("random", random_hermitian(dim, norm, seed), random_projection(dim, rank, seed + 7777));
}

// Full-dimensional (P U(t/N) P)^N by sequential multiplication, independent of
// the compressed coordinates.
ComplexMatrix brute_product(const ZenoScenario& s, double t, std::size_t n) {
  const ComplexMatrix& p = s.projection().matrix();
  const ComplexMatrix step = p * unitary_at(s.hamiltonian(), t / static_cast<double>(n)) * p;
  ComplexMatrix acc = p;
  for (std::size_t k = 0; k < n; ++k) acc = acc * step;
  return acc;
}

ComplexMatrix scaled(const ComplexMatrix& m, Complex c) {
  ComplexMatrix out = m;
  out *= c;
  return out;
}

}  // namespace

TEST_CASE("scenario construction") {
  CHECK_THROWS_AS(make(diag({1.0, 2.0, 3.0}), diag({1.0, 0.0})), DimensionMismatch);
  CHECK_THROWS_AS(ZenoScenario("", hermitian_eigendecompose(diag({1.0})), OrthogonalProjection::from_matrix(diag({1.0}))),
                  InvalidArgument);
}

TEST_CASE("contraction step") {
  const ZenoScenario z = sigma_z();
  const ComplexMatrix p = z.projection().matrix();
  CHECK(max_abs_difference(contraction_step(z, 0.4), scaled(p, std::polar(1.0, -0.4))) <= 1e-15);
  CHECK(max_abs_difference(contraction_step(sigma_x(), 0.4), scaled(p, std::cos(0.4))) <= 1e-15);
  CHECK(contraction_step(sigma_x(), 0.0) == p);
}

TEST_CASE("zeno product closed forms") {
  const ZenoScenario x = sigma_x();
  const ComplexMatrix p = x.projection().matrix();
  CHECK(max_abs_difference(zeno_product(sigma_z(), 1.0, 7), scaled(p, std::polar(1.0, -1.0))) <= 1e-14);
  const ComplexMatrix v10 = zeno_product(x, 1.0, 10);
  CHECK(v10(0, 0).real() == doctest::Approx(0.95114995).epsilon(1e-8));
  CHECK(max_abs_difference(v10, scaled(p, std::pow(std::cos(0.1), 10))) <= 1e-14);
  CHECK(zeno_product(x, 0.0, 5) == p);
  CHECK_THROWS_AS(zeno_product(x, 1.0, 0), InvalidArgument);
}

TEST_CASE("QZE product") {
  const ZenoScenario x = sigma_x();
  const ComplexMatrix p = x.projection().matrix();
  const ComplexMatrix z10 = qze_product(x, 1.0, 10);
  CHECK(z10(0, 0).real() == doctest::Approx(0.90468622).epsilon(1e-8));
  CHECK(max_abs_difference(z10, scaled(p, std::pow(std::cos(0.1), 20))) <= 1e-14);
  CHECK(max_abs_difference(qze_product(sigma_z(), 2.3, 9), p) <= 1e-14);
  CHECK(qze_product(x, 0.0, 3) == p);
}

TEST_CASE("survival probability of a state") {
  const ZenoScenario x = sigma_x();
  const DensityMatrix rho = DensityMatrix::from_matrix(x.projection().matrix());
  CHECK(survival_probability_state(x, rho, 1.0, 10) == doctest::Approx(std::pow(std::cos(0.1), 20)).epsilon(1e-12));
  CHECK(survival_probability_state(sigma_z(), rho, 1.7, 4) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(survival_probability_state(x, rho, 0.0, 4) == 1.0);
  const DensityMatrix outside = DensityMatrix::from_matrix(diag({0.0, 1.0}));
  CHECK_THROWS_AS(survival_probability_state(x, outside, 1.0, 3), UnsupportedState);
  const DensityMatrix mixed = DensityMatrix::from_matrix(diag({0.5, 0.5}));
  CHECK_THROWS_AS(survival_probability_state(x, mixed, 1.0, 3), UnsupportedState);
}

TEST_CASE("Zeno Hamiltonian and generator") {
  CHECK(zeno_hamiltonian(sigma_x()).max_abs() == 0.0);
  CHECK(max_abs_difference(zeno_hamiltonian(sigma_z()), diag({1.0, 0.0})) <= 1e-15);
  const ZenoScenario a = make(ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 3.0}}), diag({1.0, 0.0}));
  CHECK(max_abs_difference(zeno_hamiltonian(a), diag({2.0, 0.0})) <= 1e-14);

  CHECK(max_abs_difference(zeno_generator_sqrt(make(ComplexMatrix::identity(2), diag({0.0, 1.0}))), diag({0.0, 1.0})) <=
        1e-14);
  CHECK(max_abs_difference(zeno_generator_sqrt(make(diag({4.0, 1.0}), diag({1.0, 0.0}))), diag({4.0, 0.0})) <= 1e-14);
  CHECK(max_abs_difference(
            zeno_generator_sqrt(make(ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}}), diag({1.0, 0.0}))),
            diag({2.0, 0.0})) <= 1e-9);
  CHECK_THROWS_AS(zeno_generator_sqrt(sigma_x()), NotPositive);
}

TEST_CASE("truncated operators") {
  const ZenoScenario d = make(diag({1.0, -5.0}), diag({1.0, 0.0}));
  CHECK(max_abs_difference(truncated_hamiltonian(d, 2.0), diag({1.0, 0.0})) <= 1e-15);
  CHECK(truncated_hamiltonian(sigma_x(), 0.5).max_abs() <= 1e-15);
  CHECK(max_abs_difference(truncated_hamiltonian(d, 6.0), d.hamiltonian().matrix()) <= 1e-14);

  CHECK(projected_truncated_mean(sigma_x(), 10.0).max_abs() <= 1e-15);
  CHECK(projected_truncated_mean(sigma_x(), 0.5).max_abs() <= 1e-15);
  CHECK(projected_truncated_mean(make(diag({3.0, 1.0}), diag({1.0, 0.0})), 2.0).max_abs() <= 1e-15);

  CHECK(falloff_operator(sigma_x(), 1.5).max_abs() <= 1e-15);
  CHECK(max_abs_difference(falloff_operator(make(diag({3.0, 1.0}), ComplexMatrix::identity(2)), 2.0),
                           diag({1.0, 0.0})) <= 1e-15);
  CHECK(max_abs_difference(falloff_operator(sigma_x(), 0.5), diag({1.0, 0.0})) <= 1e-14);
  CHECK_THROWS_AS(falloff_operator(sigma_x(), 0.0), InvalidArgument);
}

TEST_CASE("ergodic sum") {
  const ComplexMatrix p = sigma_z().projection().matrix();
  CHECK(max_abs_difference(ergodic_sum(sigma_z(), 1.3, 6), p) <= 1e-14);
  double expected = 0.0;
  for (int k = 0; k < 4; ++k) expected += std::pow(std::cos(0.25), 2 * k);
  expected /= 4.0;
  CHECK(max_abs_difference(ergodic_sum(sigma_x(), 1.0, 4), scaled(p, expected)) <= 1e-14);
  CHECK(ergodic_sum(sigma_x(), 0.0, 4) == p);
}

TEST_CASE("telescoping residual") {
  CHECK(telescoping_residual(sigma_x(), 1.0, 8) <= 1e-9);
  CHECK(telescoping_residual(sigma_z(), 0.9, 5) <= 1e-12);
  const ZenoScenario r("r", random_hermitian(4, 2.0, 11), random_projection(4, 2, 12));
  CHECK(telescoping_residual(r, 0.7, 16) <= 1e-8);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    CHECK(telescoping_residual(random_scenario(seed), 1.3, 64) <= 1e-8);
    CHECK(ergodic_telescoping_residual(random_scenario(seed), 1.3, 64) <= 1e-8);
  }
}

TEST_CASE("derivative at zero") {
  CHECK(operator_norm(derivative_at_zero(sigma_x(), DerivativeTarget::kQzeStep)) <= 1e-6);
  const ComplexMatrix vz = derivative_at_zero(sigma_z(), DerivativeTarget::kContraction);
  CHECK(max_abs_difference(vz, scaled(diag({1.0, 0.0}), Complex(0.0, -1.0))) <= 1e-6);
  const ZenoScenario a = make(ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 3.0}}), diag({1.0, 0.0}));
  CHECK(max_abs_difference(derivative_at_zero(a, DerivativeTarget::kContraction), scaled(diag({2.0, 0.0}), Complex(0.0, -1.0))) <= 1e-6);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ZenoScenario s = random_scenario(seed, 10.0);
    CHECK(operator_norm(derivative_at_zero(s, DerivativeTarget::kQzeStep)) <= 1e-6);
    const ComplexMatrix expected = scaled(zeno_hamiltonian(s), Complex(0.0, -1.0));
    CHECK(operator_norm(derivative_at_zero(s, DerivativeTarget::kContraction) - expected) <= 1e-6);
  }
}

TEST_CASE("QZD limit") {
  const std::vector<std::size_t> grid{100};
  const ZenoLimitResult rx = qzd_limit(sigma_x(), 1.0, grid);
  CHECK(rx.per_n_errors[0].second == doctest::Approx(1.0 - std::pow(std::cos(0.01), 100)).epsilon(1e-9));
  CHECK(rx.per_n_errors[0].second == doctest::Approx(4.98760373e-3).epsilon(1e-8));

  const std::vector<std::size_t> many{1, 3, 64, 1000};
  for (const auto& [n, err] : qzd_limit(sigma_z(), 1.0, many).per_n_errors) CHECK(err <= 1e-12);

  const std::vector<std::size_t> doubling{256, 512, 1024, 2048};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ZenoScenario s("r", random_hermitian(6, 2.0, seed), random_projection(6, 2, seed + 50));
    const ZenoLimitResult r = qzd_limit(s, 1.0, doubling);
    for (std::size_t k = 1; k < doubling.size(); ++k) {
      const double ratio = r.per_n_errors[k].second / r.per_n_errors[k - 1].second;
      CAPTURE(seed);
      CHECK(ratio >= 0.4);
      CHECK(ratio <= 0.6);
    }
  }
  const std::vector<std::size_t> bad{4, 4};
  CHECK_THROWS_AS(qzd_limit(sigma_x(), 1.0, bad), InvalidArgument);
  CHECK_THROWS_AS(qzd_limit(sigma_x(), 1.0, std::vector<std::size_t>{}), InvalidArgument);
}

TEST_CASE("compressed products agree with brute force") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const ZenoScenario s = random_scenario(seed);
    for (std::size_t n : {1UL, 5UL, 16UL, 33UL}) {
      CHECK(operator_norm(zeno_product(s, 1.7, n) - brute_product(s, 1.7, n)) <= 1e-10);
    }
  }
}

TEST_CASE("square-and-multiply agrees with sequential products") {
  ProductOptions sequential;
  sequential.force_sequential = true;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const ZenoScenario s = random_scenario(seed);
    for (std::size_t n : {7UL, 64UL, 1000UL}) {
      CHECK(operator_norm(zeno_product(s, 2.0, n) - zeno_product(s, 2.0, n, sequential)) <= 1e-9);
    }
  }
}

TEST_CASE("engine properties on random scenarios") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const ZenoScenario s = random_scenario(seed);
    const ComplexMatrix& p = s.projection().matrix();
    const ComplexMatrix zero(s.dim(), s.dim());
    CAPTURE(seed);
    for (double t : {0.0, 0.5, 2.0, 5.0}) {
      for (std::size_t n = 1; n <= 1024; n *= 4) {
        const ComplexMatrix v = zeno_product(s, t, n);
        const ComplexMatrix z = qze_product(s, t, n);
        const ComplexMatrix e = ergodic_sum(s, t, n);
        CHECK(operator_norm(v) <= 1.0 + 1e-9);
        CHECK(psd_order_holds(zero, z, 1e-9));
        CHECK(psd_order_holds(z, e, 1e-9));
        CHECK(psd_order_holds(e, p, 1e-9));
        const ComplexMatrix limit = s.embed(compressed_zeno_limit(s, t));
        CHECK(operator_norm(z - p) <= 2.0 * operator_norm(v - limit) + 1e-9);
      }
    }
    // Cyclic trace: tr(V ρ V*) = tr(Z ρ) for a state supported in the range.
    const ComplexMatrix& b = s.projection().range_basis();
    ComplexMatrix column(s.dim(), 1);
    for (std::size_t i = 0; i < s.dim(); ++i) column(i, 0) = b(i, 0);
    const DensityMatrix rho = DensityMatrix::pure(column);
    const double direct = survival_probability_state(s, rho, 1.1, 37);
    const double via_z = (qze_product(s, 1.1, 37) * rho.matrix()).trace().real();
    CHECK(std::abs(direct - via_z) <= 1e-10);
  }
}

TEST_CASE("generator identity on PSD Hamiltonians") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t dim = 2 + seed % 12;
    const ZenoScenario s("psd", random_psd(dim, 3.0, seed), random_projection(dim, 1 + seed % 3, seed + 99));
    CHECK(operator_norm(zeno_generator_sqrt(s) - zeno_hamiltonian(s)) <= 1e-9);
  }
}
