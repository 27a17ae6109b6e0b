#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zeno/errors.hpp"
#include "zeno/linalg.hpp"
#include "zeno/random.hpp"

using namespace zeno;

namespace {

ComplexMatrix sigma_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }

ComplexMatrix diag(std::initializer_list<double> values) {
  const std::vector<double> v(values);
  return ComplexMatrix::diagonal(v);
}

ComplexMatrix reconstruct(const HermitianOperator& h) {
  return h.spectral_function([](double x) { return x; });
}

}  // namespace

TEST_CASE("matrix construction rejects bad input") {
  CHECK_THROWS_AS(ComplexMatrix(0, 2), InvalidArgument);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {Complex(NAN, 0.0)}), InvalidArgument);
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0}), DimensionMismatch);
}

TEST_CASE("eigendecomposition examples") {
  SUBCASE("identity") {
    const HermitianOperator h = hermitian_eigendecompose(ComplexMatrix::identity(2));
    CHECK(h.eigenvalues() == std::vector<double>{1.0, 1.0});
    CHECK(max_abs_difference(h.eigenvectors(), ComplexMatrix::identity(2)) == 0.0);
  }
  SUBCASE("sigma_x") {
    const HermitianOperator h = hermitian_eigendecompose(sigma_x());
    CHECK(h.eigenvalues()[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(h.eigenvalues()[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("diagonal input gives a permutation") {
    const HermitianOperator h = hermitian_eigendecompose(diag({3.0, -2.0, 0.0}));
    CHECK(h.eigenvalues() == std::vector<double>{-2.0, 0.0, 3.0});
    const ComplexMatrix& q = h.eigenvectors();
    CHECK(q(1, 0) == Complex(1.0));
    CHECK(q(2, 1) == Complex(1.0));
    CHECK(q(0, 2) == Complex(1.0));
  }
  SUBCASE("non-Hermitian input") {
    CHECK_THROWS_AS(hermitian_eigendecompose(ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}})), NotHermitian);
  }
  SUBCASE("non-square input") { CHECK_THROWS_AS(hermitian_eigendecompose(ComplexMatrix(2, 3)), DimensionMismatch); }
  SUBCASE("sweep budget exhausted") {
    EigenOptions options;
    options.max_sweeps = 0;
    CHECK_THROWS_AS(hermitian_eigendecompose(sigma_x(), options), NoConvergence);
  }
}

TEST_CASE("eigendecomposition invariants on random Hermitian matrices") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t dim = 1 + seed % 16;
    const HermitianOperator h = random_hermitian(dim, 10.0, seed);
    CAPTURE(seed);
    for (std::size_t k = 1; k < dim; ++k) CHECK(h.eigenvalues()[k - 1] <= h.eigenvalues()[k]);
    CHECK(operator_norm(reconstruct(h) - h.matrix()) <= 1e-10 * (1.0 + h.spectral_radius()));
    const ComplexMatrix& q = h.eigenvectors();
    CHECK(max_abs_difference(q.adjoint() * q, ComplexMatrix::identity(dim)) <= 1e-10);
    // Phase convention: the largest component of every eigenvector is real positive.
    for (std::size_t col = 0; col < dim; ++col) {
      std::size_t lead = 0;
      for (std::size_t i = 0; i < dim; ++i) {
        if (std::abs(q(i, col)) > std::abs(q(lead, col))) lead = i;
      }
      CHECK(q(lead, col).imag() == 0.0);
      CHECK(q(lead, col).real() > 0.0);
    }
  }
}

TEST_CASE("eigendecomposition is bitwise deterministic") {
  const HermitianOperator a = hermitian_eigendecompose(random_hermitian(9, 3.0, 42).matrix());
  const HermitianOperator b = hermitian_eigendecompose(random_hermitian(9, 3.0, 42).matrix());
  CHECK(a.eigenvalues() == b.eigenvalues());
  CHECK(a.eigenvectors() == b.eigenvectors());
}

TEST_CASE("degenerate spectrum is handled") {
  // A rank-one perturbation of the identity has a 3-fold eigenvalue 1.
  ComplexMatrix m = ComplexMatrix::identity(4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) m(i, j) += 0.25;
  }
  const HermitianOperator h = hermitian_eigendecompose(m);
  CHECK(h.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(h.eigenvalues()[2] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(h.eigenvalues()[3] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(operator_norm(reconstruct(h) - m) <= 1e-12);
}

TEST_CASE("unitary propagator") {
  const HermitianOperator sx = hermitian_eigendecompose(sigma_x());
  CHECK(unitary_at(sx, 0.0) == ComplexMatrix::identity(2));
  const ComplexMatrix u = unitary_at(sx, std::numbers::pi / 2);
  ComplexMatrix expected = sigma_x();
  expected *= Complex(0.0, -1.0);
  CHECK(max_abs_difference(u, expected) <= 1e-14);

  const HermitianOperator d = hermitian_eigendecompose(diag({1.0, -1.0}));
  const ComplexMatrix ud = unitary_at(d, 0.3);
  CHECK(std::abs(ud(0, 0) - std::polar(1.0, -0.3)) <= 1e-15);
  CHECK(std::abs(ud(1, 1) - std::polar(1.0, 0.3)) <= 1e-15);
  CHECK_THROWS_AS(unitary_at(d, INFINITY), InvalidArgument);
}

TEST_CASE("unitary group law and unitarity") {
  SeededRandom rng(7);
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const HermitianOperator h = random_hermitian(1 + seed % 16, 10.0, seed);
    const double s = rng.uniform(-5.0, 5.0);
    const double t = rng.uniform(-5.0, 5.0);
    const ComplexMatrix us = unitary_at(h, s);
    CHECK(max_abs_difference(us.adjoint() * us, ComplexMatrix::identity(h.dim())) <= 1e-10);
    CHECK(operator_norm(us * unitary_at(h, t) - unitary_at(h, s + t)) <= 1e-9);
  }
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(ComplexMatrix::identity(3)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(operator_norm(ComplexMatrix::from_rows({{0.0, 2.0}, {0.0, 0.0}})) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(operator_norm(sigma_x()) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::uint64_t seed = 200; seed < 210; ++seed) {
    const HermitianOperator a = random_hermitian(6, 3.0, seed);
    const HermitianOperator b = random_hermitian(6, 5.0, seed + 1000);
    CHECK(operator_norm(a.matrix() * b.matrix()) <= operator_norm(a.matrix()) * operator_norm(b.matrix()) + 1e-9);
    CHECK(operator_norm(a.matrix()) == doctest::Approx(a.spectral_radius()).epsilon(1e-10));
  }
}

TEST_CASE("PSD order") {
  const OrthogonalProjection p = OrthogonalProjection::from_matrix(diag({1.0, 0.0}));
  const ComplexMatrix zero(2, 2);
  CHECK(psd_order_holds(zero, p.matrix(), 1e-10));
  CHECK_FALSE(psd_order_holds(p.matrix(), zero, 1e-10));
  CHECK_THROWS_AS(psd_order_holds(zero, ComplexMatrix(3, 3), 1e-10), DimensionMismatch);
}

TEST_CASE("positive square root") {
  CHECK(max_abs_difference(positive_sqrt(hermitian_eigendecompose(ComplexMatrix::identity(3))).matrix(),
                           ComplexMatrix::identity(3)) <= 1e-15);
  CHECK(max_abs_difference(positive_sqrt(hermitian_eigendecompose(diag({4.0, 9.0}))).matrix(), diag({2.0, 3.0})) <=
        1e-15);
  const HermitianOperator root =
      positive_sqrt(hermitian_eigendecompose(ComplexMatrix::from_rows({{2.0, 1.0}, {1.0, 2.0}})));
  CHECK(root.eigenvalues()[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(root.eigenvalues()[1] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(positive_sqrt(hermitian_eigendecompose(diag({1.0, -1e-6}))), NotPositive);
  // Tiny negative eigenvalues are clamped.
  CHECK(positive_sqrt(hermitian_eigendecompose(diag({1.0, -1e-12}))).eigenvalues()[0] == 0.0);

  for (std::uint64_t seed = 300; seed < 310; ++seed) {
    const HermitianOperator a = random_psd(8, 4.0, seed);
    const ComplexMatrix r = positive_sqrt(a).matrix();
    CHECK(operator_norm(r * r - a.matrix()) <= 1e-8);
    const ComplexMatrix square = (a.matrix() * a.matrix()).hermitian_part();
    CHECK(operator_norm(positive_sqrt(hermitian_eigendecompose(square)).matrix() - a.matrix()) <= 1e-8);
  }
}

TEST_CASE("orthogonal projections") {
  const OrthogonalProjection p = OrthogonalProjection::from_matrix(diag({1.0, 0.0, 1.0}));
  CHECK(p.rank() == 2);
  CHECK_THROWS_AS(OrthogonalProjection::from_matrix(ComplexMatrix(2, 2)), InvalidProjection);
  CHECK_THROWS_AS(OrthogonalProjection::from_matrix(diag({0.5, 0.5})), InvalidProjection);
  CHECK_THROWS_AS(OrthogonalProjection::from_matrix(ComplexMatrix::from_rows({{1.0, 1.0}, {0.0, 0.0}})),
                  InvalidProjection);
  for (std::uint64_t seed = 400; seed < 410; ++seed) {
    const std::size_t dim = 2 + seed % 10;
    const std::size_t rank = 1 + seed % dim;
    const OrthogonalProjection q = random_projection(dim, rank, seed);
    CHECK(q.rank() == rank);
    const ComplexMatrix& b = q.range_basis();
    CHECK(max_abs_difference(b.adjoint() * b, ComplexMatrix::identity(rank)) <= 1e-10);
    CHECK(max_abs_difference(b * b.adjoint(), q.matrix()) <= 1e-10);
    CHECK(max_abs_difference(q.matrix() * q.matrix(), q.matrix()) <= 1e-10);
  }
}

TEST_CASE("density matrices") {
  CHECK_NOTHROW(DensityMatrix::from_matrix(diag({0.25, 0.75})));
  CHECK_THROWS_AS(DensityMatrix::from_matrix(diag({0.5, 0.6})), InvalidState);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(diag({1.5, -0.5})), InvalidState);
  const DensityMatrix pure = DensityMatrix::pure(ComplexMatrix(2, 1, {3.0, Complex(0.0, 4.0)}));
  CHECK(pure.matrix()(0, 0).real() == doctest::Approx(0.36));
}
