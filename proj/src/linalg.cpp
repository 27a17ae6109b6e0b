#include "zeno/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (!m.is_square()) {
    throw DimensionMismatch(std::string(what) + " requires a square matrix, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

double asymmetry(const ComplexMatrix& m) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = i; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
    }
  }
  return worst;
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Annihilates a(p,q) with the unitary G = diag(1, e^{-iφ}) · R(θ), where
// a(p,q) = |a(p,q)| e^{iφ} and R is the real Jacobi rotation for the
// phase-aligned 2×2 block. Updates a ← G* a G and v ← v G.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double magnitude = std::abs(apq);
  if (magnitude == 0.0) return;
  const Complex phase = apq / magnitude;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * magnitude);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  const Complex gpp = c;
  const Complex gpq = s;
  const Complex gqp = -s * std::conj(phase);
  const Complex gqq = c * std::conj(phase);

  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * gpp + akq * gqp;
    a(k, q) = akp * gpq + akq * gqq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
    a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * magnitude;
  a(q, q) = aqq + t * magnitude;

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * gpp + vkq * gqp;
    v(k, q) = vkp * gpq + vkq * gqq;
  }
}

}  // namespace

double HermitianOperator::spectral_radius() const noexcept {
  return std::max(std::abs(eigenvalues_.front()), std::abs(eigenvalues_.back()));
}

ComplexMatrix HermitianOperator::assemble(const std::vector<Complex>& values) const {
  const std::size_t n = dim();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    if (values[k] == Complex{}) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Complex left = eigenvectors_(i, k) * values[k];
      if (left == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += left * std::conj(eigenvectors_(j, k));
    }
  }
  return out;
}

HermitianOperator hermitian_eigendecompose(const ComplexMatrix& m, const EigenOptions& options) {
  require_square(m, "eigendecomposition");
  if (!m.all_finite()) throw InvalidArgument("eigendecomposition of a non-finite matrix");
  const double scale = m.max_abs();
  const double skew = asymmetry(m);
  if (skew > options.symmetry_tol * (1.0 + scale)) {
    throw NotHermitian("matrix is not Hermitian: ‖m − m*‖_max = " + std::to_string(skew));
  }

  const std::size_t n = m.rows();
  ComplexMatrix a = m.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double target = options.offdiag_tol * a.frobenius();

  bool converged = false;
  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= target) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
  }
  if (!converged) {
    throw NoConvergence("Jacobi eigensolver did not converge within " +
                        std::to_string(options.max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  std::vector<double> eigenvalues(n);
  ComplexMatrix vectors(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    eigenvalues[col] = a(src, src).real();
    std::size_t lead = 0;
    double lead_abs = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mag = std::abs(v(i, src));
      if (mag > lead_abs) {
        lead_abs = mag;
        lead = i;
      }
    }
    const Complex fix = std::conj(v(lead, src)) / lead_abs;
    for (std::size_t i = 0; i < n; ++i) vectors(i, col) = v(i, src) * fix;
    vectors(lead, col) = lead_abs;
  }
  return HermitianOperator(m.hermitian_part(), std::move(eigenvalues), std::move(vectors));
}

ComplexMatrix unitary_at(const HermitianOperator& h, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("unitary_at: time must be finite");
  if (t == 0.0) return ComplexMatrix::identity(h.dim());
  return h.spectral_function([t](double lambda) { return std::polar(1.0, -t * lambda); });
}

double operator_norm(const ComplexMatrix& m) {
  const HermitianOperator gram = hermitian_eigendecompose(m.adjoint() * m);
  return std::sqrt(std::max(0.0, gram.eigenvalues().back()));
}

double min_eigenvalue(const ComplexMatrix& hermitian) {
  return hermitian_eigendecompose(hermitian).min_eigenvalue();
}

bool psd_order_holds(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  require_square(a, "psd_order_holds");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch("psd_order_holds: operands differ in dimension");
  }
  return min_eigenvalue(b - a) >= -tol;
}

HermitianOperator positive_sqrt(const HermitianOperator& h) {
  constexpr double kClamp = 1e-10;
  if (h.min_eigenvalue() < -kClamp) {
    throw NotPositive("positive_sqrt: minimum eigenvalue " + std::to_string(h.min_eigenvalue()));
  }
  std::vector<double> roots;
  roots.reserve(h.dim());
  for (double lambda : h.eigenvalues()) roots.push_back(std::sqrt(std::max(0.0, lambda)));
  ComplexMatrix root_matrix = h.spectral_function([](double lambda) { return std::sqrt(std::max(0.0, lambda)); });
  return HermitianOperator(root_matrix.hermitian_part(), std::move(roots), h.eigenvectors());
}

OrthogonalProjection OrthogonalProjection::from_matrix(const ComplexMatrix& p) {
  require_square(p, "projection");
  if (!p.all_finite()) throw InvalidProjection("projection has non-finite entries");
  if (asymmetry(p) > 1e-12) throw InvalidProjection("projection is not self-adjoint");
  const ComplexMatrix hp = p.hermitian_part();
  if (max_abs_difference(hp * hp, hp) > 1e-10) throw InvalidProjection("projection is not idempotent");

  const double trace = hp.trace().real();
  const auto rank = static_cast<long long>(std::llround(trace));
  if (rank < 1) throw InvalidProjection("projection must have rank ≥ 1");

  const HermitianOperator eig = hermitian_eigendecompose(hp);
  const std::size_t n = hp.rows();
  const auto ones = static_cast<std::size_t>(
      std::count_if(eig.eigenvalues().begin(), eig.eigenvalues().end(), [](double x) { return x > 0.5; }));
  if (ones != static_cast<std::size_t>(rank)) {
    throw InvalidProjection("projection rank from trace (" + std::to_string(rank) +
                            ") disagrees with its spectrum (" + std::to_string(ones) + ")");
  }
  ComplexMatrix basis(n, ones);
  for (std::size_t col = 0; col < ones; ++col) {
    for (std::size_t i = 0; i < n; ++i) basis(i, col) = eig.eigenvectors()(i, n - ones + col);
  }
  return OrthogonalProjection(hp, std::move(basis));
}

OrthogonalProjection OrthogonalProjection::onto_span(const ComplexMatrix& columns) {
  const std::size_t n = columns.rows();
  const std::size_t k = columns.cols();
  if (k > n) throw InvalidProjection("more spanning vectors than the dimension");
  ComplexMatrix q = columns;
  // Modified Gram–Schmidt, applied twice for orthogonality to working precision.
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < j; ++i) {
        Complex dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += std::conj(q(r, i)) * q(r, j);
        for (std::size_t r = 0; r < n; ++r) q(r, j) -= dot * q(r, i);
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < n; ++r) norm += std::norm(q(r, j));
      norm = std::sqrt(norm);
      if (norm < 1e-10) throw InvalidProjection("spanning vectors are linearly dependent");
      for (std::size_t r = 0; r < n; ++r) q(r, j) /= norm;
    }
  }
  return from_matrix((q * q.adjoint()).hermitian_part());
}

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& rho) {
  require_square(rho, "density matrix");
  if (asymmetry(rho) > 1e-12 * (1.0 + rho.max_abs())) throw InvalidState("density matrix is not Hermitian");
  const ComplexMatrix h = rho.hermitian_part();
  if (std::abs(h.trace().real() - 1.0) > 1e-12) throw InvalidState("density matrix trace differs from 1");
  if (min_eigenvalue(h) < -1e-10) throw InvalidState("density matrix is not positive");
  return DensityMatrix(h);
}

DensityMatrix DensityMatrix::pure(const ComplexMatrix& state) {
  if (state.cols() != 1) throw DimensionMismatch("pure state must be a column vector");
  double norm2 = 0.0;
  for (const Complex& z : state.entries()) norm2 += std::norm(z);
  if (norm2 == 0.0) throw InvalidState("pure state must be nonzero");
  ComplexMatrix rho = state * state.adjoint();
  rho *= 1.0 / norm2;
  return from_matrix(rho.hermitian_part());
}

}  // namespace zeno
