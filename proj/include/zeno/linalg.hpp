#pragma once

#include <cstddef>
#include <vector>

#include "zeno/matrix.hpp"

namespace zeno {

struct EigenOptions {
  /// Accepted asymmetry: ‖m − m*‖_max ≤ symmetry_tol · (1 + ‖m‖_max).
  double symmetry_tol = 1e-12;
  /// Sweeps stop once the off-diagonal Frobenius norm is ≤ offdiag_tol · ‖m‖_F.
  double offdiag_tol = 1e-12;
  int max_sweeps = 100;
};

/// Hermitian matrix together with its eigendecomposition m = Q Λ Q*.
///
/// Eigenvalues are ascending (stable order for ties) and each eigenvector is
/// phase-fixed so its largest-magnitude component is real and positive, which
/// makes the decomposition bitwise reproducible for identical input.
class HermitianOperator {
 public:
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const noexcept { return eigenvectors_; }
  std::size_t dim() const noexcept { return eigenvalues_.size(); }
  double spectral_radius() const noexcept;
  double min_eigenvalue() const noexcept { return eigenvalues_.front(); }

  /// Q · diag(f(λ_k)) · Q*.
  template <class F>
  ComplexMatrix spectral_function(F&& f) const {
    std::vector<Complex> values;
    values.reserve(dim());
    for (double lambda : eigenvalues_) values.push_back(Complex(f(lambda)));
    return assemble(values);
  }

 private:
  friend HermitianOperator hermitian_eigendecompose(const ComplexMatrix&, const EigenOptions&);
  friend HermitianOperator positive_sqrt(const HermitianOperator&);

  HermitianOperator(ComplexMatrix matrix, std::vector<double> eigenvalues, ComplexMatrix eigenvectors)
      : matrix_(std::move(matrix)),
        eigenvalues_(std::move(eigenvalues)),
        eigenvectors_(std::move(eigenvectors)) {}

  ComplexMatrix assemble(const std::vector<Complex>& values) const;

  ComplexMatrix matrix_;
  std::vector<double> eigenvalues_;
  ComplexMatrix eigenvectors_;
};

/// Cyclic complex Jacobi eigensolver.
///
/// Throws NotHermitian when the symmetry tolerance is violated and
/// NoConvergence when the sweep budget runs out.
HermitianOperator hermitian_eigendecompose(const ComplexMatrix& m, const EigenOptions& options = {});

/// e^{-itH} = Q diag(e^{-itλ}) Q*.
ComplexMatrix unitary_at(const HermitianOperator& h, double t);

/// Largest singular value, sqrt(λ_max(m* m)).
double operator_norm(const ComplexMatrix& m);

/// True iff λ_min(b − a) ≥ −tol, i.e. a ≤ b in the Loewner order.
bool psd_order_holds(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const ComplexMatrix& hermitian);

/// Q diag(√λ) Q*; eigenvalues in [−1e-10, 0) are clamped to zero.
HermitianOperator positive_sqrt(const HermitianOperator& h);

/// Finite-rank orthogonal projection with an orthonormal basis of its range.
class OrthogonalProjection {
 public:
  /// Validates P = P*, P² = P and a nonzero rank.
  static OrthogonalProjection from_matrix(const ComplexMatrix& p);
  /// Projection onto the span of the given columns (dim × k), which must be
  /// linearly independent.
  static OrthogonalProjection onto_span(const ComplexMatrix& columns);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t rank() const noexcept { return basis_.cols(); }
  std::size_t dim() const noexcept { return matrix_.rows(); }
  /// dim × rank matrix with orthonormal columns spanning the range.
  const ComplexMatrix& range_basis() const noexcept { return basis_; }

 private:
  OrthogonalProjection(ComplexMatrix matrix, ComplexMatrix basis)
      : matrix_(std::move(matrix)), basis_(std::move(basis)) {}

  ComplexMatrix matrix_;
  ComplexMatrix basis_;
};

/// Positive unit-trace operator.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const ComplexMatrix& rho);
  /// |ψ⟩⟨ψ| / ⟨ψ|ψ⟩ for a column vector ψ.
  static DensityMatrix pure(const ComplexMatrix& state);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  std::size_t dim() const noexcept { return matrix_.rows(); }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

}  // namespace zeno
