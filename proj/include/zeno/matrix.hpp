#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace zeno {

using Complex = std::complex<double>;

/// Dense complex matrix stored row-major. Dimensions are strictly positive.
class ComplexMatrix {
 public:
  /// Zero matrix of the given shape.
  ComplexMatrix(std::size_t rows, std::size_t cols);

  /// Takes ownership of row-major entries; all entries must be finite.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  Complex& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;

  /// Largest absolute entry.
  double max_abs() const noexcept;
  double frobenius() const noexcept;
  Complex trace() const;
  bool all_finite() const noexcept;

  /// (m + m*)/2; the result is Hermitian bit-for-bit.
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale) noexcept;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);

/// ‖a − b‖ in the max-entry norm.
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace zeno
