#include "zeno/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zeno/errors.hpp"

namespace zeno {

namespace {

void require_positive_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw InvalidArgument("matrix dimensions must be positive");
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  require_positive_shape(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_positive_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw DimensionMismatch("entry count " + std::to_string(data_.size()) + " does not match " +
                            std::to_string(rows) + "x" + std::to_string(cols));
  }
  if (!all_finite()) throw InvalidArgument("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionMismatch("ragged row list");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return ComplexMatrix(r, c, std::move(entries));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  }
  return out;
}

double ComplexMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (const Complex& z : data_) best = std::max(best, std::abs(z));
  return best;
}

double ComplexMatrix::frobenius() const noexcept {
  double sum = 0.0;
  for (const Complex& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionMismatch("trace of a non-square matrix");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

bool ComplexMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  if (!is_square()) throw DimensionMismatch("Hermitian part of a non-square matrix");
  ComplexMatrix out(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    out(i, i) = (*this)(i, i).real();
    for (std::size_t j = i + 1; j < cols_; ++j) {
      const Complex z = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
      out(i, j) = z;
      out(j, i) = std::conj(z);
    }
  }
  return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) noexcept {
  for (Complex& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("matrix product: inner dimensions " + std::to_string(a.cols()) +
                            " and " + std::to_string(b.rows()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "matrix comparison");
  double best = 0.0;
  for (std::size_t k = 0; k < a.entries().size(); ++k) {
    best = std::max(best, std::abs(a.entries()[k] - b.entries()[k]));
  }
  return best;
}

}  // namespace zeno
