#include "zeno/random.hpp"

#include "zeno/errors.hpp"

namespace zeno {

// splitmix64
std::uint64_t SeededRandom::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31U);
}

double SeededRandom::uniform() { return static_cast<double>(next() >> 11U) * 0x1.0p-53; }

namespace {

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, SeededRandom& rng) {
  ComplexMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = rng.uniform(-1.0, 1.0);
      const double im = rng.uniform(-1.0, 1.0);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

HermitianOperator rescaled(const ComplexMatrix& h, double norm) {
  const HermitianOperator raw = hermitian_eigendecompose(h);
  const double radius = raw.spectral_radius();
  if (radius == 0.0) return raw;
  ComplexMatrix scaled = h;
  scaled *= norm / radius;
  return hermitian_eigendecompose(scaled.hermitian_part());
}

}  // namespace

HermitianOperator random_hermitian(std::size_t dim, double norm, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("random_hermitian: dimension must be positive");
  SeededRandom rng(seed);
  return rescaled(random_matrix(dim, dim, rng).hermitian_part(), norm);
}

HermitianOperator random_psd(std::size_t dim, double norm, std::uint64_t seed) {
  if (dim == 0) throw InvalidArgument("random_psd: dimension must be positive");
  SeededRandom rng(seed);
  const ComplexMatrix a = random_matrix(dim, dim, rng);
  return rescaled((a.adjoint() * a).hermitian_part(), norm);
}

OrthogonalProjection random_projection(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (rank == 0 || rank > dim) throw InvalidArgument("random_projection: need 1 ≤ rank ≤ dim");
  SeededRandom rng(seed);
  return OrthogonalProjection::onto_span(random_matrix(dim, rank, rng));
}

}  // namespace zeno
