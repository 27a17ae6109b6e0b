#pragma once

#include <cstdint>

#include "zeno/linalg.hpp"

namespace zeno {

/// Deterministic generator for seeded test scenarios. Uses its own mapping to
/// doubles so outputs do not depend on the standard library's distributions.
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : state_(seed) {}
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t next();
  std::uint64_t state_;
};

/// Random Hermitian matrix rescaled to spectral radius `norm`.
HermitianOperator random_hermitian(std::size_t dim, double norm, std::uint64_t seed);

/// Random positive semidefinite matrix with spectral radius `norm`.
HermitianOperator random_psd(std::size_t dim, double norm, std::uint64_t seed);

/// Projection onto the span of `rank` random vectors.
OrthogonalProjection random_projection(std::size_t dim, std::size_t rank, std::uint64_t seed);

}  // namespace zeno
