#include "zeno/sequence.hpp"

#include <cmath>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

std::string_view to_string(LimitTrend trend) {
  switch (trend) {
    case LimitTrend::kConverges: return "converges";
    case LimitTrend::kDiverges: return "diverges";
    case LimitTrend::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(VanishingTrend trend) {
  switch (trend) {
    case VanishingTrend::kVanishes: return "vanishes";
    case VanishingTrend::kPersists: return "persists";
    case VanishingTrend::kUndetermined: return "undetermined";
  }
  return "undetermined";
}

LimitTrend classify_limit(std::span<const double> magnitudes, std::span<const double> increments, double tol) {
  if (increments.size() + 1 != magnitudes.size()) {
    throw InvalidArgument("classify_limit: need one increment per consecutive pair");
  }
  const std::size_t n = magnitudes.size();
  if (n < 4) return LimitTrend::kUndetermined;
  const double d0 = increments[n - 4];
  const double d1 = increments[n - 3];
  const double d2 = increments[n - 2];
  if (d0 < tol && d1 < tol && d2 < tol && d1 <= d0 && d2 <= d1) return LimitTrend::kConverges;

  const double m0 = std::abs(magnitudes[n - 3]);
  const double m1 = std::abs(magnitudes[n - 2]);
  const double m2 = std::abs(magnitudes[n - 1]);
  if (m0 < m1 && m1 < m2) {
    if (m2 > 10.0 * std::abs(magnitudes.front())) return LimitTrend::kDiverges;
    if (d2 >= tol && d1 > 0.0 && d0 > 0.0 && d2 / d1 >= 0.9 && d1 / d0 >= 0.9) return LimitTrend::kDiverges;
  }
  return LimitTrend::kUndetermined;
}

LimitTrend classify_limit(std::span<const double> values, double tol) {
  if (values.empty()) return LimitTrend::kUndetermined;
  std::vector<double> increments;
  increments.reserve(values.size());
  for (std::size_t k = 1; k < values.size(); ++k) increments.push_back(std::abs(values[k] - values[k - 1]));
  return classify_limit(values, increments, tol);
}

VanishingTrend classify_vanishing(std::span<const double> values, double tol) {
  const std::size_t n = values.size();
  if (n < 4) return VanishingTrend::kUndetermined;
  std::vector<double> tail;
  for (std::size_t k = n - 4; k < n; ++k) tail.push_back(std::abs(values[k]));
  if (tail[3] <= tol) return VanishingTrend::kVanishes;
  if (tail[0] - tail[1] > tol && tail[1] - tail[2] > tol && tail[2] - tail[3] > tol) {
    return VanishingTrend::kVanishes;
  }
  if (tail[0] <= tail[1] && tail[1] <= tail[2] && tail[2] <= tail[3]) return VanishingTrend::kPersists;
  if (classify_limit(values, tol) == LimitTrend::kConverges) return VanishingTrend::kPersists;
  return VanishingTrend::kUndetermined;
}

}  // namespace zeno
