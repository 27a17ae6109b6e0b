#pragma once

#include <span>
#include <string_view>

namespace zeno {

/// Verdict on whether a sequence sampled on a geometric grid has a limit.
enum class LimitTrend { kConverges, kDiverges, kUndetermined };

/// Verdict on whether a nonnegative sequence tends to zero.
enum class VanishingTrend { kVanishes, kPersists, kUndetermined };

std::string_view to_string(LimitTrend trend);
std::string_view to_string(VanishingTrend trend);

/// Finite-grid limit rule (needs ≥ 4 samples, otherwise undetermined):
///  - converges: the last three increments are each < tol and nonincreasing;
///  - diverges: the last three magnitudes strictly increase and either the
///    last exceeds 10× the first sample, or the last two increment ratios are
///    ≥ 0.9 with the last increment ≥ tol (increments not shrinking
///    geometrically, as for logarithmic growth);
///  - undetermined otherwise.
LimitTrend classify_limit(std::span<const double> values, double tol);

/// Same rule with explicit magnitudes and increments, for sequences of
/// operators where increments are norms of differences.
/// increments[k] is the distance between samples k and k+1.
LimitTrend classify_limit(std::span<const double> magnitudes, std::span<const double> increments, double tol);

/// Finite-grid vanishing rule on |values| (needs ≥ 4 samples):
///  - vanishes: the last value is ≤ tol, or each of the last three steps
///    decreases by more than tol;
///  - persists: the sequence converges to a value > tol, or it is
///    nondecreasing over the last three steps;
///  - undetermined otherwise.
VanishingTrend classify_vanishing(std::span<const double> values, double tol);

}  // namespace zeno
