#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zeno/engine.hpp"
#include "zeno/measure.hpp"

namespace zeno {

/// Builtin spec strings are a name followed by whitespace-separated
/// parameters, either `key=value` or bare positional values:
///
///   sigma_x
///   random_hermitian dim=8 rank=2 seed=3
///   heavy_log_tail a=e
///   point_mass 5
///
/// Values accept decimal numbers and the constants `e` and `pi`.
struct BuiltinSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> named;
  std::vector<std::string> positional;
};

/// Throws InvalidArgument on an empty string or a malformed token.
BuiltinSpec parse_builtin_spec(std::string_view text);

std::vector<std::string> builtin_scenario_names();
std::vector<std::string> builtin_measure_names();
bool is_builtin_scenario(std::string_view text);
bool is_builtin_measure(std::string_view text);

/// sigma_x, sigma_z or random_hermitian(dim, rank, seed) with ‖H‖ = 2.
/// `default_seed` is used when a random scenario names no seed.
ZenoScenario builtin_scenario(std::string_view text, std::uint64_t default_seed = 0);

/// heavy_log_tail, cauchy, gaussian, point_mass, two_atoms or
/// symmetrized_heavy_log_tail.
SpectralMeasure1D builtin_measure(std::string_view text);

}  // namespace zeno
