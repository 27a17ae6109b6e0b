#include "zeno/registry.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "zeno/errors.hpp"
#include "zeno/random.hpp"

namespace zeno {

namespace {

const std::vector<std::string> kScenarios{"sigma_x", "sigma_z", "random_hermitian"};
const std::vector<std::string> kMeasures{"heavy_log_tail", "cauchy",    "gaussian",
                                         "point_mass",     "two_atoms", "symmetrized_heavy_log_tail"};

std::string normalize(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

double parse_number(const std::string& token) {
  if (token == "e") return std::numbers::e;
  if (token == "pi") return std::numbers::pi;
  if (token == "-e") return -std::numbers::e;
  if (token == "-pi") return -std::numbers::pi;
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw InvalidArgument("not a number: '" + token + "'");
  }
  return value;
}

// Resolves parameters by name first, then by position.
class Params {
 public:
  Params(const BuiltinSpec& spec, std::vector<std::string> order) : spec_(spec), order_(std::move(order)) {
    for (const auto& [key, value] : spec_.named) {
      if (std::find(order_.begin(), order_.end(), key) == order_.end()) {
        throw InvalidArgument(spec_.name + ": unknown parameter '" + key + "'");
      }
    }
    if (spec_.positional.size() > order_.size()) {
      throw InvalidArgument(spec_.name + ": too many parameters");
    }
  }

  std::optional<double> get(const std::string& key) const {
    for (const auto& [k, v] : spec_.named) {
      if (k == key) return parse_number(v);
    }
    const auto index = static_cast<std::size_t>(std::find(order_.begin(), order_.end(), key) - order_.begin());
    if (index < spec_.positional.size()) return parse_number(spec_.positional[index]);
    return std::nullopt;
  }

  double get(const std::string& key, double fallback) const { return get(key).value_or(fallback); }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const std::optional<double> v = get(key);
    if (!v) return fallback;
    if (*v < 0.0 || *v != std::floor(*v) || *v > 1e15) {
      throw InvalidArgument(spec_.name + ": '" + key + "' must be a nonnegative integer");
    }
    return static_cast<std::size_t>(*v);
  }

 private:
  const BuiltinSpec& spec_;
  std::vector<std::string> order_;
};

ComplexMatrix diag2(double a, double b) {
  const std::vector<double> v{a, b};
  return ComplexMatrix::diagonal(v);
}

}  // namespace

BuiltinSpec parse_builtin_spec(std::string_view text) {
  BuiltinSpec spec;
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string_view {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return text.substr(start, pos - start);
  };
  const std::string_view name = next_token();
  if (name.empty()) throw InvalidArgument("empty builtin spec");
  spec.name = normalize(std::string(name));
  for (std::string_view token = next_token(); !token.empty(); token = next_token()) {
    const std::size_t eq = token.find('=');
    if (eq == std::string_view::npos) {
      if (!spec.named.empty()) throw InvalidArgument(spec.name + ": positional value after named parameters");
      spec.positional.emplace_back(token);
      continue;
    }
    if (eq == 0 || eq + 1 == token.size()) {
      throw InvalidArgument(spec.name + ": malformed parameter '" + std::string(token) + "'");
    }
    spec.named.emplace_back(std::string(token.substr(0, eq)), std::string(token.substr(eq + 1)));
  }
  return spec;
}

std::vector<std::string> builtin_scenario_names() { return kScenarios; }
std::vector<std::string> builtin_measure_names() { return kMeasures; }

bool is_builtin_scenario(std::string_view text) {
  try {
    const std::string name = parse_builtin_spec(text).name;
    return std::find(kScenarios.begin(), kScenarios.end(), name) != kScenarios.end();
  } catch (const InvalidArgument&) {
    return false;
  }
}

bool is_builtin_measure(std::string_view text) {
  try {
    const std::string name = parse_builtin_spec(text).name;
    return std::find(kMeasures.begin(), kMeasures.end(), name) != kMeasures.end();
  } catch (const InvalidArgument&) {
    return false;
  }
}

ZenoScenario builtin_scenario(std::string_view text, std::uint64_t default_seed) {
  const BuiltinSpec spec = parse_builtin_spec(text);
  if (spec.name == "sigma_x") {
    Params(spec, {});
    const ComplexMatrix h = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    return ZenoScenario("sigma_x", hermitian_eigendecompose(h), OrthogonalProjection::from_matrix(diag2(1.0, 0.0)));
  }
  if (spec.name == "sigma_z") {
    Params(spec, {});
    return ZenoScenario("sigma_z", hermitian_eigendecompose(diag2(1.0, -1.0)),
                        OrthogonalProjection::from_matrix(diag2(1.0, 0.0)));
  }
  if (spec.name == "random_hermitian") {
    const Params p(spec, {"dim", "rank", "seed"});
    const std::size_t dim = p.count("dim", 8);
    const std::size_t rank = p.count("rank", 2);
    const std::uint64_t seed = p.count("seed", default_seed);
    if (dim == 0 || rank == 0 || rank > dim) throw InvalidArgument("random_hermitian: need 1 ≤ rank ≤ dim");
    const std::string label = "random_hermitian(" + std::to_string(dim) + "," + std::to_string(rank) + "," +
                              std::to_string(seed) + ")";
    return ZenoScenario(label, random_hermitian(dim, 2.0, seed),
                        random_projection(dim, rank, seed ^ 0x5deece66dULL));
  }
  throw InvalidArgument("unknown builtin scenario '" + spec.name + "'");
}

SpectralMeasure1D builtin_measure(std::string_view text) {
  const BuiltinSpec spec = parse_builtin_spec(text);
  if (spec.name == "heavy_log_tail") {
    const Params p(spec, {"a"});
    return HeavyLogTail{p.get("a", std::numbers::e)};
  }
  if (spec.name == "symmetrized_heavy_log_tail") {
    const Params p(spec, {"a"});
    return symmetrize(HeavyLogTail{p.get("a", std::numbers::e)});
  }
  if (spec.name == "cauchy") {
    const Params p(spec, {"gamma", "center"});
    return Cauchy{p.get("gamma", 1.0), p.get("center", 0.0)};
  }
  if (spec.name == "gaussian") {
    const Params p(spec, {"mean", "sigma"});
    return Gaussian{p.get("mean", 0.0), p.get("sigma", 1.0)};
  }
  if (spec.name == "point_mass") {
    const Params p(spec, {"location"});
    return PointMass{p.get("location", 0.0)};
  }
  if (spec.name == "two_atoms") {
    // Weight w at x1 and 1 − w at x2.
    const Params p(spec, {"x1", "x2", "w"});
    const double w = p.get("w", 0.5);
    return DiscreteAtoms{{p.get("x1", -1.0), p.get("x2", 2.0)}, {w, 1.0 - w}};
  }
  throw InvalidArgument("unknown builtin measure '" + spec.name + "'");
}

}  // namespace zeno
