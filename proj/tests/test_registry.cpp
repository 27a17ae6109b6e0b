#include <doctest.h>

#include <cmath>
#include <numbers>

#include "zeno/errors.hpp"
#include "zeno/registry.hpp"

using namespace zeno;

TEST_CASE("spec string parsing") {
  const BuiltinSpec a = parse_builtin_spec("  heavy_log_tail   a=e ");
  CHECK(a.name == "heavy_log_tail");
  REQUIRE(a.named.size() == 1);
  CHECK(a.named[0].first == "a");
  CHECK(a.named[0].second == "e");
  const BuiltinSpec b = parse_builtin_spec("point_mass 5");
  CHECK(b.positional == std::vector<std::string>{"5"});
  CHECK(parse_builtin_spec("random-hermitian").name == "random_hermitian");
  CHECK_THROWS_AS(parse_builtin_spec("   "), InvalidArgument);
  CHECK_THROWS_AS(parse_builtin_spec("cauchy gamma="), InvalidArgument);
  CHECK_THROWS_AS(parse_builtin_spec("cauchy gamma=1 0"), InvalidArgument);
}

TEST_CASE("builtin measures") {
  const auto heavy = builtin_measure("heavy_log_tail a=e");
  REQUIRE(std::holds_alternative<HeavyLogTail>(heavy.variant()));
  CHECK(std::get<HeavyLogTail>(heavy.variant()).a == std::numbers::e);

  const auto cauchy = builtin_measure("cauchy gamma=1");
  CHECK(std::get<Cauchy>(cauchy.variant()).gamma == 1.0);
  CHECK(std::get<Cauchy>(cauchy.variant()).center == 0.0);

  const auto gaussian = builtin_measure("gaussian -3 0.5");
  CHECK(std::get<Gaussian>(gaussian.variant()).mean == -3.0);
  CHECK(std::get<Gaussian>(gaussian.variant()).sigma == 0.5);

  CHECK(std::get<PointMass>(builtin_measure("point_mass 5").variant()).location == 5.0);
  CHECK(std::get<PointMass>(builtin_measure("point_mass location=-2.5").variant()).location == -2.5);

  const auto atoms = std::get<DiscreteAtoms>(builtin_measure("two_atoms x1=-1 x2=2 w=0.25").variant());
  CHECK(atoms.locations == std::vector<double>{-1.0, 2.0});
  CHECK(atoms.weights == std::vector<double>{0.25, 0.75});

  const auto sym = builtin_measure("symmetrized_heavy_log_tail");
  CHECK(sym.is_symmetric());
  CHECK(sym.kind() == "density");

  CHECK_THROWS_AS(builtin_measure("lognormal"), InvalidArgument);
  CHECK_THROWS_AS(builtin_measure("cauchy width=2"), InvalidArgument);
  CHECK_THROWS_AS(builtin_measure("cauchy 1 2 3"), InvalidArgument);
  CHECK_THROWS_AS(builtin_measure("cauchy gamma=abc"), InvalidArgument);
  CHECK_THROWS_AS(builtin_measure("cauchy gamma=-1"), InvalidMeasure);
  CHECK_THROWS_AS(builtin_measure("two_atoms w=1.5"), InvalidMeasure);
  CHECK(is_builtin_measure("gaussian mean=3"));
  CHECK(!is_builtin_measure("sigma_x"));
}

TEST_CASE("builtin scenarios") {
  const ZenoScenario x = builtin_scenario("sigma_x");
  CHECK(x.label() == "sigma_x");
  CHECK(x.dim() == 2);
  CHECK(x.rank() == 1);
  const ZenoScenario r = builtin_scenario("random_hermitian dim=6 rank=3 seed=11");
  CHECK(r.dim() == 6);
  CHECK(r.rank() == 3);
  CHECK(r.label() == "random_hermitian(6,3,11)");
  CHECK(r.hamiltonian().spectral_radius() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(builtin_scenario("random_hermitian 6 3", 11).label() == r.label());
  const ZenoScenario again = builtin_scenario("random_hermitian dim=6 rank=3 seed=11");
  CHECK(max_abs_difference(again.hamiltonian().matrix(), r.hamiltonian().matrix()) == 0.0);
  CHECK(max_abs_difference(again.projection().matrix(), r.projection().matrix()) == 0.0);
  CHECK_THROWS_AS(builtin_scenario("random_hermitian dim=2 rank=3"), InvalidArgument);
  CHECK_THROWS_AS(builtin_scenario("random_hermitian dim=2.5"), InvalidArgument);
  CHECK_THROWS_AS(builtin_scenario("sigma_x 1"), InvalidArgument);
  CHECK_THROWS_AS(builtin_scenario("sigma_y"), InvalidArgument);
  CHECK(is_builtin_scenario("sigma_z"));
  CHECK(!is_builtin_scenario("cauchy"));
}
