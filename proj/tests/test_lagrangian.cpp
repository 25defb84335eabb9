#include <doctest.h>

#include <cmath>
#include <limits>

#include "evolint/errors.hpp"
#include "evolint/lagrangian.hpp"
#include "support.hpp"

using namespace evotest;

TEST_CASE("weighted action of a table Lagrangian") {
  const auto g = make_grid({1, 1}, {0.5, 2.0});
  // L = 3 at time 1, -1 at time 2  ->  S = 0.5 * 3 + 2 * (-1)
  const Lagrangian l = Lagrangian::table({{3.0}, {-1.0}});
  const GridFunction s = action_from_lagrangian(*g, l, g->full());
  CHECK(s[0] == Complex(-0.5));
  CHECK(action_from_lagrangian(*g, l, TimeSet{})[0] == Complex(0.0));
}

TEST_CASE("local Lagrangians satisfy restriction, additivity and the Lipschitz bound") {
  const auto g = make_grid({2, 3, 2}, {1, 0.5, 0});
  const Lagrangian l = Lagrangian::local([](std::size_t t, std::size_t c) { return std::cos(1.0 + t * 0.9 + c * 1.7); });
  const LagrangianReport r = verify_lagrangian(*g, l, 1e-12, 1);
  CHECK(r.passed());
  CHECK_FALSE(r.sampled);
  const Action s = action_of(g, l);
  CHECK(action_additivity_deviation(s) < 1e-12);
  CHECK(lipschitz_violation(s, l) <= 1e-12);
  CHECK(validate_action_weight(weight_from_action(s), 1e-12).passed());
  // weight-0 time contributes nothing
  for (const Complex v : s.at(TimeSet(0b100)).values()) CHECK(v == Complex(0.0));
}

TEST_CASE("a non-local Lagrangian fails restriction consistency") {
  const auto g = make_grid({2, 2}, {1, 1});
  // depends on |T|
  const Lagrangian l([](TimeSet t, const GridPoint&, std::size_t) { return static_cast<double>(t.size()); }, false);
  const LagrangianReport r = verify_lagrangian(*g, l, 1e-12, 1);
  CHECK_FALSE(r.passed());
  CHECK(r.restriction == doctest::Approx(1.0));
}

TEST_CASE("non-finite Lagrangian values are data errors") {
  const auto g = make_grid({1}, {1});
  const Lagrangian l = Lagrangian::table({{std::numeric_limits<double>::quiet_NaN()}});
  CHECK_THROWS_AS(action_from_lagrangian(*g, l, g->full()), DataError);
  CHECK_FALSE(verify_lagrangian(*g, l, 1e-12, 1).passed());
}

TEST_CASE("subsets outside sigma0 are rejected") {
  const WStarAlgebra alg({2});
  auto g = std::make_shared<const GridEvolutionSpace>(
      TimeFrame({1, 2}, {1.0, 1.0}, std::vector<TimeSet>{TimeSet(0), TimeSet(3)}),
      std::vector<std::vector<GridPointMap>>{{Automorphism::identity(alg)}, {Automorphism::identity(alg)}});
  const Lagrangian l = Lagrangian::table({{1.0}, {2.0}});
  CHECK_THROWS_AS(action_from_lagrangian(*g, l, TimeSet(1)), DomainError);
  CHECK(action_from_lagrangian(*g, l, TimeSet(3))[0] == Complex(3.0));
}

TEST_CASE("lagrangian from terms agrees with the example action") {
  const WStarAlgebra alg({2});
  auto g = std::make_shared<const GridEvolutionSpace>(
      TimeFrame({1, 2}, {1.0, 1.0}),
      std::vector<std::vector<GridPointMap>>{
          {Automorphism::identity(alg), Automorphism::conjugation(alg, {flip()})},
          {Automorphism::identity(alg), Automorphism::conjugation(alg, {mat2(1, 0, 0, Complex(0, 1))})}});
  const AlgebraElement e11(alg, {mat2(1, 0, 0, 0)});
  const AlgebraElement raise(alg, {mat2(0, 1, 0, 0)});
  const AlgebraElement lower(alg, {mat2(0, 0, 1, 0)});
  const GridPointMap id(Automorphism::identity(alg));
  ActionTerms terms{
      ActionTerm{ElementaryTensor(e11, NormalFunctional::trace_against(e11)), RealFunction::kAbs, id},
      ActionTerm{ElementaryTensor(raise, NormalFunctional::trace_against(lower)), RealFunction::kRealPart, id}};
  const Lagrangian l = Lagrangian::from_terms(*g, terms, false);
  const Action s = action_of(g, l);
  for (std::uint64_t m = 0; m < 4; ++m) {
    const TimeSet t(m);
    CHECK(max_abs(s.at(t).values(), example_action(*g, t, terms).values()) < 1e-15);
  }
  // diag(1, i) sends raise to -i raise, so the term is Re(-i - 1) = -1
  CHECK(s.at(TimeSet(2))[1] == Complex(-1.0));
}
