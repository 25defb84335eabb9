#include <doctest.h>

#include <set>

#include "evolint/errors.hpp"
#include "evolint/evolution_space.hpp"
#include "support.hpp"

using namespace evotest;

TEST_CASE("time frame sorts labels and weights together") {
  const TimeFrame f({30, 10, 20}, {3.0, 1.0, 2.0});
  CHECK(f.label(0) == 10);
  CHECK(f.weight(2) == 3.0);
  CHECK(f.index_of(20) == 1);
  CHECK_THROWS_AS(f.index_of(40), DomainError);
  const std::int64_t ls[] = {10, 30};
  CHECK(f.measure(f.subset(ls)) == 4.0);
  CHECK(f.measure(TimeSet{}) == 0.0);
}

TEST_CASE("time frame rejects bad input") {
  CHECK_THROWS_AS(TimeFrame({1, 1}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(TimeFrame({1}, {-1.0}), Error);
  CHECK_THROWS_AS(TimeFrame({1, 2}, {1.0}), Error);
  // {1} and {2} without {1,2} is not closed under union
  CHECK_THROWS_AS(TimeFrame({1, 2}, {1.0, 1.0}, std::vector<TimeSet>{TimeSet(0), TimeSet(1), TimeSet(2)}),
                  PreconditionError);
}

TEST_CASE("explicit sigma0 restricts admissible sets") {
  const TimeFrame f({1, 2}, {1.0, 1.0}, std::vector<TimeSet>{TimeSet(0), TimeSet(1), TimeSet(3)});
  CHECK(f.admissible(TimeSet(1)));
  CHECK_FALSE(f.admissible(TimeSet(2)));
  CHECK_THROWS_AS(f.require_admissible(TimeSet(2), "test"), DomainError);
  CHECK(f.sigma0().size() == 3);
}

TEST_CASE("mixed radix index with the earliest time most significant") {
  const auto g = make_grid({2, 3, 2}, {1, 1, 1});
  CHECK(g->point_count(g->full()) == 12);
  const GridPoint p{g->full(), {1, 2, 0}};
  CHECK(g->linear_index(p) == 10);
  CHECK(g->point_at(g->full(), 10) == p);
  CHECK(g->point_count(TimeSet{}) == 1);
}

TEST_CASE("enumeration is a bijection onto indices") {
  const auto g = make_grid({2, 3, 2}, {1, 1, 1});
  for (std::uint64_t m = 0; m < 8; ++m) {
    const TimeSet t(m);
    const auto pts = g->enumerate_points(t);
    REQUIRE(pts.size() == g->point_count(t));
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(g->linear_index(pts[i]) == i);
  }
}

TEST_CASE("restriction and preimages") {
  const auto g = make_grid({2, 3, 2}, {1, 1, 1});
  const TimeSet full = g->full();
  const GridPoint x{full, {1, 2, 0}};
  const GridPoint r = g->restrict_point(x, TimeSet(0b101));
  CHECK(r.coords == std::vector<std::size_t>{1, 0});
  CHECK_THROWS_AS(g->restrict_point(r, full), DomainError);

  // The preimage of a single point has prod_{t not in T} |G_t| members.
  for (std::uint64_t m = 1; m < 8; ++m) {
    const TimeSet t(m);
    std::size_t outside = 1;
    for (std::size_t i = 0; i < 3; ++i)
      if (!t.contains(i)) outside *= g->grid_size(i);
    for (std::size_t b = 0; b < g->point_count(t); ++b) {
      const std::size_t mem[] = {b};
      CHECK(g->preimage(g->point_set(t, mem)).count() == outside);
    }
  }
}

TEST_CASE("product count identity") {
  const auto g = make_grid({2, 3, 2}, {1, 1, 1});
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      const TimeSet t1(a), t2(b);
      CHECK(g->point_count(t1 | t2) * g->point_count(t1 & t2) == g->point_count(t1) * g->point_count(t2));
    }
}

TEST_CASE("foreign point indices are domain errors") {
  const auto g = make_grid({2, 2}, {1, 1});
  const std::size_t bad[] = {4};
  CHECK_THROWS_AS(g->point_set(g->full(), bad), DomainError);
  const PointSet v = PointSet::all(TimeSet(1), 2);
  const PointSet w = PointSet::all(TimeSet(2), 2);
  CHECK_THROWS_AS(v.intersect(w), Error);
}

TEST_CASE("pullback replicates values across the other times") {
  const auto g = make_grid({2, 2}, {1, 1});
  const GridFunction f(TimeSet(1), {7.0, 9.0});
  CHECK(pullback(*g, f).values() == std::vector<Complex>{7.0, 7.0, 9.0, 9.0});
  const GridFunction h(TimeSet(2), {7.0, 9.0});
  CHECK(pullback(*g, h).values() == std::vector<Complex>{7.0, 9.0, 7.0, 9.0});
}

TEST_CASE("grids must share one algebra and be nonempty") {
  const WStarAlgebra a2({2});
  const WStarAlgebra a3({3});
  CHECK_THROWS_AS(GridEvolutionSpace(TimeFrame({1, 2}, {1, 1}),
                                     {{Automorphism::identity(a2)}, {Automorphism::identity(a3)}}),
                  StructuralError);
  CHECK_THROWS_AS(GridEvolutionSpace(TimeFrame({1}, {1}), {{}}), Error);
}

TEST_CASE("point set algebra") {
  const PointSet a = PointSet::from_code(TimeSet(1), 4, 0b0011);
  const PointSet b = PointSet::from_code(TimeSet(1), 4, 0b0110);
  CHECK(a.intersect(b) == PointSet::from_code(TimeSet(1), 4, 0b0010));
  CHECK(a.unite(b) == PointSet::from_code(TimeSet(1), 4, 0b0111));
  CHECK(a.complement() == PointSet::from_code(TimeSet(1), 4, 0b1100));
  CHECK(a.members() == std::vector<std::size_t>{0, 1});
}
