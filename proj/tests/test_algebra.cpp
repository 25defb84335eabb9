#include <doctest.h>

#include <cmath>

#include "evolint/algebra.hpp"
#include "evolint/errors.hpp"
#include "support.hpp"

using namespace evotest;

TEST_CASE("splitmix64 reference sequence") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
  SplitMix64 again(1234567);
  CHECK(again.uniform() == doctest::Approx(0.3500795420214081).epsilon(1e-15));
}

TEST_CASE("below stays in range") {
  SplitMix64 rng(3);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
}

TEST_CASE("haar unitary is unitary and reproducible") {
  const Matrix u = haar_unitary(5, 99);
  CHECK((u.adjoint() * u - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(u == haar_unitary(5, 99));
  CHECK(u != haar_unitary(5, 100));
}

TEST_CASE("algebra dimension and description") {
  const WStarAlgebra alg({2, 3});
  CHECK(alg.dimension() == 13);
  CHECK(alg.block_offset(1) == 4);
  CHECK(alg.describe() == "M2+M3");
  CHECK_THROWS_AS(WStarAlgebra({}), Error);
}

TEST_CASE("norm is the largest singular value over blocks") {
  const WStarAlgebra alg({1, 2});
  Matrix a(1, 1);
  a << 3.0;
  const AlgebraElement x(alg, {a, mat2(0, 4, 0, 0)});
  CHECK(x.norm() == doctest::Approx(4.0));
  CHECK((x.adjoint() * x).norm() == doctest::Approx(16.0));
}

TEST_CASE("coordinates round trip") {
  const WStarAlgebra alg({2, 3});
  SplitMix64 rng(1);
  const AlgebraElement a = AlgebraElement::random(alg, rng);
  const AlgebraElement b = AlgebraElement::from_coordinates(alg, a.coordinates());
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("flip conjugation swaps the diagonal units") {
  const WStarAlgebra alg({2});
  const Automorphism f = Automorphism::conjugation(alg, {flip()});
  const AlgebraElement e11(alg, {mat2(1, 0, 0, 0)});
  const AlgebraElement img = f.apply(e11);
  CHECK((img.block(0) - mat2(0, 0, 0, 1)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("non-unitary conjugator is rejected") {
  const WStarAlgebra alg({2});
  CHECK_THROWS_AS(Automorphism::conjugation(alg, {mat2(2, 0, 0, 1)}), PreconditionError);
  CHECK_THROWS_AS(Automorphism(alg, {1}, {flip()}), Error);
}

TEST_CASE("block permutation with inverse and composition") {
  const WStarAlgebra alg({2, 2});
  SplitMix64 rng(5);
  const Automorphism swap(alg, {1, 0}, {haar_unitary(2, rng), haar_unitary(2, rng)});
  const AlgebraElement a = AlgebraElement::random(alg, rng);
  const AlgebraElement img = swap.apply(a);
  // Block 0 lands in block 1.
  const Matrix u0 = swap.unitaries()[0];
  CHECK((img.block(1) - u0 * a.block(0) * u0.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((swap.inverse().apply(img) - a).norm() < 1e-13);
  const Automorphism both = compose_automorphisms(swap, swap.inverse());
  CHECK((both.apply(a) - a).norm() < 1e-13);
  const Automorphism h = Automorphism::haar(alg, rng);
  CHECK((compose_automorphisms(h, swap).apply(a) - h.apply(swap.apply(a))).norm() < 1e-13);
  CHECK((swap.to_linear_map().apply(a) - img).norm() < 1e-13);
}

TEST_CASE("mismatched algebras are structural errors") {
  const WStarAlgebra a2({2});
  const WStarAlgebra a3({3});
  CHECK_THROWS_AS(AlgebraElement::identity(a2) + AlgebraElement::identity(a3), StructuralError);
  const ElementaryTensor t(AlgebraElement::identity(a3),
                           NormalFunctional::trace_against(AlgebraElement::identity(a3)));
  CHECK_THROWS_AS(weakstar_pairing(Automorphism::identity(a2), t), StructuralError);
}

TEST_CASE("trace pairing") {
  const WStarAlgebra alg({2});
  const NormalFunctional g = NormalFunctional::trace_against(AlgebraElement(alg, {mat2(1, 0, 0, 0)}));
  const AlgebraElement a(alg, {mat2(3, 5, 7, 11)});
  CHECK(g(a) == Complex(3.0));
  const ElementaryTensor t(a, g);
  CHECK(weakstar_pairing(Automorphism::identity(alg), t) == Complex(3.0));
  // flip moves a_22 = 11 into the (1,1) slot
  CHECK(weakstar_pairing(Automorphism::conjugation(alg, {flip()}), t) == Complex(11.0));
}

TEST_CASE("functional of a difference of grid maps") {
  const WStarAlgebra alg({2});
  const GridPointMap alpha(Automorphism::conjugation(alg, {flip()}));
  const GridPointMap tau(Automorphism::identity(alg));
  const ElementaryTensor f(AlgebraElement(alg, {mat2(1, 0, 0, 0)}),
                           NormalFunctional::trace_against(AlgebraElement(alg, {mat2(1, 0, 0, 0)})));
  // <e11, flip(e11) - e11> = 0 - 1
  CHECK(functional_at(f, alpha - tau) == Complex(-1.0));
}

TEST_CASE("verify_automorphism accepts Haar conjugations of M2+M3") {
  const WStarAlgebra alg({2, 3});
  SplitMix64 rng(2024);
  for (int k = 0; k < 50; ++k) {
    const auto r = verify_automorphism(Automorphism::haar(alg, rng), 10, rng.next(), 1e-10);
    CHECK(r.passed());
  }
}

TEST_CASE("verify_automorphism flags contractions that are not automorphisms") {
  const WStarAlgebra alg({2, 3});
  const auto avg = verify_automorphism(GridPointMap(LinearMap::trace_average(alg), "avg"), 10, 1, 1e-10);
  CHECK_FALSE(avg.passed());
  CHECK(avg.unital < 1e-14);
  CHECK(avg.multiplicative > 0.1);
  const auto pinch = verify_automorphism(GridPointMap(LinearMap::pinching(alg), "pinch"), 10, 1, 1e-10);
  CHECK_FALSE(pinch.passed());
  CHECK(verify_automorphism(GridPointMap(LinearMap::identity(alg), "id"), 10, 1, 1e-10).passed());
}

TEST_CASE("a map with norm above one is not a grid map") {
  const WStarAlgebra alg({2});
  CHECK_THROWS_AS(GridPointMap(LinearMap::identity(alg) * Complex(2.0), "double"), PreconditionError);
  CHECK_NOTHROW(GridPointMap(LinearMap::zero(alg), "zero"));
}

TEST_CASE("operator norm estimate of isometries is one") {
  const WStarAlgebra alg({2, 3});
  SplitMix64 rng(8);
  const LinearMap m = Automorphism::haar(alg, rng).to_linear_map();
  CHECK(estimate_operator_norm(m, 64, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(estimate_operator_norm(LinearMap::trace_average(alg), 64, 1) <= 1.0 + 1e-12);
}
