#pragma once

#include <memory>
#include <vector>

#include "evolint/evolution_space.hpp"
#include "evolint/representation.hpp"

namespace evotest {

using namespace evolint;

inline Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Matrix flip() { return mat2(0, 1, 1, 0); }

// Grid over M_2 with Haar automorphisms; labels 1..n unless given.
inline std::shared_ptr<const GridEvolutionSpace> make_grid(std::vector<std::size_t> sizes,
                                                           std::vector<double> weights,
                                                           std::uint64_t seed = 7) {
  const WStarAlgebra alg({2});
  SplitMix64 rng(seed);
  std::vector<std::int64_t> labels;
  std::vector<std::vector<GridPointMap>> grids;
  for (std::size_t t = 0; t < sizes.size(); ++t) {
    labels.push_back(static_cast<std::int64_t>(t + 1));
    std::vector<GridPointMap> g;
    g.emplace_back(Automorphism::identity(alg));
    for (std::size_t k = 1; k < sizes[t]; ++k) g.emplace_back(Automorphism::haar(alg, rng));
    grids.push_back(std::move(g));
  }
  return std::make_shared<const GridEvolutionSpace>(TimeFrame(labels, weights), grids);
}

inline double max_abs(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace evotest
