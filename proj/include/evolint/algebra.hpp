#pragma once

// Finite-dimensional W*-algebras A = M_{n1} + ... + M_{nk}, their normal
// functionals, *-automorphisms and general linear maps on A, and the
// pairing between L(A) and finite elementary-tensor lists.

#include <complex>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "evolint/rng.hpp"

namespace evolint {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class WStarAlgebra {
 public:
  explicit WStarAlgebra(std::vector<Eigen::Index> block_dims);

  std::span<const Eigen::Index> block_dims() const { return block_dims_; }
  std::size_t block_count() const { return block_dims_.size(); }
  Eigen::Index block_dim(std::size_t i) const { return block_dims_.at(i); }
  /// Sum of n_i^2; the length of the coordinate vector of an element.
  Eigen::Index dimension() const { return dimension_; }
  /// Offset of block i inside the coordinate vector.
  Eigen::Index block_offset(std::size_t i) const { return offsets_.at(i); }
  std::string describe() const;

  friend bool operator==(const WStarAlgebra&, const WStarAlgebra&) = default;

 private:
  std::vector<Eigen::Index> block_dims_;
  std::vector<Eigen::Index> offsets_;
  Eigen::Index dimension_ = 0;
};

class AlgebraElement {
 public:
  AlgebraElement(WStarAlgebra algebra, std::vector<Matrix> blocks);

  static AlgebraElement zero(const WStarAlgebra& algebra);
  static AlgebraElement identity(const WStarAlgebra& algebra);
  /// Entries i.i.d. standard complex Gaussian, block by block, row-major.
  static AlgebraElement random(const WStarAlgebra& algebra, SplitMix64& rng);
  /// Inverse of coordinates(): each block row-major, blocks in order.
  static AlgebraElement from_coordinates(const WStarAlgebra& algebra,
                                         const Vector& coords);

  const WStarAlgebra& algebra() const { return algebra_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t i) const { return blocks_.at(i); }

  Vector coordinates() const;
  /// C*-norm: largest singular value over all blocks.
  double norm() const;
  AlgebraElement adjoint() const;

  AlgebraElement operator+(const AlgebraElement& other) const;
  AlgebraElement operator-(const AlgebraElement& other) const;
  AlgebraElement operator*(const AlgebraElement& other) const;
  AlgebraElement operator*(Complex scalar) const;

 private:
  WStarAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

/// Element of A_*: a -> sum_i trace(rho_i a_i).
class NormalFunctional {
 public:
  NormalFunctional(WStarAlgebra algebra, std::vector<Matrix> densities);

  /// The functional a -> sum_i trace(b_i a_i) for a fixed element b.
  static NormalFunctional trace_against(const AlgebraElement& density);

  const WStarAlgebra& algebra() const { return algebra_; }
  const std::vector<Matrix>& densities() const { return densities_; }
  Complex operator()(const AlgebraElement& a) const;

 private:
  WStarAlgebra algebra_;
  std::vector<Matrix> densities_;
};

class LinearMap;

/// Block permutation followed by per-block unitary conjugation:
/// alpha(a)_{perm(i)} = u_i a_i u_i^*.
class Automorphism {
 public:
  /// Throws StructuralError on shape or permutation problems and
  /// PreconditionError when a unitary deviates from u u^* = 1 by more
  /// than 1e-10.
  Automorphism(WStarAlgebra algebra, std::vector<std::size_t> block_perm,
               std::vector<Matrix> unitaries);

  static Automorphism identity(const WStarAlgebra& algebra);
  /// Identity permutation, independent Haar unitary per block.
  static Automorphism haar(const WStarAlgebra& algebra, SplitMix64& rng);
  /// Conjugation by the given per-block unitaries, identity permutation.
  static Automorphism conjugation(const WStarAlgebra& algebra,
                                  std::vector<Matrix> unitaries);

  const WStarAlgebra& algebra() const { return algebra_; }
  std::span<const std::size_t> block_perm() const { return perm_; }
  const std::vector<Matrix>& unitaries() const { return unitaries_; }

  AlgebraElement apply(const AlgebraElement& a) const;
  Automorphism inverse() const;
  LinearMap to_linear_map() const;

 private:
  WStarAlgebra algebra_;
  std::vector<std::size_t> perm_;
  std::vector<Matrix> unitaries_;
};

/// (alpha o beta)(a) = alpha(beta(a)).
Automorphism compose_automorphisms(const Automorphism& alpha,
                                   const Automorphism& beta);

AlgebraElement apply_automorphism(const Automorphism& alpha,
                                  const AlgebraElement& a);

/// Arbitrary linear map on A, stored as a matrix on the coordinate space.
class LinearMap {
 public:
  LinearMap(WStarAlgebra algebra, Matrix coordinate_matrix);

  static LinearMap identity(const WStarAlgebra& algebra);
  static LinearMap zero(const WStarAlgebra& algebra);
  /// a -> (trace(a_i)/n_i) 1 on each block. A unital contraction that is
  /// not multiplicative for n_i > 1.
  static LinearMap trace_average(const WStarAlgebra& algebra);
  /// a -> diagonal part of each block. A unital contraction.
  static LinearMap pinching(const WStarAlgebra& algebra);

  const WStarAlgebra& algebra() const { return algebra_; }
  const Matrix& matrix() const { return matrix_; }

  AlgebraElement apply(const AlgebraElement& a) const;

  LinearMap operator+(const LinearMap& other) const;
  LinearMap operator-(const LinearMap& other) const;
  LinearMap operator*(Complex scalar) const;

 private:
  WStarAlgebra algebra_;
  Matrix matrix_;
};

/// Lower estimate of the operator norm of a map with respect to the C*-norm.
/// The norm of a linear map on a finite-dimensional C*-algebra is attained
/// on the unitary group, which is sampled here (identity plus `samples`
/// Haar block unitaries).
double estimate_operator_norm(const LinearMap& map, int samples,
                              std::uint64_t seed);

/// A point of the closure of Aut(A) inside the unit ball of L(A): either a
/// genuine automorphism or a linear contraction.
class GridPointMap {
 public:
  GridPointMap(Automorphism alpha);  // NOLINT(google-explicit-constructor)
  /// Throws PreconditionError if the estimated norm exceeds 1 + 1e-10.
  explicit GridPointMap(LinearMap contraction, std::string label = "dense");

  bool is_automorphism() const {
    return std::holds_alternative<Automorphism>(map_);
  }
  const Automorphism& automorphism() const { return std::get<Automorphism>(map_); }
  const WStarAlgebra& algebra() const;
  const std::string& label() const { return label_; }

  AlgebraElement apply(const AlgebraElement& a) const;
  LinearMap as_linear_map() const;

 private:
  std::variant<Automorphism, LinearMap> map_;
  std::string label_;
};

/// Pointwise difference of two grid maps as linear maps on A.
LinearMap operator-(const GridPointMap& lhs, const GridPointMap& rhs);

/// Finite list of pairs (a_j, g_j) standing for sum_j a_j (x) g_j in the
/// predual of L(A).
class ElementaryTensor {
 public:
  explicit ElementaryTensor(WStarAlgebra algebra) : algebra_(std::move(algebra)) {}
  ElementaryTensor(AlgebraElement a, NormalFunctional g);

  const WStarAlgebra& algebra() const { return algebra_; }
  const std::vector<std::pair<AlgebraElement, NormalFunctional>>& pairs() const {
    return pairs_;
  }
  void add(AlgebraElement a, NormalFunctional g);
  /// Concatenation of the two pair lists.
  ElementaryTensor operator+(const ElementaryTensor& other) const;

 private:
  WStarAlgebra algebra_;
  std::vector<std::pair<AlgebraElement, NormalFunctional>> pairs_;
};

template <typename Map>
concept AlgebraMap = requires(const Map& m, const AlgebraElement& a) {
  { m.apply(a) } -> std::same_as<AlgebraElement>;
  { m.algebra() } -> std::convertible_to<const WStarAlgebra&>;
};

void require_same_algebra(const WStarAlgebra& a, const WStarAlgebra& b,
                          const char* what);

/// sum_j g_j(phi(a_j)).
template <AlgebraMap Map>
Complex weakstar_pairing(const Map& phi, const ElementaryTensor& t) {
  require_same_algebra(phi.algebra(), t.algebra(), "weakstar_pairing");
  Complex total = 0.0;
  for (const auto& [a, g] : t.pairs()) total += g(phi.apply(a));
  return total;
}

/// The value f(alpha) of a predual element at a map alpha.
template <AlgebraMap Map>
Complex functional_at(const ElementaryTensor& f, const Map& alpha) {
  return weakstar_pairing(alpha, f);
}

struct AutomorphismReport {
  int samples = 0;
  double multiplicative = 0.0;  // max ||phi(ab) - phi(a)phi(b)||
  double star = 0.0;            // max ||phi(a^*) - phi(a)^*||
  double unital = 0.0;          // ||phi(1) - 1||
  double isometric = 0.0;       // max | ||phi(a)|| - ||a|| |
  double tolerance = 0.0;

  double max_deviation() const;
  bool passed() const { return max_deviation() <= tolerance; }
};

/// Checks the *-automorphism laws on seeded random pairs. Failures are
/// reported, not thrown. sample_count must be at least 1.
AutomorphismReport verify_automorphism(const GridPointMap& phi, int sample_count,
                                       std::uint64_t seed, double tol);

}  // namespace evolint
