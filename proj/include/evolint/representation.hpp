#pragma once

// The pure representation of functions on the full grid in diagonal form on
// H = l^2(points), its projection-valued measures E_T, the spectral integral,
// unitary conjugation, and the embedding eta_T of the small spaces H_T.

#include <memory>
#include <optional>
#include <vector>

#include "evolint/evolution_space.hpp"

namespace evolint {

using DenseOperator = Matrix;

/// Largest singular value.
double operator_norm(const DenseOperator& m);

/// Throws PreconditionError unless ||U^* U - 1|| <= tol (entrywise max).
void require_unitary(const DenseOperator& u, double tol, const char* what);

/// Hilbert space spanned by the basis vectors Omega_x, x in points(full).
class RepresentationSpace {
 public:
  static constexpr std::size_t kDefaultCap = 4096;

  /// Throws CapExceeded if the grid has more than `cap` points.
  explicit RepresentationSpace(std::shared_ptr<const GridEvolutionSpace> grid,
                               std::size_t cap = kDefaultCap);

  std::size_t dimension() const { return dimension_; }
  const GridEvolutionSpace& grid() const { return *grid_; }
  const std::shared_ptr<const GridEvolutionSpace>& grid_ptr() const { return grid_; }
  GridPoint basis_label(std::size_t i) const { return grid_->point_at(grid_->full(), i); }

 private:
  std::shared_ptr<const GridEvolutionSpace> grid_;
  std::size_t dimension_;
};

class DiagonalOperator {
 public:
  DiagonalOperator() = default;
  explicit DiagonalOperator(std::vector<Complex> diag) : diag_(std::move(diag)) {}

  static DiagonalOperator identity(std::size_t n) {
    return DiagonalOperator(std::vector<Complex>(n, 1.0));
  }
  static DiagonalOperator zero(std::size_t n) {
    return DiagonalOperator(std::vector<Complex>(n, 0.0));
  }

  std::size_t size() const { return diag_.size(); }
  const std::vector<Complex>& entries() const { return diag_; }
  Complex operator[](std::size_t i) const { return diag_[i]; }

  /// max |entry|
  double norm() const;
  std::size_t rank() const;
  DiagonalOperator adjoint() const;
  DiagonalOperator operator*(const DiagonalOperator& other) const;
  DiagonalOperator operator-(const DiagonalOperator& other) const;
  DenseOperator dense() const;

  friend bool operator==(const DiagonalOperator&, const DiagonalOperator&) = default;

 private:
  std::vector<Complex> diag_;
};

/// U^* D U for a diagonal D and an optional unitary U (absent means U = 1).
/// Stays in pair form; dense() materializes.
class Operator {
 public:
  explicit Operator(DiagonalOperator diag,
                    std::shared_ptr<const DenseOperator> conjugator = nullptr);

  bool is_diagonal() const { return conjugator_ == nullptr; }
  const DiagonalOperator& diagonal() const { return diag_; }
  const std::shared_ptr<const DenseOperator>& conjugator() const { return conjugator_; }
  std::size_t dimension() const { return diag_.size(); }

  DenseOperator dense() const;
  Complex trace() const;
  Operator adjoint() const;
  /// Both factors must share the conjugator (the same object or none).
  Operator operator*(const Operator& other) const;

 private:
  DiagonalOperator diag_;
  std::shared_ptr<const DenseOperator> conjugator_;
};

/// ||a - b||: exact max-abs for two unconjugated operators, largest
/// singular value of the dense difference otherwise.
double distance(const Operator& a, const Operator& b);
double distance(const Operator& a, const DenseOperator& b);
/// ||[a, b]|| via dense materialization (exactly 0 for two diagonals).
double commutator_norm(const Operator& a, const Operator& b);

/// The projection-valued measure E_T on subsets of points(T), realized as
/// V -> E(preimage of V in the full grid), optionally conjugated.
class SpectralMeasure {
 public:
  SpectralMeasure(const RepresentationSpace& space, TimeSet t,
                  std::shared_ptr<const DenseOperator> conjugator = nullptr);
  SpectralMeasure(std::shared_ptr<const GridEvolutionSpace> grid, TimeSet t,
                  std::shared_ptr<const DenseOperator> conjugator);

  /// The measure E of the representation over the full frame.
  static SpectralMeasure full(const RepresentationSpace& space);

  TimeSet domain() const { return domain_; }
  std::size_t dimension() const { return dimension_; }
  const GridEvolutionSpace& grid() const { return *grid_; }
  const std::shared_ptr<const GridEvolutionSpace>& grid_ptr() const { return grid_; }
  const std::shared_ptr<const DenseOperator>& conjugator() const { return conjugator_; }
  bool is_diagonal() const { return conjugator_ == nullptr; }

  /// E_T(V). Throws DomainError when V is not a subset of points(T).
  Operator operator()(const PointSet& v) const;

 private:
  std::shared_ptr<const GridEvolutionSpace> grid_;
  TimeSet domain_;
  std::size_t dimension_;
  std::shared_ptr<const DenseOperator> conjugator_;
};

/// pi(f) = sum_x f(x) |Omega_x><Omega_x|. f must live on the full grid.
DiagonalOperator represent(const RepresentationSpace& space, const GridFunction& f);

/// E_T(V) for the unconjugated representation.
DiagonalOperator spectral_projection(const RepresentationSpace& space, TimeSet t,
                                     const PointSet& v);

/// E o iota_T^{-1}. E must be a measure over the full frame.
SpectralMeasure pushforward(const SpectralMeasure& e, TimeSet t);

/// integral of f dE_T = pi(pullback f), conjugated like E_T.
Operator integrate(const GridFunction& f, const SpectralMeasure& e);
/// The same integral as the finite sum over atoms f(b) E_T({b}).
Operator integrate_atoms(const GridFunction& f, const SpectralMeasure& e);

/// U^* E(.) U. Composes with an existing conjugator W as (W U)^* E (W U).
SpectralMeasure conjugate(const DenseOperator& u, const SpectralMeasure& e);
Operator conjugate(const DenseOperator& u, const Operator& op);
DenseOperator conjugate(const DenseOperator& u, const DenseOperator& op);

/// theta_T(f): f in diagonal form on H_T = l^2(points(T)).
DiagonalOperator theta(const GridEvolutionSpace& grid, const GridFunction& f);
/// F_T(V), the measure of theta_T.
DiagonalOperator small_projection(const GridEvolutionSpace& grid, const PointSet& v);

/// eta_T: diagonal operators on H_T -> diagonal operators on H.
DiagonalOperator embed_eta(const GridEvolutionSpace& grid, TimeSet t,
                           const DiagonalOperator& op);
/// Throws DomainError if op has a nonzero off-diagonal entry.
DiagonalOperator embed_eta(const GridEvolutionSpace& grid, TimeSet t,
                           const DenseOperator& op);

/// <Omega_x, E(V) Omega_y>.
Complex matrix_element(const SpectralMeasure& e, std::size_t x, std::size_t y,
                       const PointSet& v);

}  // namespace evolint
