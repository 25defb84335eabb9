#pragma once

// Action weights, the evolution unitaries U_T = integral of u_T dE_T, the
// group law for mu-disjoint subsets, the commutant witness for conjugated
// representations, and the example action built from predual functionals.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "evolint/representation.hpp"

namespace evolint {

/// Extensional action weight: one grid function u_T per T in Sigma_0.
/// Unitarity and the cocycle law are checked by validate_action_weight, not
/// enforced.
class ActionWeight {
 public:
  /// Every member of Sigma_0 needs an entry with one value per point.
  ActionWeight(std::shared_ptr<const GridEvolutionSpace> grid,
               std::map<TimeSet, GridFunction> values);

  /// u_T = 1 for every T.
  static ActionWeight trivial(std::shared_ptr<const GridEvolutionSpace> grid);

  const GridEvolutionSpace& grid() const { return *grid_; }
  const std::shared_ptr<const GridEvolutionSpace>& grid_ptr() const { return grid_; }
  /// Throws DomainError unless t is in Sigma_0.
  const GridFunction& at(TimeSet t) const;
  const std::map<TimeSet, GridFunction>& values() const { return values_; }

  /// Copy with a single value replaced.
  ActionWeight with_value(TimeSet t, std::size_t index, Complex value) const;

 private:
  std::shared_ptr<const GridEvolutionSpace> grid_;
  std::map<TimeSet, GridFunction> values_;
};

struct ActionWeightReport {
  double unitarity = 0.0;  // max | |u_T(b)| - 1 |
  double cocycle = 0.0;    // max cocycle defect over mu-disjoint pairs
  double null_set = 0.0;   // max |u_T - 1| over mu-null T
  std::size_t pairs = 0;
  std::size_t points = 0;  // full-grid points used per pair
  bool sampled = false;
  double tolerance = 0.0;

  bool passed() const {
    return unitarity <= tolerance && cocycle <= tolerance && null_set <= tolerance;
  }
};

/// Checks unitarity, the cocycle law for mu(T1 n T2) = 0 and triviality on
/// mu-null sets. Uses every full-grid point up to 10^4 points, otherwise
/// 1000 seeded samples. Every member of `family` must lie in Sigma_0; an
/// empty family means all of Sigma_0.
ActionWeightReport validate_action_weight(const ActionWeight& u, double tol,
                                          const std::vector<TimeSet>& family = {},
                                          std::uint64_t seed = 0);

struct EvolutionUnitary {
  TimeSet subset;
  Operator op;
};

/// U_T = integral of u_T dE_T, with U_empty = 1. `e` is either E_T or the
/// measure over the full frame, which is then pushed forward to T.
EvolutionUnitary evolution_unitary(const ActionWeight& u, TimeSet t, const SpectralMeasure& e);

struct GroupLawReport {
  TimeSet first;
  TimeSet second;
  double deviation = 0.0;  // ||U_{T1} U_{T2} - U_{T1 u T2}||
  double tolerance = 0.0;
  bool passed() const { return deviation <= tolerance; }
};

/// Throws PreconditionError unless mu(T1 n T2) = 0.
GroupLawReport check_group_law(const ActionWeight& u, TimeSet t1, TimeSet t2,
                               const SpectralMeasure& e, double tol);

struct CommutantReport {
  double pairwise_commutator = 0.0;  // max ||[U_T, U_T']|| within one representation
  double covariance = 0.0;           // max ||U'_T - U^* U_T U||
  double witness = 0.0;              // max ||[U_T, U'_T']||
  TimeSet witness_first;
  TimeSet witness_second;
  double tolerance = 0.0;
  bool passed() const { return pairwise_commutator <= tolerance && covariance <= tolerance; }
};

/// U'_T is computed as the atom sum of u_T against the conjugated measure
/// and compared with U^* U_T U formed densely. `e` must be the unconjugated
/// measure over the full frame.
CommutantReport commutant_witness(const ActionWeight& u, const DenseOperator& conjugator,
                                  const SpectralMeasure& e, double tol);

enum class RealFunction { kAbs, kAbsSquared, kRealPart };

/// "abs", "abs2", "real". Throws DomainError for other names.
RealFunction parse_real_function(const std::string& name);
std::string to_string(RealFunction g);
double apply(RealFunction g, Complex z);

/// The per-time data (f_t, g_t, tau_t) of the example action.
struct ActionTerm {
  ElementaryTensor functional;
  RealFunction g;
  GridPointMap reference;
};

/// Indexed by frame index; times without a term hold std::nullopt.
using ActionTerms = std::vector<std::optional<ActionTerm>>;

/// g_t(f_t(alpha - tau_t)) for one time and one grid map.
double action_term_value(const ActionTerm& term, const GridPointMap& alpha);

/// S_T(alpha) = sum_{t in T} g_t(f_t(alpha_t - tau_t)). Throws DomainError
/// when a time of T has no term.
GridFunction example_action(const GridEvolutionSpace& grid, TimeSet t,
                            const ActionTerms& terms);

}  // namespace evolint
