#pragma once

// Lagrangians on the grid, their actions S_T = integral over T of L_{T,alpha}
// d mu, and the induced action weights u_T = exp(i S_T).

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "evolint/dynamics.hpp"

namespace evolint {

class Lagrangian {
 public:
  /// (T, alpha in points(T), frame index t in T) -> L_{T,alpha}(t).
  using Evaluator = std::function<double(TimeSet, const GridPoint&, std::size_t)>;
  /// (frame index t, grid coordinate of alpha_t) -> value.
  using LocalEvaluator = std::function<double(std::size_t, std::size_t)>;

  Lagrangian(Evaluator evaluator, bool local);

  /// Depends only on (t, alpha_t); restriction consistent by construction.
  static Lagrangian local(LocalEvaluator evaluator);
  /// values[t][g] for frame index t and grid coordinate g.
  static Lagrangian table(std::vector<std::vector<double>> values);
  /// L(t, alpha_t) = g_t(f_t(alpha_t - tau_t)), divided by weight(t) when
  /// requested (all weights must then be positive).
  static Lagrangian from_terms(const GridEvolutionSpace& grid, const ActionTerms& terms,
                               bool divide_by_weight);

  double operator()(TimeSet t, const GridPoint& alpha, std::size_t time) const {
    return evaluator_(t, alpha, time);
  }
  bool is_local() const { return local_; }

 private:
  Evaluator evaluator_;
  bool local_;
};

/// T -> S_T for every T in Sigma_0.
class Action {
 public:
  Action(std::shared_ptr<const GridEvolutionSpace> grid, std::map<TimeSet, GridFunction> values);

  const GridEvolutionSpace& grid() const { return *grid_; }
  const std::shared_ptr<const GridEvolutionSpace>& grid_ptr() const { return grid_; }
  const GridFunction& at(TimeSet t) const;
  const std::map<TimeSet, GridFunction>& values() const { return values_; }

 private:
  std::shared_ptr<const GridEvolutionSpace> grid_;
  std::map<TimeSet, GridFunction> values_;
};

/// S_T(alpha) = sum_{t in T} weight(t) L_{T,alpha}(t), ascending t.
/// Throws DomainError for T outside Sigma_0, DataError on non-finite values.
GridFunction action_from_lagrangian(const GridEvolutionSpace& grid, const Lagrangian& l,
                                    TimeSet t);

Action action_of(std::shared_ptr<const GridEvolutionSpace> grid, const Lagrangian& l);

/// u_T = exp(i S_T). S must be real-valued.
ActionWeight weight_from_action(const Action& s);

struct LagrangianReport {
  double restriction = 0.0;  // max |L_{T,a}(t) - L_{T',a|T'}(t)|
  std::size_t evaluations = 0;
  bool sampled = false;
  bool finite = true;
  double tolerance = 0.0;
  /// Continuity of alpha -> L_{T,alpha} holds trivially on a finite grid.
  static constexpr const char* kContinuity = "satisfied by discretization";

  bool passed() const { return finite && restriction <= tolerance; }
};

/// Restriction consistency over all (T, T' subset of T) in Sigma_0,
/// exhaustive up to 10^4 evaluations and seeded sampling beyond.
LagrangianReport verify_lagrangian(const GridEvolutionSpace& grid, const Lagrangian& l,
                                   double tol, std::uint64_t seed = 0);

/// max |S_{T1 u T2}(iota a) - S_{T1}(iota a) - S_{T2}(iota a)| over
/// mu-disjoint pairs in Sigma_0 and full-grid points a.
double action_additivity_deviation(const Action& s);

/// max over T and point pairs of
/// |S_T(a) - S_T(b)| - max_t |L_{T,a}(t) - L_{T,b}(t)| mu(T), clamped at 0.
double lipschitz_violation(const Action& s, const Lagrangian& l);

}  // namespace evolint
