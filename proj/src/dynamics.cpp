#include "evolint/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

namespace {

constexpr std::size_t kExhaustivePoints = 10000;
constexpr std::size_t kSampledPoints = 1000;
constexpr std::size_t kAtomSumMaxDimension = 512;

std::vector<std::size_t> full_points_to_check(const GridEvolutionSpace& grid,
                                              std::uint64_t seed, bool& sampled) {
  const std::size_t n = grid.point_count(grid.full());
  std::vector<std::size_t> out;
  if (n <= kExhaustivePoints) {
    sampled = false;
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  sampled = true;
  SplitMix64 rng(seed);
  out.reserve(kSampledPoints);
  for (std::size_t s = 0; s < kSampledPoints; ++s) out.push_back(rng.below(n));
  return out;
}

}  // namespace

// --- ActionWeight ---------------------------------------------------------

ActionWeight::ActionWeight(std::shared_ptr<const GridEvolutionSpace> grid,
                           std::map<TimeSet, GridFunction> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  const TimeFrame& frame = grid_->frame();
  for (const TimeSet t : frame.sigma0()) {
    const auto it = values_.find(t);
    if (it == values_.end()) throw DomainError("action weight has no entry for a member of Sigma_0");
    if (it->second.domain() != t) throw DomainError("action weight entry lives over the wrong subset");
    grid_->require_function(it->second);
  }
  for (const auto& [t, f] : values_) frame.require_admissible(t, "ActionWeight");
}

ActionWeight ActionWeight::trivial(std::shared_ptr<const GridEvolutionSpace> grid) {
  std::map<TimeSet, GridFunction> values;
  for (const TimeSet t : grid->frame().sigma0()) values.emplace(t, grid->constant(t, 1.0));
  return {std::move(grid), std::move(values)};
}

const GridFunction& ActionWeight::at(TimeSet t) const {
  grid_->frame().require_admissible(t, "ActionWeight::at");
  return values_.at(t);
}

ActionWeight ActionWeight::with_value(TimeSet t, std::size_t index, Complex value) const {
  std::map<TimeSet, GridFunction> values = values_;
  const GridFunction& old = at(t);
  if (index >= old.size()) throw DomainError("with_value: index out of range");
  std::vector<Complex> v = old.values();
  v[index] = value;
  values.insert_or_assign(t, GridFunction(t, std::move(v)));
  return {grid_, std::move(values)};
}

// --- validation -----------------------------------------------------------

ActionWeightReport validate_action_weight(const ActionWeight& u, double tol,
                                          const std::vector<TimeSet>& family,
                                          std::uint64_t seed) {
  const GridEvolutionSpace& grid = u.grid();
  const TimeFrame& frame = grid.frame();
  std::vector<TimeSet> sets = family.empty() ? frame.sigma0() : family;
  for (const TimeSet t : sets) frame.require_admissible(t, "validate_action_weight");

  ActionWeightReport report;
  report.tolerance = tol;

  for (const TimeSet t : sets) {
    const GridFunction& f = u.at(t);
    const bool null = frame.measure(t) == 0.0;
    for (const Complex v : f.values()) {
      report.unitarity = std::max(report.unitarity, std::abs(std::abs(v) - 1.0));
      if (null) report.null_set = std::max(report.null_set, std::abs(v - 1.0));
    }
  }

  const TimeSet full = grid.full();
  const std::vector<std::size_t> points = full_points_to_check(grid, seed, report.sampled);
  report.points = points.size();
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      const TimeSet t1 = sets[i];
      const TimeSet t2 = sets[j];
      if (frame.measure(t1 & t2) != 0.0) continue;
      const TimeSet joined = t1 | t2;
      frame.require_admissible(joined, "validate_action_weight");
      const GridFunction& u1 = u.at(t1);
      const GridFunction& u2 = u.at(t2);
      const GridFunction& u12 = u.at(joined);
      ++report.pairs;
      for (const std::size_t x : points) {
        const Complex lhs = u12[grid.restrict_index(full, x, joined)];
        const Complex rhs =
            u1[grid.restrict_index(full, x, t1)] * u2[grid.restrict_index(full, x, t2)];
        report.cocycle = std::max(report.cocycle, std::abs(lhs - rhs));
      }
    }
  }
  return report;
}

// --- evolution unitaries --------------------------------------------------

EvolutionUnitary evolution_unitary(const ActionWeight& u, TimeSet t, const SpectralMeasure& e) {
  const GridEvolutionSpace& grid = u.grid();
  grid.frame().require_admissible(t, "evolution_unitary");
  if (t.empty()) {
    return {t, Operator(DiagonalOperator::identity(e.dimension()), e.conjugator())};
  }
  if (e.domain() == t) return {t, integrate(u.at(t), e)};
  if (e.domain() == grid.full()) return {t, integrate(u.at(t), pushforward(e, t))};
  throw DomainError("evolution_unitary: measure is neither E_T nor the full measure");
}

GroupLawReport check_group_law(const ActionWeight& u, TimeSet t1, TimeSet t2,
                               const SpectralMeasure& e, double tol) {
  const TimeFrame& frame = u.grid().frame();
  frame.require_admissible(t1, "check_group_law");
  frame.require_admissible(t2, "check_group_law");
  if (frame.measure(t1 & t2) != 0.0)
    throw PreconditionError("check_group_law: mu(T1 n T2) is not zero");
  const Operator a = evolution_unitary(u, t1, e).op;
  const Operator b = evolution_unitary(u, t2, e).op;
  const Operator joined = evolution_unitary(u, t1 | t2, e).op;

  GroupLawReport report{t1, t2, 0.0, tol};
  if (a.is_diagonal()) {
    report.deviation = distance(a * b, joined);
  } else {
    report.deviation = distance(joined, DenseOperator(a.dense() * b.dense()));
  }
  return report;
}

CommutantReport commutant_witness(const ActionWeight& u, const DenseOperator& conjugator,
                                  const SpectralMeasure& e, double tol) {
  require_unitary(conjugator, 1e-10, "commutant_witness");
  if (!e.is_diagonal() || e.domain() != u.grid().full())
    throw DomainError("commutant_witness: needs the unconjugated measure over the full frame");
  const SpectralMeasure conjugated = conjugate(conjugator, e);
  const std::vector<TimeSet> sets = u.grid().frame().sigma0();

  std::vector<Operator> original;
  std::vector<DenseOperator> moved;
  original.reserve(sets.size());
  moved.reserve(sets.size());

  CommutantReport report;
  report.tolerance = tol;
  for (const TimeSet t : sets) {
    original.push_back(evolution_unitary(u, t, e).op);
    const DenseOperator expected = conjugate(conjugator, original.back().dense());

    DenseOperator via_measure;
    if (t.empty() || e.dimension() > kAtomSumMaxDimension) {
      via_measure = evolution_unitary(u, t, conjugated).op.dense();
    } else {
      const SpectralMeasure et = pushforward(conjugated, t);
      const GridFunction& ut = u.at(t);
      const auto n = static_cast<Eigen::Index>(e.dimension());
      via_measure = DenseOperator::Zero(n, n);
      for (std::size_t b = 0; b < ut.size(); ++b) {
        const std::size_t member[] = {b};
        via_measure += ut[b] * et(PointSet(t, ut.size(), member)).dense();
      }
    }
    report.covariance = std::max(report.covariance, operator_norm(via_measure - expected));
    moved.push_back(std::move(via_measure));
  }

  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      report.pairwise_commutator =
          std::max(report.pairwise_commutator, commutator_norm(original[i], original[j]));
    const DenseOperator a = original[i].dense();
    for (std::size_t j = 0; j < sets.size(); ++j) {
      const double c = operator_norm(a * moved[j] - moved[j] * a);
      if (c > report.witness) {
        report.witness = c;
        report.witness_first = sets[i];
        report.witness_second = sets[j];
      }
    }
  }
  return report;
}

// --- example action -------------------------------------------------------

RealFunction parse_real_function(const std::string& name) {
  if (name == "abs") return RealFunction::kAbs;
  if (name == "abs2") return RealFunction::kAbsSquared;
  if (name == "real") return RealFunction::kRealPart;
  throw DomainError("unknown real function '" + name + "' (expected abs, abs2, real)");
}

std::string to_string(RealFunction g) {
  switch (g) {
    case RealFunction::kAbs: return "abs";
    case RealFunction::kAbsSquared: return "abs2";
    case RealFunction::kRealPart: return "real";
  }
  return "?";
}

double apply(RealFunction g, Complex z) {
  switch (g) {
    case RealFunction::kAbs: return std::abs(z);
    case RealFunction::kAbsSquared: return std::norm(z);
    case RealFunction::kRealPart: return z.real();
  }
  return 0.0;
}

double action_term_value(const ActionTerm& term, const GridPointMap& alpha) {
  return apply(term.g, functional_at(term.functional, alpha - term.reference));
}

GridFunction example_action(const GridEvolutionSpace& grid, TimeSet t,
                            const ActionTerms& terms) {
  const std::vector<std::size_t> times = t.indices();
  // Per-time value tables, then one sum per point in ascending time order.
  std::vector<std::vector<double>> table;
  table.reserve(times.size());
  for (const std::size_t ti : times) {
    if (ti >= terms.size() || !terms[ti]) {
      std::ostringstream os;
      os << "example_action: no (f_t, g_t, tau_t) for time " << grid.frame().label(ti);
      throw DomainError(os.str());
    }
    std::vector<double> row;
    for (const GridPointMap& alpha : grid.grid(ti)) row.push_back(action_term_value(*terms[ti], alpha));
    table.push_back(std::move(row));
  }
  const std::size_t n = grid.point_count(t);
  std::vector<Complex> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GridPoint p = grid.point_at(t, i);
    double s = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) s += table[k][p.coords[k]];
    values[i] = s;
  }
  return {t, std::move(values)};
}

}  // namespace evolint
