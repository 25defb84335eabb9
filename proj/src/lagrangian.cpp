#include "evolint/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

namespace {

constexpr std::size_t kExhaustiveEvaluations = 10000;
constexpr std::size_t kExhaustivePairs = 1000000;

std::vector<TimeSet> subsets_in_sigma0(const TimeFrame& frame, TimeSet t) {
  std::vector<TimeSet> out;
  // Enumerate submasks of t in increasing order.
  const std::uint64_t m = t.mask();
  std::uint64_t s = 0;
  while (true) {
    const TimeSet sub(s);
    if (!sub.empty() && frame.admissible(sub)) out.push_back(sub);
    if (s == m) break;
    s = (s - m) & m;
  }
  return out;
}

}  // namespace

Lagrangian::Lagrangian(Evaluator evaluator, bool local)
    : evaluator_(std::move(evaluator)), local_(local) {}

Lagrangian Lagrangian::local(LocalEvaluator evaluator) {
  return Lagrangian(
      [ev = std::move(evaluator)](TimeSet t, const GridPoint& alpha, std::size_t time) {
        const std::vector<std::size_t> times = t.indices();
        const auto it = std::lower_bound(times.begin(), times.end(), time);
        if (it == times.end() || *it != time || alpha.domain != t)
          throw DomainError("Lagrangian evaluated at a time outside T");
        return ev(time, alpha.coords[static_cast<std::size_t>(it - times.begin())]);
      },
      true);
}

Lagrangian Lagrangian::table(std::vector<std::vector<double>> values) {
  return local([v = std::move(values)](std::size_t time, std::size_t coord) {
    return v.at(time).at(coord);
  });
}

Lagrangian Lagrangian::from_terms(const GridEvolutionSpace& grid, const ActionTerms& terms,
                                  bool divide_by_weight) {
  const TimeFrame& frame = grid.frame();
  std::vector<std::vector<double>> values(frame.size());
  for (std::size_t t = 0; t < frame.size(); ++t) {
    if (t >= terms.size() || !terms[t]) {
      std::ostringstream os;
      os << "Lagrangian: no term for time " << frame.label(t);
      throw DomainError(os.str());
    }
    const double w = frame.weight(t);
    if (divide_by_weight && !(w > 0.0))
      throw DomainError("Lagrangian: dividing by weight needs positive weights");
    for (const GridPointMap& alpha : grid.grid(t)) {
      const double v = action_term_value(*terms[t], alpha);
      values[t].push_back(divide_by_weight ? v / w : v);
    }
  }
  return table(std::move(values));
}

// --- Action ---------------------------------------------------------------

Action::Action(std::shared_ptr<const GridEvolutionSpace> grid,
               std::map<TimeSet, GridFunction> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  for (const TimeSet t : grid_->frame().sigma0()) {
    const auto it = values_.find(t);
    if (it == values_.end()) throw DomainError("action has no entry for a member of Sigma_0");
    grid_->require_function(it->second);
  }
}

const GridFunction& Action::at(TimeSet t) const {
  grid_->frame().require_admissible(t, "Action::at");
  return values_.at(t);
}

GridFunction action_from_lagrangian(const GridEvolutionSpace& grid, const Lagrangian& l,
                                    TimeSet t) {
  const TimeFrame& frame = grid.frame();
  frame.require_admissible(t, "action_from_lagrangian");
  const std::vector<std::size_t> times = t.indices();
  const std::size_t n = grid.point_count(t);
  std::vector<Complex> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GridPoint alpha = grid.point_at(t, i);
    double s = 0.0;
    for (const std::size_t ti : times) {
      const double v = l(t, alpha, ti);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "Lagrangian value at time " << frame.label(ti) << " is not finite";
        throw DataError(os.str());
      }
      s += frame.weight(ti) * v;
    }
    values[i] = s;
  }
  return {t, std::move(values)};
}

Action action_of(std::shared_ptr<const GridEvolutionSpace> grid, const Lagrangian& l) {
  std::map<TimeSet, GridFunction> values;
  for (const TimeSet t : grid->frame().sigma0())
    values.emplace(t, action_from_lagrangian(*grid, l, t));
  return {std::move(grid), std::move(values)};
}

ActionWeight weight_from_action(const Action& s) {
  std::map<TimeSet, GridFunction> values;
  for (const auto& [t, f] : s.values()) {
    std::vector<Complex> u(f.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (f[i].imag() != 0.0) throw DataError("weight_from_action: action is not real");
      u[i] = std::polar(1.0, f[i].real());
    }
    values.emplace(t, GridFunction(t, std::move(u)));
  }
  return {s.grid_ptr(), std::move(values)};
}

// --- checks ---------------------------------------------------------------

LagrangianReport verify_lagrangian(const GridEvolutionSpace& grid, const Lagrangian& l,
                                   double tol, std::uint64_t seed) {
  const TimeFrame& frame = grid.frame();
  LagrangianReport report;
  report.tolerance = tol;

  struct Case {
    TimeSet t;
    std::vector<TimeSet> subs;
  };
  std::vector<Case> cases;
  std::size_t total = 0;
  for (const TimeSet t : frame.sigma0()) {
    if (t.empty()) continue;
    Case c{t, subsets_in_sigma0(frame, t)};
    std::size_t per_point = 0;
    for (const TimeSet sub : c.subs) per_point += 2 * sub.size();
    total += per_point * grid.point_count(t);
    cases.push_back(std::move(c));
  }

  auto check = [&](TimeSet t, std::size_t index, TimeSet sub, std::size_t time) {
    const GridPoint alpha = grid.point_at(t, index);
    const GridPoint restricted = grid.restrict_point(alpha, sub);
    const double a = l(t, alpha, time);
    const double b = l(sub, restricted, time);
    report.evaluations += 2;
    if (!std::isfinite(a) || !std::isfinite(b)) {
      report.finite = false;
      return;
    }
    report.restriction = std::max(report.restriction, std::abs(a - b));
  };

  if (total <= kExhaustiveEvaluations) {
    for (const Case& c : cases) {
      const std::size_t n = grid.point_count(c.t);
      for (std::size_t i = 0; i < n; ++i)
        for (const TimeSet sub : c.subs)
          for (const std::size_t time : sub.indices()) check(c.t, i, sub, time);
    }
    return report;
  }

  report.sampled = true;
  SplitMix64 rng(seed);
  while (report.evaluations < kExhaustiveEvaluations && !cases.empty()) {
    const Case& c = cases[rng.below(cases.size())];
    const std::size_t i = rng.below(grid.point_count(c.t));
    const TimeSet sub = c.subs[rng.below(c.subs.size())];
    const std::vector<std::size_t> times = sub.indices();
    check(c.t, i, sub, times[rng.below(times.size())]);
  }
  return report;
}

double action_additivity_deviation(const Action& s) {
  const GridEvolutionSpace& grid = s.grid();
  const TimeFrame& frame = grid.frame();
  const TimeSet full = grid.full();
  const std::size_t n = grid.point_count(full);
  const std::vector<TimeSet> sets = frame.sigma0();
  double worst = 0.0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i; j < sets.size(); ++j) {
      const TimeSet t1 = sets[i];
      const TimeSet t2 = sets[j];
      if (frame.measure(t1 & t2) != 0.0) continue;
      const TimeSet joined = t1 | t2;
      const GridFunction& s1 = s.at(t1);
      const GridFunction& s2 = s.at(t2);
      const GridFunction& s12 = s.at(joined);
      for (std::size_t x = 0; x < n; ++x) {
        const Complex lhs = s12[grid.restrict_index(full, x, joined)];
        const Complex rhs =
            s1[grid.restrict_index(full, x, t1)] + s2[grid.restrict_index(full, x, t2)];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

double lipschitz_violation(const Action& s, const Lagrangian& l) {
  const GridEvolutionSpace& grid = s.grid();
  const TimeFrame& frame = grid.frame();
  double worst = 0.0;
  for (const TimeSet t : frame.sigma0()) {
    if (t.empty()) continue;
    const std::size_t n = grid.point_count(t);
    if (n * n > kExhaustivePairs) continue;
    const std::vector<std::size_t> times = t.indices();
    const double mu = frame.measure(t);
    const GridFunction& st = s.at(t);
    std::vector<std::vector<double>> lag(n);
    for (std::size_t i = 0; i < n; ++i) {
      const GridPoint alpha = grid.point_at(t, i);
      for (const std::size_t ti : times) lag[i].push_back(l(t, alpha, ti));
    }
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        double sup = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k)
          sup = std::max(sup, std::abs(lag[a][k] - lag[b][k]));
        const double excess = std::abs(st[a] - st[b]) - sup * mu;
        worst = std::max(worst, excess);
      }
    }
  }
  return worst;
}

}  // namespace evolint
