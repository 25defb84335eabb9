#include "evolint/evolution_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "evolint/errors.hpp"

namespace evolint {

std::vector<std::size_t> TimeSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(size());
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
  return out;
}

// --- TimeFrame ------------------------------------------------------------

TimeFrame::TimeFrame(std::vector<std::int64_t> labels, std::vector<double> weights,
                     std::optional<std::vector<TimeSet>> sigma0) {
  if (labels.size() != weights.size())
    throw StructuralError("TimeFrame: one weight per time label required");
  if (labels.size() > kMaxTimes) throw StructuralError("TimeFrame: too many times");
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return labels[a] < labels[b]; });
  for (const std::size_t i : order) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i]))
      throw StructuralError("TimeFrame: weights must be finite and nonnegative");
    if (!labels_.empty() && labels_.back() == labels[i])
      throw StructuralError("TimeFrame: duplicate time label");
    labels_.push_back(labels[i]);
    weights_.push_back(weights[i]);
  }

  if (sigma0) {
    // Masks refer to the sorted frame.
    std::vector<TimeSet> family = *sigma0;
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    for (const TimeSet t : family)
      if (!t.subset_of(all())) throw DomainError("Sigma_0 member not inside the frame");
    for (const TimeSet a : family)
      for (const TimeSet b : family)
        if (!std::binary_search(family.begin(), family.end(), a | b))
          throw PreconditionError("Sigma_0 is not closed under union");
    sigma0_ = std::move(family);
  }
}

std::size_t TimeFrame::index_of(std::int64_t label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    std::ostringstream os;
    os << "time label " << label << " is not in the frame";
    throw DomainError(os.str());
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

TimeSet TimeFrame::subset(std::span<const std::int64_t> labels) const {
  std::uint64_t mask = 0;
  for (const std::int64_t l : labels) mask |= std::uint64_t{1} << index_of(l);
  return TimeSet(mask);
}

std::vector<std::int64_t> TimeFrame::labels_of(TimeSet t) const {
  std::vector<std::int64_t> out;
  for (const std::size_t i : t.indices()) out.push_back(labels_.at(i));
  return out;
}

double TimeFrame::measure(TimeSet t) const {
  double total = 0.0;
  for (const std::size_t i : t.indices()) total += weights_.at(i);
  return total;
}

bool TimeFrame::admissible(TimeSet t) const {
  if (!t.subset_of(all())) return false;
  if (!sigma0_) return true;
  return std::binary_search(sigma0_->begin(), sigma0_->end(), t);
}

void TimeFrame::require_admissible(TimeSet t, const char* what) const {
  if (!admissible(t)) {
    std::ostringstream os;
    os << what << ": subset {";
    const auto ls = t.subset_of(all()) ? labels_of(t) : std::vector<std::int64_t>{};
    for (std::size_t i = 0; i < ls.size(); ++i) os << (i ? "," : "") << ls[i];
    os << "} is not in Sigma_0";
    throw DomainError(os.str());
  }
}

std::vector<TimeSet> TimeFrame::sigma0() const {
  if (sigma0_) return *sigma0_;
  std::vector<TimeSet> out;
  const std::uint64_t n = std::uint64_t{1} << size();
  out.reserve(n);
  for (std::uint64_t m = 0; m < n; ++m) out.emplace_back(m);
  return out;
}

// --- PointSet -------------------------------------------------------------

PointSet::PointSet(TimeSet domain, std::size_t universe,
                   std::span<const std::size_t> members)
    : domain_(domain), mask_(universe, false) {
  for (const std::size_t m : members) {
    if (m >= universe) {
      std::ostringstream os;
      os << "point index " << m << " is not in points(T) (size " << universe << ")";
      throw DomainError(os.str());
    }
    mask_[m] = true;
  }
}

PointSet PointSet::none(TimeSet domain, std::size_t universe) {
  return {domain, std::vector<bool>(universe, false)};
}

PointSet PointSet::all(TimeSet domain, std::size_t universe) {
  return {domain, std::vector<bool>(universe, true)};
}

PointSet PointSet::from_code(TimeSet domain, std::size_t universe, std::uint64_t code) {
  if (universe > 64) throw DomainError("PointSet::from_code: universe exceeds 64 points");
  std::vector<bool> mask(universe);
  for (std::size_t j = 0; j < universe; ++j) mask[j] = (code >> j) & 1U;
  return {domain, std::move(mask)};
}

std::size_t PointSet::count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
}

std::vector<std::size_t> PointSet::members() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(i);
  return out;
}

void PointSet::require_compatible(const PointSet& other) const {
  if (domain_ != other.domain_ || mask_.size() != other.mask_.size())
    throw DomainError("point sets live over different subsets");
}

PointSet PointSet::intersect(const PointSet& other) const {
  require_compatible(other);
  std::vector<bool> m(mask_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] && other.mask_[i];
  return {domain_, std::move(m)};
}

PointSet PointSet::unite(const PointSet& other) const {
  require_compatible(other);
  std::vector<bool> m(mask_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = mask_[i] || other.mask_[i];
  return {domain_, std::move(m)};
}

PointSet PointSet::complement() const {
  std::vector<bool> m(mask_.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = !mask_[i];
  return {domain_, std::move(m)};
}

// --- GridFunction ---------------------------------------------------------

double GridFunction::sup_norm() const {
  double best = 0.0;
  for (const Complex v : values_) best = std::max(best, std::abs(v));
  return best;
}

GridFunction GridFunction::conj() const {
  std::vector<Complex> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(),
                 [](Complex v) { return std::conj(v); });
  return {domain_, std::move(out)};
}

void GridFunction::require_compatible(const GridFunction& other) const {
  if (domain_ != other.domain_ || values_.size() != other.values_.size())
    throw DomainError("grid functions live over different subsets");
}

GridFunction GridFunction::operator*(const GridFunction& other) const {
  require_compatible(other);
  std::vector<Complex> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] * other.values_[i];
  return {domain_, std::move(out)};
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  require_compatible(other);
  std::vector<Complex> out(values_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = values_[i] + other.values_[i];
  return {domain_, std::move(out)};
}

// --- GridEvolutionSpace ---------------------------------------------------

GridEvolutionSpace::GridEvolutionSpace(TimeFrame frame,
                                       std::vector<std::vector<GridPointMap>> grids)
    : frame_(std::move(frame)),
      algebra_(grids.empty() || grids.front().empty() ? WStarAlgebra({1})
                                                      : grids.front().front().algebra()),
      grids_(std::move(grids)) {
  if (grids_.size() != frame_.size())
    throw StructuralError("GridEvolutionSpace: one grid per time required");
  for (const auto& g : grids_) {
    if (g.empty()) throw StructuralError("GridEvolutionSpace: grids must be nonempty");
    for (const GridPointMap& m : g)
      require_same_algebra(algebra_, m.algebra(), "GridEvolutionSpace");
  }
  (void)point_count(full());
}

std::size_t GridEvolutionSpace::point_count(TimeSet t) const {
  if (!t.subset_of(full())) throw DomainError("subset is not inside the frame");
  std::size_t n = 1;
  for (const std::size_t i : t.indices()) {
    if (__builtin_mul_overflow(n, grids_[i].size(), &n))
      throw CapExceeded("grid point count overflows");
  }
  return n;
}

std::size_t GridEvolutionSpace::linear_index(const GridPoint& point) const {
  const auto times = point.domain.indices();
  if (!point.domain.subset_of(full()) || times.size() != point.coords.size())
    throw DomainError("grid point does not match its domain");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const std::size_t radix = grids_[times[k]].size();
    if (point.coords[k] >= radix) throw DomainError("grid coordinate out of range");
    idx = idx * radix + point.coords[k];
  }
  return idx;
}

GridPoint GridEvolutionSpace::point_at(TimeSet t, std::size_t index) const {
  const std::size_t count = point_count(t);
  if (index >= count) throw DomainError("linear index out of range");
  const auto times = t.indices();
  GridPoint p{t, std::vector<std::size_t>(times.size())};
  for (std::size_t k = times.size(); k-- > 0;) {
    const std::size_t radix = grids_[times[k]].size();
    p.coords[k] = index % radix;
    index /= radix;
  }
  return p;
}

std::vector<GridPoint> GridEvolutionSpace::enumerate_points(TimeSet t) const {
  const std::size_t count = point_count(t);
  std::vector<GridPoint> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(point_at(t, i));
  return out;
}

GridPoint GridEvolutionSpace::restrict_point(const GridPoint& x, TimeSet to) const {
  if (!to.subset_of(x.domain)) throw DomainError("restrict_point: T is not inside the point's domain");
  (void)linear_index(x);
  GridPoint out{to, {}};
  const auto times = x.domain.indices();
  for (std::size_t k = 0; k < times.size(); ++k)
    if (to.contains(times[k])) out.coords.push_back(x.coords[k]);
  return out;
}

std::size_t GridEvolutionSpace::restrict_index(TimeSet from, std::size_t index,
                                               TimeSet to) const {
  if (!to.subset_of(from)) throw DomainError("restrict_index: target is not inside source");
  const auto times = from.indices();
  // Decode least significant first, keep the digits that survive, then
  // re-encode.
  std::size_t digits[TimeFrame::kMaxTimes];
  for (std::size_t k = times.size(); k-- > 0;) {
    const std::size_t radix = grids_[times[k]].size();
    digits[k] = index % radix;
    index /= radix;
  }
  std::size_t out = 0;
  for (std::size_t k = 0; k < times.size(); ++k)
    if (to.contains(times[k])) out = out * grids_[times[k]].size() + digits[k];
  return out;
}

PointSet GridEvolutionSpace::preimage(const PointSet& v, std::optional<TimeSet> from) const {
  const TimeSet source = from.value_or(full());
  if (v.universe() != point_count(v.domain()))
    throw DomainError("preimage: point set does not match its domain");
  const std::size_t n = point_count(source);
  std::vector<bool> mask(n);
  for (std::size_t i = 0; i < n; ++i)
    mask[i] = v.contains(restrict_index(source, i, v.domain()));
  return {source, std::move(mask)};
}

GridFunction GridEvolutionSpace::constant(TimeSet t, Complex value) const {
  return {t, std::vector<Complex>(point_count(t), value)};
}

GridFunction GridEvolutionSpace::indicator(const PointSet& v) const {
  if (v.universe() != point_count(v.domain()))
    throw DomainError("indicator: point set does not match its domain");
  std::vector<Complex> values(v.universe());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = v.contains(i) ? 1.0 : 0.0;
  return {v.domain(), std::move(values)};
}

void GridEvolutionSpace::require_function(const GridFunction& f) const {
  if (f.size() != point_count(f.domain()))
    throw DomainError("grid function does not have one value per grid point");
}

GridFunction pullback(const GridEvolutionSpace& space, const GridFunction& f,
                      std::optional<TimeSet> target) {
  const TimeSet to = target.value_or(space.full());
  space.require_function(f);
  if (!f.domain().subset_of(to)) throw DomainError("pullback: target does not contain T");
  const std::size_t n = space.point_count(to);
  std::vector<Complex> values(n);
  for (std::size_t i = 0; i < n; ++i)
    values[i] = f[space.restrict_index(to, i, f.domain())];
  return {to, std::move(values)};
}

}  // namespace evolint
