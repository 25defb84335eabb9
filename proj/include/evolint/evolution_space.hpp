#pragma once

// Finite grids standing in for the evolution spaces X_T: a time frame with
// its measure, per-time grids of maps, mixed-radix point indexing, the
// restriction maps and the pullback of grid functions.

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evolint/algebra.hpp"

namespace evolint {

/// Subset of a time frame; bit i stands for the i-th time in ascending
/// label order.
class TimeSet {
 public:
  constexpr TimeSet() = default;
  constexpr explicit TimeSet(std::uint64_t mask) : mask_(mask) {}

  static constexpr TimeSet single(std::size_t index) {
    return TimeSet(std::uint64_t{1} << index);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const { return std::popcount(mask_); }
  constexpr bool contains(std::size_t index) const { return (mask_ >> index) & 1U; }
  constexpr bool subset_of(TimeSet other) const { return (mask_ & ~other.mask_) == 0; }
  /// Frame indices in ascending order.
  std::vector<std::size_t> indices() const;

  constexpr TimeSet operator|(TimeSet o) const { return TimeSet(mask_ | o.mask_); }
  constexpr TimeSet operator&(TimeSet o) const { return TimeSet(mask_ & o.mask_); }
  constexpr TimeSet minus(TimeSet o) const { return TimeSet(mask_ & ~o.mask_); }
  friend constexpr bool operator==(TimeSet, TimeSet) = default;
  friend constexpr auto operator<=>(TimeSet, TimeSet) = default;

 private:
  std::uint64_t mask_ = 0;
};

/// Finite time set with nonnegative weights (the measure mu) and the
/// admissible family Sigma_0.
class TimeFrame {
 public:
  static constexpr std::size_t kMaxTimes = 20;

  /// Labels must be distinct; they are sorted ascending together with their
  /// weights. An absent sigma0 means all subsets. An explicit sigma0 must
  /// be closed under union.
  TimeFrame(std::vector<std::int64_t> labels, std::vector<double> weights,
            std::optional<std::vector<TimeSet>> sigma0 = std::nullopt);

  std::size_t size() const { return labels_.size(); }
  std::span<const std::int64_t> labels() const { return labels_; }
  std::int64_t label(std::size_t index) const { return labels_.at(index); }
  double weight(std::size_t index) const { return weights_.at(index); }
  /// Throws DomainError for labels not in the frame.
  std::size_t index_of(std::int64_t label) const;

  TimeSet all() const { return TimeSet((std::uint64_t{1} << size()) - 1); }
  TimeSet subset(std::span<const std::int64_t> labels) const;
  std::vector<std::int64_t> labels_of(TimeSet t) const;

  /// mu(T), summed in ascending time order.
  double measure(TimeSet t) const;
  bool admissible(TimeSet t) const;
  /// Throws DomainError unless t is in Sigma_0.
  void require_admissible(TimeSet t, const char* what) const;
  /// Sigma_0 in ascending mask order.
  std::vector<TimeSet> sigma0() const;
  bool sigma0_is_powerset() const { return !sigma0_.has_value(); }

 private:
  std::vector<std::int64_t> labels_;
  std::vector<double> weights_;
  std::optional<std::vector<TimeSet>> sigma0_;
};

/// A point of the grid over `domain`: one grid coordinate per time of the
/// domain, in ascending time order.
struct GridPoint {
  TimeSet domain;
  std::vector<std::size_t> coords;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Subset V of points(T), as a membership mask over the linear indices.
class PointSet {
 public:
  /// Throws DomainError if a member index is not below `universe`.
  PointSet(TimeSet domain, std::size_t universe, std::span<const std::size_t> members);
  PointSet(TimeSet domain, std::vector<bool> mask)
      : domain_(domain), mask_(std::move(mask)) {}

  static PointSet none(TimeSet domain, std::size_t universe);
  static PointSet all(TimeSet domain, std::size_t universe);
  /// Bit j of `code` selects point j. universe must be at most 64.
  static PointSet from_code(TimeSet domain, std::size_t universe, std::uint64_t code);

  TimeSet domain() const { return domain_; }
  std::size_t universe() const { return mask_.size(); }
  bool contains(std::size_t index) const { return mask_.at(index); }
  std::size_t count() const;
  std::vector<std::size_t> members() const;
  const std::vector<bool>& mask() const { return mask_; }

  PointSet intersect(const PointSet& other) const;
  PointSet unite(const PointSet& other) const;
  PointSet complement() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  void require_compatible(const PointSet& other) const;

  TimeSet domain_;
  std::vector<bool> mask_;
};

/// Complex function on points(T), indexed by linear index.
class GridFunction {
 public:
  GridFunction(TimeSet domain, std::vector<Complex> values)
      : domain_(domain), values_(std::move(values)) {}

  TimeSet domain() const { return domain_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<Complex>& values() const { return values_; }
  Complex operator[](std::size_t i) const { return values_[i]; }

  double sup_norm() const;
  GridFunction conj() const;
  GridFunction operator*(const GridFunction& other) const;
  GridFunction operator+(const GridFunction& other) const;

 private:
  void require_compatible(const GridFunction& other) const;

  TimeSet domain_;
  std::vector<Complex> values_;
};

class GridEvolutionSpace {
 public:
  /// One nonempty grid per time of the frame; all maps on one algebra.
  GridEvolutionSpace(TimeFrame frame, std::vector<std::vector<GridPointMap>> grids);

  const TimeFrame& frame() const { return frame_; }
  const WStarAlgebra& algebra() const { return algebra_; }
  TimeSet full() const { return frame_.all(); }
  const std::vector<GridPointMap>& grid(std::size_t time_index) const {
    return grids_.at(time_index);
  }
  std::size_t grid_size(std::size_t time_index) const { return grids_.at(time_index).size(); }

  /// prod_{t in T} |G_t|; 1 for the empty set. Throws CapExceeded on overflow.
  std::size_t point_count(TimeSet t) const;

  /// Mixed-radix index, earliest time most significant.
  std::size_t linear_index(const GridPoint& point) const;
  GridPoint point_at(TimeSet t, std::size_t index) const;
  std::vector<GridPoint> enumerate_points(TimeSet t) const;

  /// (x_s)_{s in from} -> (x_s)_{s in to}. Throws DomainError unless
  /// `to` is a subset of x's domain.
  GridPoint restrict_point(const GridPoint& x, TimeSet to) const;
  /// Index form of restrict_point.
  std::size_t restrict_index(TimeSet from, std::size_t index, TimeSet to) const;
  /// Preimage of V (a subset of points(V.domain())) under restriction from
  /// `from` (default: the full frame).
  PointSet preimage(const PointSet& v, std::optional<TimeSet> from = std::nullopt) const;

  PointSet empty_set(TimeSet t) const { return PointSet::none(t, point_count(t)); }
  PointSet full_set(TimeSet t) const { return PointSet::all(t, point_count(t)); }
  PointSet point_set(TimeSet t, std::span<const std::size_t> members) const {
    return {t, point_count(t), members};
  }

  GridFunction constant(TimeSet t, Complex value) const;
  /// Indicator function of V.
  GridFunction indicator(const PointSet& v) const;
  /// Throws DomainError if f does not have one value per point of its domain.
  void require_function(const GridFunction& f) const;

 private:
  TimeFrame frame_;
  WStarAlgebra algebra_;
  std::vector<std::vector<GridPointMap>> grids_;
};

/// (pullback f)(x) = f(restrict_point(x, T)) on points(target), where
/// target defaults to the full frame and must contain f's domain.
GridFunction pullback(const GridEvolutionSpace& space, const GridFunction& f,
                      std::optional<TimeSet> target = std::nullopt);

}  // namespace evolint
