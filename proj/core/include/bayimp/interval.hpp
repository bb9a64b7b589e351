#pragma once

#include <optional>
#include <vector>

#include "bayimp/rational.hpp"

namespace bayimp {

/// Interval of rationals with independently open/closed endpoints.
struct RatInterval {
  Rat lo;
  bool lo_open = true;
  Rat hi;
  bool hi_open = true;

  bool empty() const {
    if (lo > hi) return true;
    return lo == hi && (lo_open || hi_open);
  }
  bool contains(const Rat& x) const {
    if (x < lo || (x == lo && lo_open)) return false;
    if (x > hi || (x == hi && hi_open)) return false;
    return true;
  }
  Rat midpoint() const { return (lo + hi) / 2; }
  bool operator==(const RatInterval&) const = default;
};

/// Finite union of disjoint, non-touching intervals, kept sorted. Used for
/// exact solution sets of affine inequalities in the signal accuracy.
class RatIntervalSet {
 public:
  RatIntervalSet() = default;  // empty set
  static RatIntervalSet single(RatInterval iv);

  /// Solutions of a*x + b >= 0 (or > 0 when `strict`) within `domain`.
  static RatIntervalSet affine_at_least_zero(const Rat& a, const Rat& b,
                                             bool strict, const RatInterval& domain);

  void intersect_with(const RatIntervalSet& other);
  void unite_with(const RatIntervalSet& other);

  bool empty() const { return parts_.empty(); }
  bool contains(const Rat& x) const;
  const std::vector<RatInterval>& parts() const { return parts_; }

  /// Rightmost component; nullopt when empty.
  std::optional<RatInterval> last() const;

  bool operator==(const RatIntervalSet&) const = default;

 private:
  void normalize();
  std::vector<RatInterval> parts_;
};

}  // namespace bayimp
