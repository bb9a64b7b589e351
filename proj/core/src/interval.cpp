#include "bayimp/interval.hpp"

#include <algorithm>

namespace bayimp {

namespace {

std::optional<RatInterval> intersect(const RatInterval& a, const RatInterval& b) {
  RatInterval r;
  if (a.lo > b.lo || (a.lo == b.lo && a.lo_open)) {
    r.lo = a.lo;
    r.lo_open = a.lo_open;
  } else {
    r.lo = b.lo;
    r.lo_open = b.lo_open || (a.lo == b.lo && a.lo_open);
  }
  if (a.hi < b.hi || (a.hi == b.hi && a.hi_open)) {
    r.hi = a.hi;
    r.hi_open = a.hi_open;
  } else {
    r.hi = b.hi;
    r.hi_open = b.hi_open || (a.hi == b.hi && a.hi_open);
  }
  if (r.empty()) return std::nullopt;
  return r;
}

// Two intervals can be merged when they overlap or touch with at least one
// closed endpoint at the contact point. Assumes a.lo <= b.lo.
bool mergeable(const RatInterval& a, const RatInterval& b) {
  if (a.hi > b.lo) return true;
  if (a.hi < b.lo) return false;
  return !(a.hi_open && b.lo_open);
}

}  // namespace

RatIntervalSet RatIntervalSet::single(RatInterval iv) {
  RatIntervalSet s;
  if (!iv.empty()) s.parts_.push_back(std::move(iv));
  return s;
}

RatIntervalSet RatIntervalSet::affine_at_least_zero(const Rat& a, const Rat& b,
                                                    bool strict,
                                                    const RatInterval& domain) {
  if (a == 0) {
    const bool holds = strict ? (b > 0) : (b >= 0);
    return holds ? single(domain) : RatIntervalSet{};
  }
  Rat root = -b / a;
  RatInterval half;
  if (a > 0) {
    // x >= root (or > root when strict)
    half.lo = root;
    half.lo_open = strict;
    half.hi = domain.hi;
    half.hi_open = domain.hi_open;
  } else {
    half.lo = domain.lo;
    half.lo_open = domain.lo_open;
    half.hi = root;
    half.hi_open = strict;
  }
  auto clipped = intersect(half, domain);
  return clipped ? single(*clipped) : RatIntervalSet{};
}

void RatIntervalSet::intersect_with(const RatIntervalSet& other) {
  std::vector<RatInterval> out;
  for (const auto& a : parts_) {
    for (const auto& b : other.parts_) {
      if (auto r = intersect(a, b)) out.push_back(*r);
    }
  }
  parts_ = std::move(out);
  normalize();
}

void RatIntervalSet::unite_with(const RatIntervalSet& other) {
  parts_.insert(parts_.end(), other.parts_.begin(), other.parts_.end());
  normalize();
}

bool RatIntervalSet::contains(const Rat& x) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [&](const RatInterval& iv) { return iv.contains(x); });
}

std::optional<RatInterval> RatIntervalSet::last() const {
  if (parts_.empty()) return std::nullopt;
  return parts_.back();
}

void RatIntervalSet::normalize() {
  std::erase_if(parts_, [](const RatInterval& iv) { return iv.empty(); });
  std::sort(parts_.begin(), parts_.end(), [](const RatInterval& a, const RatInterval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return !a.lo_open && b.lo_open;
  });
  std::vector<RatInterval> merged;
  for (auto& iv : parts_) {
    if (!merged.empty() && mergeable(merged.back(), iv)) {
      RatInterval& prev = merged.back();
      if (iv.hi > prev.hi || (iv.hi == prev.hi && !iv.hi_open)) {
        prev.hi = iv.hi;
        prev.hi_open = iv.hi_open;
      }
    } else {
      merged.push_back(iv);
    }
  }
  parts_ = std::move(merged);
}

}  // namespace bayimp
