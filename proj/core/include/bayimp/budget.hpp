#pragma once

#include <string>
#include <string_view>

#include "bayimp/errors.hpp"
#include "bayimp/rational.hpp"

namespace bayimp {

/// Counts evaluated candidates per search lane and throws BudgetExceeded
/// once a lane's limit is hit. Deception enumeration and reply search have
/// their own limits; everything else shares the generic lane.
class Budget {
 public:
  static constexpr long long kDefaultLimit = 10'000'000;

  explicit Budget(long long generic = kDefaultLimit)
      : generic_{generic}, deceptions_{generic}, replies_{generic} {}

  void set_deception_limit(long long limit) { deceptions_.limit = limit; }
  void set_reply_limit(long long limit) { replies_.limit = limit; }

  void charge(long long amount, const char* dimension) {
    Lane& lane = lane_for(dimension);
    lane.used += amount;
    if (lane.used > lane.limit) throw BudgetExceeded(dimension, lane.limit);
  }

  /// Pre-flight check for searches whose size is known up front.
  void require(const Int& candidates, const char* dimension) {
    const Lane& lane = lane_for(dimension);
    if (candidates > static_cast<long>(lane.limit - lane.used)) {
      throw BudgetExceeded(dimension, lane.limit);
    }
  }

  long long used(const char* dimension) { return lane_for(dimension).used; }

 private:
  struct Lane {
    long long limit;
    long long used = 0;
  };

  Lane& lane_for(std::string_view dimension) {
    if (dimension == "deception enumeration") return deceptions_;
    if (dimension == "reply search") return replies_;
    return generic_;
  }

  Lane generic_;
  Lane deceptions_;
  Lane replies_;
};

}  // namespace bayimp
