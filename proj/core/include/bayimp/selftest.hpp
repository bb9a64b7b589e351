#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bayimp/generator.hpp"

namespace bayimp {

struct SelftestOptions {
  std::uint64_t seed = 1;
  int ic_cases = 200;        // averaging/posterior suite size
  int synthesis_cases = 50;  // signal-construction suite size
  int consistency_cases = 40;
  int grid_points = 1000;    // accuracy grid resolution for the cross-check
  GenParams random_params;   // used by the averaging suite
  GenParams enumerable_params = GenParams::small_enumerable();
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  int cases = 0;
  std::string detail;  // first failure description
};

struct SelftestResult {
  std::vector<SuiteResult> suites;
  bool all_passed() const {
    for (const auto& s : suites) {
      if (!s.passed) return false;
    }
    return true;
  }
};

/// Property suites over randomly generated scenarios:
///   - posterior averaging: incentive compatibility in every signal
///     realization implies it without signals, and posterior-weighted
///     expected utilities average back to the prior-conditional one exactly;
///   - signal synthesis: whenever a potential pair exists, the synthesized
///     binary signal undermines in both realizations, and the exact
///     feasible-accuracy set agrees with a dense grid of direct checks;
///   - verdict consistency: the no-signal full-implementability verdict
///     coincides with (incentive compatibility && empty residual).
SelftestResult run_selftest(const SelftestOptions& options);

std::string selftest_to_text(const SelftestResult& result);

}  // namespace bayimp
