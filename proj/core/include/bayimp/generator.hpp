#pragma once

#include <random>
#include <string>

#include "bayimp/model.hpp"
#include "bayimp/scenario.hpp"
#include "bayimp/signal_scheme.hpp"

namespace bayimp {

/// Knobs for random-scenario generation used by the property suites and the
/// selftest command. Priors and likelihoods draw positive integer weights
/// and normalize exactly; utilities draw small rationals.
struct GenParams {
  int agents_min = 3;
  int agents_max = 4;
  int types_max = 3;
  int outcomes_min = 2;
  int outcomes_max = 5;
  int prior_weight_max = 6;
  int util_num_max = 8;
  int util_den_max = 4;
  int realizations_max = 3;
  int likelihood_weight_max = 5;

  /// n = 3, binary types: small enough for exhaustive equilibrium and reply
  /// scans in property tests.
  static GenParams small_enumerable();
};

GenParams parse_gen_params(const std::string& json_text);
std::string serialize_gen_params(const GenParams& params);

Environment random_environment(std::mt19937_64& rng, const GenParams& params);
Scf random_scf(std::mt19937_64& rng, const Environment& env);
SignalScheme random_scheme(std::mt19937_64& rng, const Environment& env,
                           const GenParams& params);
Scenario random_scenario(std::mt19937_64& rng, const GenParams& params,
                         bool with_signals);

}  // namespace bayimp
