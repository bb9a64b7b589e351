#pragma once

#include <span>
#include <vector>

#include "bayimp/model.hpp"
#include "bayimp/rational.hpp"
#include "bayimp/signal_scheme.hpp"

namespace bayimp {

/// An agent's interim belief over the others' type profiles. Dense over the
/// others space; sums to exactly 1.
struct Belief {
  int agent = -1;
  int own_type = -1;
  std::vector<Rat> p;  // [others index]

  bool operator==(const Belief&) const = default;
};

/// Bayes conditional of the prior on own type.
Belief prior_conditional(const Environment& env, int agent, int own_type);

/// Bayes update of the prior conditional on observing `realization` of the
/// agent's signal.
Belief posterior(const Environment& env, const SignalScheme& scheme, int agent,
                 int own_type, int realization);

/// Pr(sigma_agent = realization | own type), averaging the likelihood under
/// the prior conditional.
Rat realization_probability(const Environment& env, const SignalScheme& scheme,
                            int agent, int own_type, int realization);

/// Sum over the others' profiles of belief(q) * u_agent(outcome_map[q], eval_type).
Rat expected_utility(const Environment& env, int agent, int eval_type,
                     const Belief& belief, std::span<const int> outcome_map);

/// Outcome map q -> F(own_report, q), the truthful-slice of the SCF at a
/// fixed own report.
std::vector<int> scf_slice(const Environment& env, const Scf& f, int agent,
                           int own_report);

/// One belief per (agent, type): either all prior conditionals or the
/// posteriors induced by one joint realization profile.
struct BeliefSystem {
  std::vector<std::vector<Belief>> beliefs;  // [agent][type]

  const Belief& at(int agent, int type) const {
    return beliefs[static_cast<std::size_t>(agent)][static_cast<std::size_t>(type)];
  }
};

BeliefSystem prior_beliefs(const Environment& env);
BeliefSystem posterior_beliefs(const Environment& env, const SignalScheme& scheme,
                               std::span<const int> realization_profile);

}  // namespace bayimp
