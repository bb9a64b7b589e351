#include "bayimp/beliefs.hpp"

#include <cassert>

namespace bayimp {

Belief prior_conditional(const Environment& env, int agent, int own_type) {
  const StateJoiner joiner(env, agent);
  Belief b{agent, own_type, {}};
  b.p.resize(joiner.others_size());
  Rat total = 0;
  for (std::size_t q = 0; q < joiner.others_size(); ++q) {
    b.p[q] = env.prior[joiner.state(own_type, q)];
    total += b.p[q];
  }
  for (auto& p : b.p) p /= total;
  return b;
}

Belief posterior(const Environment& env, const SignalScheme& scheme, int agent,
                 int own_type, int realization) {
  const auto& sig = scheme.per_agent[static_cast<std::size_t>(agent)];
  Belief b = prior_conditional(env, agent, own_type);
  Rat total = 0;
  for (std::size_t q = 0; q < b.p.size(); ++q) {
    b.p[q] *= sig.likelihood[q][static_cast<std::size_t>(realization)];
    total += b.p[q];
  }
  for (auto& p : b.p) p /= total;
  return b;
}

Rat realization_probability(const Environment& env, const SignalScheme& scheme,
                            int agent, int own_type, int realization) {
  const auto& sig = scheme.per_agent[static_cast<std::size_t>(agent)];
  const Belief prior = prior_conditional(env, agent, own_type);
  Rat total = 0;
  for (std::size_t q = 0; q < prior.p.size(); ++q) {
    total += prior.p[q] * sig.likelihood[q][static_cast<std::size_t>(realization)];
  }
  return total;
}

Rat expected_utility(const Environment& env, int agent, int eval_type,
                     const Belief& belief, std::span<const int> outcome_map) {
  assert(belief.agent == agent);
  Rat total = 0;
  for (std::size_t q = 0; q < belief.p.size(); ++q) {
    total += belief.p[q] * env.utility(agent, outcome_map[q], eval_type);
  }
  return total;
}

std::vector<int> scf_slice(const Environment& env, const Scf& f, int agent,
                           int own_report) {
  const StateJoiner joiner(env, agent);
  std::vector<int> slice(joiner.others_size());
  for (std::size_t q = 0; q < slice.size(); ++q) {
    slice[q] = f.table[joiner.state(own_report, q)];
  }
  return slice;
}

BeliefSystem prior_beliefs(const Environment& env) {
  BeliefSystem system;
  system.beliefs.resize(static_cast<std::size_t>(env.agent_count()));
  for (int i = 0; i < env.agent_count(); ++i) {
    for (int t = 0; t < env.type_count(i); ++t) {
      system.beliefs[static_cast<std::size_t>(i)].push_back(prior_conditional(env, i, t));
    }
  }
  return system;
}

BeliefSystem posterior_beliefs(const Environment& env, const SignalScheme& scheme,
                               std::span<const int> realization_profile) {
  BeliefSystem system;
  system.beliefs.resize(static_cast<std::size_t>(env.agent_count()));
  for (int i = 0; i < env.agent_count(); ++i) {
    for (int t = 0; t < env.type_count(i); ++t) {
      system.beliefs[static_cast<std::size_t>(i)].push_back(
          posterior(env, scheme, i, t, realization_profile[static_cast<std::size_t>(i)]));
    }
  }
  return system;
}

}  // namespace bayimp
