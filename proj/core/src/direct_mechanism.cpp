#include "bayimp/direct_mechanism.hpp"

#include <algorithm>

namespace bayimp {

bool Deception::is_identity() const {
  for (const auto& m : maps) {
    for (int t = 0; t < static_cast<int>(m.size()); ++t) {
      if (m[static_cast<std::size_t>(t)] != t) return false;
    }
  }
  return true;
}

Deception identity_deception(const Environment& env) {
  Deception alpha;
  alpha.maps.resize(static_cast<std::size_t>(env.agent_count()));
  for (int i = 0; i < env.agent_count(); ++i) {
    auto& m = alpha.maps[static_cast<std::size_t>(i)];
    m.resize(static_cast<std::size_t>(env.type_count(i)));
    for (int t = 0; t < env.type_count(i); ++t) m[static_cast<std::size_t>(t)] = t;
  }
  return alpha;
}

Scf compose(const Environment& env, const Scf& f, const Deception& alpha) {
  const ProfileSpace space = env.state_space();
  Scf composed;
  composed.table.resize(f.table.size());
  std::vector<int> coords(static_cast<std::size_t>(env.agent_count()));
  for (std::size_t s = 0; s < f.table.size(); ++s) {
    space.decode(s, coords);
    for (int i = 0; i < env.agent_count(); ++i) {
      coords[static_cast<std::size_t>(i)] =
          alpha.report(i, coords[static_cast<std::size_t>(i)]);
    }
    composed.table[s] = f.table[space.index(coords)];
  }
  return composed;
}

std::vector<std::size_t> others_deception_map(const Environment& env,
                                              const Deception& alpha, int agent) {
  const ProfileSpace others = env.others_space(agent);
  std::vector<std::size_t> mapped(others.size());
  std::vector<int> coords(static_cast<std::size_t>(env.agent_count() - 1));
  for (std::size_t q = 0; q < others.size(); ++q) {
    others.decode(q, coords);
    int k = 0;
    for (int j = 0; j < env.agent_count(); ++j) {
      if (j == agent) continue;
      coords[static_cast<std::size_t>(k)] =
          alpha.report(j, coords[static_cast<std::size_t>(k)]);
      ++k;
    }
    mapped[q] = others.index(coords);
  }
  return mapped;
}

namespace {

void collect_ic_violations(const Environment& env, const Scf& f, int agent,
                           const Belief& belief, int realization, IcVerdict& verdict) {
  const int t = belief.own_type;
  const Rat truthful =
      expected_utility(env, agent, t, belief, scf_slice(env, f, agent, t));
  for (int r = 0; r < env.type_count(agent); ++r) {
    if (r == t) continue;
    const Rat deviant =
        expected_utility(env, agent, t, belief, scf_slice(env, f, agent, r));
    if (deviant > truthful) {
      verdict.ok = false;
      verdict.violations.push_back({agent, t, r, realization, deviant - truthful});
    }
  }
}

}  // namespace

IcVerdict check_incentive_compatibility(const Environment& env, const Scf& f) {
  IcVerdict verdict;
  for (int i = 0; i < env.agent_count(); ++i) {
    for (int t = 0; t < env.type_count(i); ++t) {
      collect_ic_violations(env, f, i, prior_conditional(env, i, t), -1, verdict);
    }
  }
  return verdict;
}

IcVerdict check_ic_with_signals(const Environment& env, const Scf& f,
                                const SignalScheme& scheme) {
  IcVerdict verdict;
  for (int i = 0; i < env.agent_count(); ++i) {
    const auto& sig = scheme.per_agent[static_cast<std::size_t>(i)];
    for (int t = 0; t < env.type_count(i); ++t) {
      for (int x = 0; x < sig.realization_count(); ++x) {
        collect_ic_violations(env, f, i, posterior(env, scheme, i, t, x), x, verdict);
      }
    }
  }
  return verdict;
}

DominanceResult is_dominant_truthtelling(const Environment& env, const Scf& f,
                                         int agent) {
  const StateJoiner joiner(env, agent);
  for (int t = 0; t < env.type_count(agent); ++t) {
    for (int r = 0; r < env.type_count(agent); ++r) {
      if (r == t) continue;
      for (std::size_t q = 0; q < joiner.others_size(); ++q) {
        const Rat& truth = env.utility(agent, f.table[joiner.state(t, q)], t);
        const Rat& lie = env.utility(agent, f.table[joiner.state(r, q)], t);
        if (lie > truth) {
          return {false, DominanceWitness{t, r, q}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

std::optional<DeviationWitness> find_profitable_deviation(const Environment& env,
                                                          const Scf& f,
                                                          const Deception& alpha,
                                                          const BeliefSystem& beliefs) {
  for (int i = 0; i < env.agent_count(); ++i) {
    const StateJoiner joiner(env, i);
    const auto mapped = others_deception_map(env, alpha, i);
    for (int t = 0; t < env.type_count(i); ++t) {
      const Belief& b = beliefs.at(i, t);
      const int played = alpha.report(i, t);
      Rat current = 0;
      for (std::size_t q = 0; q < b.p.size(); ++q) {
        current += b.p[q] * env.utility(i, f.table[joiner.state(played, mapped[q])], t);
      }
      for (int r = 0; r < env.type_count(i); ++r) {
        if (r == played) continue;
        Rat alt = 0;
        for (std::size_t q = 0; q < b.p.size(); ++q) {
          alt += b.p[q] * env.utility(i, f.table[joiner.state(r, mapped[q])], t);
        }
        if (alt > current) {
          return DeviationWitness{i, t, r, alt - current};
        }
      }
    }
  }
  return std::nullopt;
}

bool is_direct_equilibrium(const Environment& env, const Scf& f, const Deception& alpha,
                           const BeliefSystem& beliefs) {
  return !find_profitable_deviation(env, f, alpha, beliefs).has_value();
}

Int deception_space_size(const Environment& env) {
  Int total = 1;
  for (int i = 0; i < env.agent_count(); ++i) {
    const int k = env.type_count(i);
    Int per_agent = 1;
    for (int t = 0; t < k; ++t) per_agent *= k;
    total *= per_agent;
  }
  return total;
}

EquilibriumSet enumerate_direct_equilibria(const Environment& env, const Scf& f,
                                           const BeliefSystem& beliefs, Budget& budget) {
  budget.require(deception_space_size(env), "deception enumeration");

  EquilibriumSet result;
  Deception alpha;
  alpha.maps.resize(static_cast<std::size_t>(env.agent_count()));
  for (int i = 0; i < env.agent_count(); ++i) {
    alpha.maps[static_cast<std::size_t>(i)].assign(
        static_cast<std::size_t>(env.type_count(i)), 0);
  }

  // Odometer over the per-agent report tables; the last slot of the last
  // agent moves fastest, so deceptions appear in lexicographic order.
  while (true) {
    budget.charge(1, "deception enumeration");
    if (is_direct_equilibrium(env, f, alpha, beliefs)) {
      result.equilibria.push_back(alpha);
      if (alpha.is_identity()) result.contains_truth = true;
    }
    int i = env.agent_count() - 1;
    int slot = env.type_count(i) - 1;
    while (i >= 0) {
      auto& cell = alpha.maps[static_cast<std::size_t>(i)][static_cast<std::size_t>(slot)];
      if (++cell < env.type_count(i)) break;
      cell = 0;
      if (--slot < 0) {
        --i;
        if (i >= 0) slot = env.type_count(i) - 1;
      }
    }
    if (i < 0) break;
  }
  return result;
}

}  // namespace bayimp
