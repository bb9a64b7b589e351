#include "bayimp/signals.hpp"

#include <algorithm>
#include <set>

#include "bayimp/errors.hpp"

namespace bayimp {

AgentSignal build_signal(const Environment& env, int agent,
                         const std::vector<bool>& group0, const Rat& tau) {
  if (tau <= Rat(1, 2) || tau >= 1) {
    throw PreconditionError("signal accuracy must lie strictly between 1/2 and 1, got " +
                            rational_to_string(tau));
  }
  const std::size_t positions = env.others_space(agent).size();
  const std::size_t members =
      static_cast<std::size_t>(std::count(group0.begin(), group0.end(), true));
  if (group0.size() != positions || members == 0 || members == positions) {
    throw PreconditionError("degenerate partition for the binary signal");
  }
  AgentSignal sig;
  sig.realizations = {"0", "1"};
  sig.likelihood.resize(positions);
  const Rat complement = Rat(1) - tau;
  for (std::size_t q = 0; q < positions; ++q) {
    sig.likelihood[q] = group0[q] ? std::vector<Rat>{tau, complement}
                                  : std::vector<Rat>{complement, tau};
  }
  return sig;
}

ReplyFunction swap_reply(const Environment& env, const Scf& f, int agent,
                         std::size_t profile_x, std::size_t profile_y,
                         int eval_own_type) {
  if (profile_x == profile_y) {
    throw PreconditionError("swap profiles must be distinct");
  }
  const StateJoiner joiner(env, agent);
  ReplyFunction reply;
  reply.agent = agent;
  reply.table.resize(joiner.others_size());
  for (std::size_t q = 0; q < reply.table.size(); ++q) {
    reply.table[q] = f.table[joiner.state(eval_own_type, q)];
  }
  std::swap(reply.table[profile_x], reply.table[profile_y]);
  return reply;
}

std::vector<bool> signal_group0(const Environment& env, const Deception& alpha,
                                int agent, const PotentialPair& pair) {
  const auto mapped = others_deception_map(env, alpha, agent);
  std::vector<bool> group0(mapped.size(), false);
  group0[pair.chain[0]] = true;
  group0[pair.chain[3]] = true;
  for (std::size_t q = 0; q < mapped.size(); ++q) {
    if (mapped[q] == pair.chain[2]) group0[q] = true;
  }
  return group0;
}

namespace {

// One inequality sum(p) weight(p) * L_x(p) * value(p) {>,>=} 0 where
// L_0(p) = tau on group0 and 1-tau outside (mirrored for x = 1). Clearing
// the shared positive normalizer Pr(sigma = x | own type) leaves an affine
// function of tau.
struct AffineBuilder {
  Rat in_group;   // total weight*value mass with likelihood tau (x=0)
  Rat out_group;  // mass with likelihood 1-tau (x=0)

  void add(bool in_group0, int realization, const Rat& term) {
    const bool tau_side = (realization == 0) ? in_group0 : !in_group0;
    if (tau_side) {
      in_group += term;
    } else {
      out_group += term;
    }
  }
  // value at tau: tau*in_group + (1-tau)*out_group = a*tau + b
  Rat a() const { return in_group - out_group; }
  Rat b() const { return out_group; }
};

const RatInterval kAccuracyDomain{Rat(1, 2), true, Rat(1), true};

}  // namespace

RatIntervalSet tau_threshold(const Environment& env, const Scf& f,
                             const Deception& alpha, int agent,
                             const PotentialPair& pair) {
  const StateJoiner joiner(env, agent);
  const auto mapped = others_deception_map(env, alpha, agent);
  const std::vector<bool> group0 = signal_group0(env, alpha, agent, pair);
  const int ntypes = env.type_count(agent);
  const std::size_t positions = joiner.others_size();

  const ReplyFunction replies[2] = {
      swap_reply(env, f, agent, pair.chain[0], pair.chain[1],
                 alpha.report(agent, pair.strict_a)),
      swap_reply(env, f, agent, pair.chain[2], pair.chain[3],
                 alpha.report(agent, pair.strict_b)),
  };

  RatIntervalSet feasible = RatIntervalSet::single(kAccuracyDomain);
  for (int x = 0; x < 2; ++x) {
    const ReplyFunction& reply = replies[x];
    RatIntervalSet weak = RatIntervalSet::single(kAccuracyDomain);
    RatIntervalSet strict;  // union over own types
    for (int t = 0; t < ntypes; ++t) {
      AffineBuilder harm;    // truthful value minus reply value
      AffineBuilder gain;    // reply-under-deception minus deceived value
      const int own_report = alpha.report(agent, t);
      for (std::size_t q = 0; q < positions; ++q) {
        // Unnormalized slice of the prior at own type t; a positive scalar
        // of the interim belief, so inequality directions are unchanged.
        const Rat& mass = env.prior[joiner.state(t, q)];
        harm.add(group0[q], x,
                 mass * (env.utility(agent, f.table[joiner.state(t, q)], t) -
                         env.utility(agent, reply.table[q], t)));
        gain.add(group0[q], x,
                 mass * (env.utility(agent, reply.table[mapped[q]], t) -
                         env.utility(agent,
                                     f.table[joiner.state(own_report, mapped[q])], t)));
      }
      weak.intersect_with(RatIntervalSet::affine_at_least_zero(
          harm.a(), harm.b(), /*strict=*/false, kAccuracyDomain));
      strict.unite_with(RatIntervalSet::affine_at_least_zero(
          gain.a(), gain.b(), /*strict=*/true, kAccuracyDomain));
    }
    weak.intersect_with(strict);
    feasible.intersect_with(weak);
  }
  return feasible;
}

std::optional<SynthesizedSignal> synthesize_signal(const Environment& env, const Scf& f,
                                                   const Deception& alpha, int agent,
                                                   std::optional<Rat> tau_override) {
  PotentialScan scan = scan_potential_pairs(env, f, alpha, agent);
  if (scan.strong.empty()) return std::nullopt;

  SynthesizedSignal out;
  out.agent = agent;
  out.pair = scan.strong.front();
  out.alternates.assign(scan.strong.begin() + 1, scan.strong.end());
  out.group0 = signal_group0(env, alpha, agent, out.pair);
  out.tau_feasible = tau_threshold(env, f, alpha, agent, out.pair);
  if (out.tau_feasible.empty()) {
    throw ConstructionInfeasible(
        "construction infeasible: no accuracy in (1/2, 1) lets the swap replies "
        "undermine in both realizations for agent '" +
        env.agents[static_cast<std::size_t>(agent)] + "'");
  }
  if (tau_override) {
    if (!out.tau_feasible.contains(*tau_override)) {
      throw ConstructionInfeasible(
          "requested accuracy " + rational_to_string(*tau_override) +
          " lies outside the feasible set for agent '" +
          env.agents[static_cast<std::size_t>(agent)] + "'");
    }
    out.tau = *tau_override;
  } else {
    out.tau = out.tau_feasible.last()->midpoint();
  }
  out.reply0 = swap_reply(env, f, agent, out.pair.chain[0], out.pair.chain[1],
                          alpha.report(agent, out.pair.strict_a));
  out.reply1 = swap_reply(env, f, agent, out.pair.chain[2], out.pair.chain[3],
                          alpha.report(agent, out.pair.strict_b));
  out.signal = build_signal(env, agent, out.group0, out.tau);

  SignalScheme scheme = uninformative_scheme(env);
  scheme.per_agent[static_cast<std::size_t>(agent)] = out.signal;
  const auto check0 =
      check_undermines(env, f, alpha, agent, out.reply0,
                       BeliefContext::posterior_of(scheme, 0));
  const auto check1 =
      check_undermines(env, f, alpha, agent, out.reply1,
                       BeliefContext::posterior_of(scheme, 1));
  if (!check0.undermines || !check1.undermines) {
    throw std::logic_error(
        "accuracy set disagrees with the direct undermining check; exactness bug");
  }
  return out;
}

PreservationResult verify_equilibrium_preservation(const Environment& env, const Scf& f,
                                                   const SignalScheme& scheme,
                                                   Budget& budget) {
  PreservationResult result;
  const EquilibriumSet base =
      enumerate_direct_equilibria(env, f, prior_beliefs(env), budget);

  std::vector<int> informative;
  for (int i = 0; i < env.agent_count(); ++i) {
    if (is_informative(scheme.per_agent[static_cast<std::size_t>(i)])) {
      informative.push_back(i);
    }
  }

  std::vector<int> profile(static_cast<std::size_t>(env.agent_count()), 0);
  // Odometer over the informative agents' realizations only; uninformative
  // signals leave every posterior equal to the prior conditional.
  while (true) {
    const BeliefSystem beliefs = posterior_beliefs(env, scheme, profile);
    const EquilibriumSet here = enumerate_direct_equilibria(env, f, beliefs, budget);
    if (here.equilibria != base.equilibria) {
      result.preserved = false;
      RealizationDiff diff;
      diff.realization_profile = profile;
      for (const auto& alpha : here.equilibria) {
        if (std::find(base.equilibria.begin(), base.equilibria.end(), alpha) ==
            base.equilibria.end()) {
          diff.added.push_back(alpha);
        }
      }
      for (const auto& alpha : base.equilibria) {
        if (std::find(here.equilibria.begin(), here.equilibria.end(), alpha) ==
            here.equilibria.end()) {
          diff.removed.push_back(alpha);
        }
      }
      result.diffs.push_back(std::move(diff));
    }
    int k = static_cast<int>(informative.size()) - 1;
    while (k >= 0) {
      const int i = informative[static_cast<std::size_t>(k)];
      auto& slot = profile[static_cast<std::size_t>(i)];
      if (++slot <
          scheme.per_agent[static_cast<std::size_t>(i)].realization_count()) {
        break;
      }
      slot = 0;
      --k;
    }
    if (k < 0) break;
  }
  return result;
}

namespace {

std::string deception_label(const Environment& env, const Deception& alpha) {
  std::string out;
  for (int i = 0; i < env.agent_count(); ++i) {
    if (i > 0) out += ", ";
    out += env.agents[static_cast<std::size_t>(i)] + ":{";
    for (int t = 0; t < env.type_count(i); ++t) {
      if (t > 0) out += ",";
      out += env.types[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] + "->" +
             env.types[static_cast<std::size_t>(i)]
                      [static_cast<std::size_t>(alpha.report(i, t))];
    }
    out += "}";
  }
  return out;
}

}  // namespace

PlanResult plan_full_implementation(const Environment& env, const Scf& f, Budget& budget,
                                    std::optional<Rat> tau_override) {
  PlanResult result;
  result.ic = check_incentive_compatibility(env, f);
  result.sets = compute_deception_sets(env, f, budget);
  if (!result.ic.ok) {
    result.bottleneck = "not incentive-compatible: truth-telling is not an equilibrium";
    return result;
  }

  const auto& residual = result.sets.residual;
  const int n = env.agent_count();

  // Eligible (agent, signal) options per residual deception.
  std::vector<std::vector<SignalPlan::Assignment>> options(residual.size());
  for (std::size_t r = 0; r < residual.size(); ++r) {
    for (int j = 0; j < n; ++j) {
      try {
        auto sig = synthesize_signal(env, f, residual[r], j, tau_override);
        if (sig) {
          options[r].push_back({residual[r], j, std::move(*sig)});
        }
      } catch (const ConstructionInfeasible& e) {
        result.anomalies.push_back(e.what());
      }
    }
    if (options[r].empty()) {
      result.bottleneck = "no eligible agent can potentially undermine the residual "
                          "deception [" +
                          deception_label(env, residual[r]) + "]";
      return result;
    }
  }

  // Underminer sets for the already-undermined deceptions.
  const BeliefContext prior_ctx = BeliefContext::prior();
  std::vector<std::set<int>> underminers(result.sets.undermined.size());
  std::vector<std::vector<std::optional<UnderminingWitness>>> witness_table(
      result.sets.undermined.size());
  for (std::size_t u = 0; u < result.sets.undermined.size(); ++u) {
    witness_table[u].resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      auto w = search_undermining(env, f, result.sets.undermined[u].alpha, i, prior_ctx,
                                  budget);
      if (w) {
        underminers[u].insert(i);
        witness_table[u][static_cast<std::size_t>(i)] = std::move(w);
      }
    }
  }

  // Injective assignment, agents in canonical order, first valid one wins.
  std::vector<int> chosen(residual.size(), -1);
  std::set<int> used;
  auto preserved_ok = [&](const std::set<int>& assigned) {
    for (const auto& u : underminers) {
      bool outside = false;
      for (int i : u) {
        if (!assigned.contains(i)) {
          outside = true;
          break;
        }
      }
      if (!outside) return false;
    }
    return true;
  };
  bool found = false;
  auto assign = [&](auto&& self, std::size_t r, bool enforce_preserved) -> bool {
    if (r == residual.size()) return !enforce_preserved || preserved_ok(used);
    for (std::size_t k = 0; k < options[r].size(); ++k) {
      const int j = options[r][k].agent;
      if (used.contains(j)) continue;
      used.insert(j);
      chosen[r] = static_cast<int>(k);
      if (self(self, r + 1, enforce_preserved)) return true;
      used.erase(j);
      chosen[r] = -1;
    }
    return false;
  };
  found = assign(assign, 0, /*enforce_preserved=*/true);
  if (!found) {
    used.clear();
    std::fill(chosen.begin(), chosen.end(), -1);
    result.relaxation_would_unlock = assign(assign, 0, /*enforce_preserved=*/false);
    used.clear();
    result.bottleneck =
        residual.empty()
            ? "internal: assignment failed with no residual deceptions"
            : "no injective assignment keeps an underminer outside the signal "
              "recipients for every undermined deception";
    return result;
  }

  SignalPlan plan;
  plan.scheme = uninformative_scheme(env);
  for (std::size_t r = 0; r < residual.size(); ++r) {
    SignalPlan::Assignment assignment = options[r][static_cast<std::size_t>(chosen[r])];
    plan.scheme.per_agent[static_cast<std::size_t>(assignment.agent)] =
        assignment.signal.signal;
    plan.j_set.push_back(assignment.agent);
    plan.assignments.push_back(std::move(assignment));
  }
  for (std::size_t u = 0; u < result.sets.undermined.size(); ++u) {
    for (int i : underminers[u]) {
      if (std::find(plan.j_set.begin(), plan.j_set.end(), i) == plan.j_set.end()) {
        plan.preserved.push_back({result.sets.undermined[u].alpha, i,
                                  *witness_table[u][static_cast<std::size_t>(i)]});
        break;
      }
    }
  }

  PlanChecks checks;
  checks.preservation = verify_equilibrium_preservation(env, f, plan.scheme, budget);
  checks.preservation_ok = checks.preservation.preserved;

  checks.residual_undermining_ok = true;
  for (const auto& assignment : plan.assignments) {
    const auto c0 = check_undermines(env, f, assignment.alpha, assignment.agent,
                                     assignment.signal.reply0,
                                     BeliefContext::posterior_of(plan.scheme, 0));
    const auto c1 = check_undermines(env, f, assignment.alpha, assignment.agent,
                                     assignment.signal.reply1,
                                     BeliefContext::posterior_of(plan.scheme, 1));
    if (!c0.undermines || !c1.undermines) checks.residual_undermining_ok = false;
  }

  checks.preserved_witnesses_ok = plan.preserved.size() == result.sets.undermined.size();
  for (const auto& preserved : plan.preserved) {
    // The preserved agents keep uninformative signals, so their beliefs (and
    // the witness inequalities) are untouched; re-check anyway.
    const auto check = check_undermines(env, f, preserved.alpha, preserved.agent,
                                        preserved.witness.reply, prior_ctx);
    if (!check.undermines) checks.preserved_witnesses_ok = false;
  }

  checks.ic_with_signals_ok = check_ic_with_signals(env, f, plan.scheme).ok;

  result.fully_implementable = checks.all_ok();
  if (!result.fully_implementable) {
    result.bottleneck = "plan verification failed";
  }
  result.plan = std::move(plan);
  result.checks = std::move(checks);
  return result;
}

}  // namespace bayimp
