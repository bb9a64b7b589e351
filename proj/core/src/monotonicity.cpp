#include "bayimp/monotonicity.hpp"

#include <algorithm>

#include "bayimp/errors.hpp"

namespace bayimp {

Belief BeliefContext::belief(const Environment& env, int agent, int own_type) const {
  if (scheme_ == nullptr) return prior_conditional(env, agent, own_type);
  return posterior(env, *scheme_, agent, own_type, realization_);
}

std::string BeliefContext::describe(const Environment& env, int agent) const {
  if (scheme_ == nullptr) return "prior";
  const auto& sig = scheme_->per_agent[static_cast<std::size_t>(agent)];
  return "signal realization '" +
         sig.realizations[static_cast<std::size_t>(realization_)] + "'";
}

namespace {

void require_outcome_changing(const Environment& env, const Scf& f,
                              const Deception& alpha) {
  if (compose(env, f, alpha) == f) {
    throw PreconditionError("deception leaves the social choice function unchanged");
  }
}

// Shared exact quantities for one (agent, deception, belief context):
// per own type t,
//   truth_value[t]  = E[u(F(q, t), t)]             (weak-harm baseline)
//   deceived[t]     = E[u(F(alpha(q), alpha_i(t)), t)]  (strict-gain baseline)
//   belief[t]       = interim belief over q
//   reply_weight[t][p] = total belief mass of {q : alpha_{-i}(q) = p}
struct UnderminingData {
  std::vector<Belief> beliefs;
  std::vector<Rat> truth_value;
  std::vector<Rat> deceived;
  std::vector<std::vector<Rat>> reply_weight;
  std::vector<std::size_t> mapped;
  std::size_t positions = 0;
};

UnderminingData gather(const Environment& env, const Scf& f, const Deception& alpha,
                       int agent, const BeliefContext& ctx) {
  UnderminingData data;
  const StateJoiner joiner(env, agent);
  data.positions = joiner.others_size();
  data.mapped = others_deception_map(env, alpha, agent);
  const int ntypes = env.type_count(agent);
  data.beliefs.reserve(static_cast<std::size_t>(ntypes));
  for (int t = 0; t < ntypes; ++t) {
    data.beliefs.push_back(ctx.belief(env, agent, t));
    const Belief& b = data.beliefs.back();
    Rat truth = 0;
    Rat deceived = 0;
    std::vector<Rat> weight(data.positions, Rat(0));
    const int own_report = alpha.report(agent, t);
    for (std::size_t q = 0; q < data.positions; ++q) {
      truth += b.p[q] * env.utility(agent, f.table[joiner.state(t, q)], t);
      deceived +=
          b.p[q] * env.utility(agent, f.table[joiner.state(own_report, data.mapped[q])], t);
      weight[data.mapped[q]] += b.p[q];
    }
    data.truth_value.push_back(std::move(truth));
    data.deceived.push_back(std::move(deceived));
    data.reply_weight.push_back(std::move(weight));
  }
  return data;
}

}  // namespace

UnderminingCheck check_undermines(const Environment& env, const Scf& f,
                                  const Deception& alpha, int agent,
                                  const ReplyFunction& reply, const BeliefContext& ctx) {
  require_outcome_changing(env, f, alpha);
  const UnderminingData data = gather(env, f, alpha, agent, ctx);
  const int ntypes = env.type_count(agent);
  for (int t = 0; t < ntypes; ++t) {
    Rat reply_value = 0;
    for (std::size_t q = 0; q < data.positions; ++q) {
      reply_value += data.beliefs[static_cast<std::size_t>(t)].p[q] *
                     env.utility(agent, reply.table[q], t);
    }
    if (reply_value > data.truth_value[static_cast<std::size_t>(t)]) {
      return {false, -1};
    }
  }
  for (int t = 0; t < ntypes; ++t) {
    Rat deviant = 0;
    for (std::size_t p = 0; p < data.positions; ++p) {
      deviant += data.reply_weight[static_cast<std::size_t>(t)][p] *
                 env.utility(agent, reply.table[p], t);
    }
    if (deviant > data.deceived[static_cast<std::size_t>(t)]) {
      return {true, t};
    }
  }
  return {false, -1};
}

std::optional<UnderminingWitness> search_undermining(
    const Environment& env, const Scf& f, const Deception& alpha, int agent,
    const BeliefContext& ctx, Budget& budget, std::optional<int> required_strict_type) {
  require_outcome_changing(env, f, alpha);
  const UnderminingData data = gather(env, f, alpha, agent, ctx);
  const int ntypes = env.type_count(agent);
  const int noutcomes = env.outcome_count();
  const std::size_t positions = data.positions;

  std::vector<Rat> min_u(static_cast<std::size_t>(ntypes));
  std::vector<Rat> max_u(static_cast<std::size_t>(ntypes));
  for (int t = 0; t < ntypes; ++t) {
    Rat lo = env.utility(agent, 0, t);
    Rat hi = lo;
    for (int a = 1; a < noutcomes; ++a) {
      const Rat& u = env.utility(agent, a, t);
      if (u < lo) lo = u;
      if (u > hi) hi = u;
    }
    min_u[static_cast<std::size_t>(t)] = lo;
    max_u[static_cast<std::size_t>(t)] = hi;
  }

  // Suffix weights: remaining belief mass (weak family) and remaining
  // deception-image mass (strict family) from position k on.
  std::vector<std::vector<Rat>> suffix_a(static_cast<std::size_t>(ntypes)),
      suffix_b(static_cast<std::size_t>(ntypes));
  for (int t = 0; t < ntypes; ++t) {
    auto& sa = suffix_a[static_cast<std::size_t>(t)];
    auto& sb = suffix_b[static_cast<std::size_t>(t)];
    sa.assign(positions + 1, Rat(0));
    sb.assign(positions + 1, Rat(0));
    for (std::size_t p = positions; p-- > 0;) {
      sa[p] = sa[p + 1] + data.beliefs[static_cast<std::size_t>(t)].p[p];
      sb[p] = sb[p + 1] + data.reply_weight[static_cast<std::size_t>(t)][p];
    }
  }

  std::vector<int> assignment(positions, 0);
  std::vector<Rat> sum_a(static_cast<std::size_t>(ntypes), Rat(0));
  std::vector<Rat> sum_b(static_cast<std::size_t>(ntypes), Rat(0));
  std::optional<UnderminingWitness> found;

  auto viable = [&](std::size_t next) {
    for (int t = 0; t < ntypes; ++t) {
      const auto ts = static_cast<std::size_t>(t);
      // No completion can keep the weak-harm inequality for type t.
      if (sum_a[ts] + suffix_a[ts][next] * min_u[ts] > data.truth_value[ts]) return false;
    }
    bool strict_possible = false;
    for (int t = 0; t < ntypes && !strict_possible; ++t) {
      if (required_strict_type && *required_strict_type != t) continue;
      const auto ts = static_cast<std::size_t>(t);
      if (sum_b[ts] + suffix_b[ts][next] * max_u[ts] > data.deceived[ts]) {
        strict_possible = true;
      }
    }
    return strict_possible;
  };

  auto record = [&]() {
    for (int t = 0; t < ntypes; ++t) {
      const auto ts = static_cast<std::size_t>(t);
      if (sum_a[ts] > data.truth_value[ts]) return;
    }
    for (int t = 0; t < ntypes; ++t) {
      if (required_strict_type && *required_strict_type != t) continue;
      const auto ts = static_cast<std::size_t>(t);
      if (sum_b[ts] > data.deceived[ts]) {
        UnderminingWitness w;
        w.agent = agent;
        w.reply = ReplyFunction{agent, assignment};
        w.strict_type = t;
        w.posterior_context = ctx.is_posterior();
        w.realization = ctx.realization();
        found = w;
        return;
      }
    }
  };

  auto descend = [&](auto&& self, std::size_t pos) -> void {
    if (found) return;
    if (pos == positions) {
      record();
      return;
    }
    for (int a = 0; a < noutcomes && !found; ++a) {
      budget.charge(1, "reply search");
      assignment[pos] = a;
      for (int t = 0; t < ntypes; ++t) {
        const auto ts = static_cast<std::size_t>(t);
        sum_a[ts] += data.beliefs[ts].p[pos] * env.utility(agent, a, t);
        sum_b[ts] += data.reply_weight[ts][pos] * env.utility(agent, a, t);
      }
      if (viable(pos + 1)) self(self, pos + 1);
      for (int t = 0; t < ntypes; ++t) {
        const auto ts = static_cast<std::size_t>(t);
        sum_a[ts] -= data.beliefs[ts].p[pos] * env.utility(agent, a, t);
        sum_b[ts] -= data.reply_weight[ts][pos] * env.utility(agent, a, t);
      }
    }
  };
  descend(descend, 0);
  return found;
}

PotentialScan scan_potential_pairs(const Environment& env, const Scf& f,
                                   const Deception& alpha, int agent) {
  require_outcome_changing(env, f, alpha);
  PotentialScan scan;
  if (!is_dominant_truthtelling(env, f, agent).dominant) return scan;

  const StateJoiner joiner(env, agent);
  const auto mapped = others_deception_map(env, alpha, agent);
  const std::size_t positions = joiner.others_size();
  const int ntypes = env.type_count(agent);

  // family_strict[p] = first type with a strict preference for p reported
  // truthfully over alpha's image of p; -2 when the weak family fails.
  std::vector<int> family_strict(positions, -1);
  for (std::size_t p = 0; p < positions; ++p) {
    int strict = -1;
    for (int t = 0; t < ntypes; ++t) {
      const Rat& truthful = env.utility(agent, f.table[joiner.state(t, p)], t);
      const Rat& deceived = env.utility(agent, f.table[joiner.state(t, mapped[p])], t);
      if (truthful < deceived) {
        strict = -2;
        break;
      }
      if (strict == -1 && truthful > deceived) strict = t;
    }
    family_strict[p] = strict;
  }

  for (std::size_t a = 0; a < positions; ++a) {
    if (family_strict[a] < 0) continue;
    for (std::size_t b = 0; b < positions; ++b) {
      if (b == a || family_strict[b] < 0) continue;
      if (mapped[mapped[a]] == b) continue;
      if (mapped[mapped[b]] == a) continue;
      if (mapped[a] == mapped[b]) continue;
      PotentialPair pair;
      pair.agent = agent;
      pair.profile_a = a;
      pair.profile_b = b;
      pair.chain = {a, mapped[a], b, mapped[b]};
      pair.strict_a = family_strict[a];
      pair.strict_b = family_strict[b];
      bool distinct = true;
      for (int x = 0; x < 4 && distinct; ++x) {
        for (int y = x + 1; y < 4; ++y) {
          if (pair.chain[static_cast<std::size_t>(x)] ==
              pair.chain[static_cast<std::size_t>(y)]) {
            distinct = false;
            break;
          }
        }
      }
      pair.chain_distinct = distinct;
      (distinct ? scan.strong : scan.weak_only).push_back(pair);
    }
  }
  return scan;
}

std::optional<PotentialPair> check_potentially_undermines(const Environment& env,
                                                          const Scf& f,
                                                          const Deception& alpha,
                                                          int agent) {
  const PotentialScan scan = scan_potential_pairs(env, f, alpha, agent);
  if (scan.strong.empty()) return std::nullopt;
  return scan.strong.front();
}

DeceptionSets compute_deception_sets(const Environment& env, const Scf& f,
                                     Budget& budget) {
  DeceptionSets sets;
  const BeliefSystem beliefs = prior_beliefs(env);
  const EquilibriumSet equilibria = enumerate_direct_equilibria(env, f, beliefs, budget);
  const BeliefContext ctx = BeliefContext::prior();
  for (const Deception& alpha : equilibria.equilibria) {
    if (compose(env, f, alpha) == f) continue;
    sets.undesired.push_back(alpha);
    std::optional<UnderminingWitness> witness;
    for (int i = 0; i < env.agent_count() && !witness; ++i) {
      witness = search_undermining(env, f, alpha, i, ctx, budget);
    }
    if (witness) {
      sets.undermined.push_back({alpha, *witness});
    } else {
      sets.residual.push_back(alpha);
    }
  }
  return sets;
}

NoSignalVerdict full_implementability_no_signals(const DeceptionSets& sets,
                                                 const IcVerdict& ic) {
  NoSignalVerdict verdict;
  verdict.ic_ok = ic.ok;
  verdict.residual_empty = sets.residual.empty();
  verdict.fully_implementable = verdict.ic_ok && verdict.residual_empty;
  return verdict;
}

}  // namespace bayimp
