#include "bayimp/canonical_mechanism.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "bayimp/errors.hpp"

namespace bayimp {

MechanismParams MechanismParams::from(const Environment& env) {
  MechanismParams p;
  for (int i = 0; i < env.agent_count(); ++i) {
    p.max_types = std::max(p.max_types, env.type_count(i));
  }
  p.vector_length = env.agent_count() * (p.max_types + 1);
  p.entry_max = p.max_types * p.max_types;
  p.vector_space_size = 1;
  for (int k = 0; k < p.vector_length; ++k) p.vector_space_size *= (p.entry_max + 1);
  p.scf_space_size = 1;
  const std::size_t states = env.state_space().size();
  for (std::size_t s = 0; s < states; ++s) p.scf_space_size *= env.outcome_count();
  return p;
}

bool MechanismParams::scf_space_materializable(const Budget& budget) const {
  return scf_space_size <= static_cast<long>(budget.limit());
}

bool rule1_applies(const std::vector<Message>& messages) {
  int vectors = 0;
  for (const auto& m : messages) {
    if (m.flag) return false;
    if (m.vector) ++vectors;
  }
  return vectors <= 1;
}

bool rule2_applies(const std::vector<Message>& messages, int* flagger) {
  int flag_agent = -1;
  for (int i = 0; i < static_cast<int>(messages.size()); ++i) {
    if (messages[static_cast<std::size_t>(i)].flag) {
      if (flag_agent >= 0) return false;
      flag_agent = i;
    }
  }
  if (flag_agent < 0) return false;
  for (int j = 0; j < static_cast<int>(messages.size()); ++j) {
    if (j == flag_agent) continue;
    if (!messages[static_cast<std::size_t>(j)].plain()) return false;
  }
  if (flagger != nullptr) *flagger = flag_agent;
  return true;
}

bool rule3_applies(const std::vector<Message>& messages) {
  return !rule1_applies(messages) && !rule2_applies(messages);
}

RuleClass classify_rule(const std::vector<Message>& messages) {
  if (rule1_applies(messages)) return {RuleKind::Rule1, -1};
  int flagger = -1;
  if (rule2_applies(messages, &flagger)) return {RuleKind::Rule2, flagger};
  return {RuleKind::Rule3, -1};
}

Rule3Winner rule3_winner(const MechanismParams& params,
                         const std::vector<Message>& messages) {
  const int n = static_cast<int>(messages.size());
  Rule3Winner result;
  std::vector<int> i0;
  for (int i = 0; i < n; ++i) {
    if (messages[static_cast<std::size_t>(i)].vector) i0.push_back(i);
  }
  if (i0.empty()) {
    result.i0_empty_fallback = true;
    for (int i = 0; i < n; ++i) {
      if (messages[static_cast<std::size_t>(i)].flag) i0.push_back(i);
    }
  }
  const int s = params.max_types;
  auto score = [&](int i) {
    // Counts j in I0 whose coordinate i is guessed somewhere inside j's
    // window of agent i's vector. Windows are the 1-based slots
    // n+(j-1)S+1 .. n+jS, i.e. [n + j*S, n + j*S + S) 0-based.
    const auto& vi = *messages[static_cast<std::size_t>(i)].vector;
    int matches = 0;
    for (int j : i0) {
      const auto& vj = *messages[static_cast<std::size_t>(j)].vector;
      const int base = n + j * s;
      for (int l = base; l < base + s; ++l) {
        if (vi[static_cast<std::size_t>(l)] == vj[static_cast<std::size_t>(i)]) {
          ++matches;
          break;
        }
      }
    }
    return matches;
  };

  if (result.i0_empty_fallback || i0.size() == 1) {
    result.winner = i0.front();
    return result;
  }
  std::vector<int> scores;
  scores.reserve(i0.size());
  for (int i : i0) scores.push_back(score(i));
  int best = 0;
  for (std::size_t k = 1; k < i0.size(); ++k) {
    if (scores[k] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  bool unique = true;
  for (std::size_t k = 0; k < i0.size(); ++k) {
    if (static_cast<int>(k) != best &&
        scores[k] == scores[static_cast<std::size_t>(best)]) {
      unique = false;
      break;
    }
  }
  result.winner = unique ? i0[static_cast<std::size_t>(best)] : i0.front();
  return result;
}

namespace {

std::size_t reported_state(const Environment& env, const std::vector<Message>& messages) {
  std::vector<int> coords(messages.size());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    coords[i] = messages[i].reported_type;
  }
  return env.state_space().index(coords);
}

}  // namespace

int mechanism_outcome(const Environment& env, const Scf& f,
                      const std::vector<Message>& messages,
                      const BeliefContext& flag_ctx) {
  const RuleClass rule = classify_rule(messages);
  const std::size_t theta_m = reported_state(env, messages);
  switch (rule.kind) {
    case RuleKind::Rule1:
      return f.table[theta_m];
    case RuleKind::Rule2: {
      const int i = rule.flagger;
      const Message& mi = messages[static_cast<std::size_t>(i)];
      const Scf& flag = *mi.flag;
      // The flag is judged through its slice at the reported own type: the
      // alternate rule may not condition on the flagger's actual type.
      const StateJoiner joiner(env, i);
      std::vector<int> pinned(joiner.others_size());
      for (std::size_t q = 0; q < pinned.size(); ++q) {
        pinned[q] = flag.table[joiner.state(mi.reported_type, q)];
      }
      bool weakly_harmful = true;
      for (int t = 0; t < env.type_count(i) && weakly_harmful; ++t) {
        const Belief b = flag_ctx.belief(env, i, t);
        const Rat truthful = expected_utility(env, i, t, b, scf_slice(env, f, i, t));
        const Rat flagged = expected_utility(env, i, t, b, pinned);
        if (flagged > truthful) weakly_harmful = false;
      }
      return weakly_harmful ? flag.table[theta_m] : f.table[theta_m];
    }
    case RuleKind::Rule3: {
      const MechanismParams params = MechanismParams::from(env);
      const Rule3Winner winner = rule3_winner(params, messages);
      return messages[static_cast<std::size_t>(winner.winner)].scf3.table[theta_m];
    }
  }
  return f.table[theta_m];
}

ValidationReport validate_messages(const Environment& env,
                                   const std::vector<Message>& messages) {
  ValidationReport report;
  if (static_cast<int>(messages.size()) != env.agent_count()) {
    report.add("message_count", "messages", "one message per agent required");
    return report;
  }
  const MechanismParams params = MechanismParams::from(env);
  const std::size_t states = env.state_space().size();
  for (int i = 0; i < env.agent_count(); ++i) {
    const auto& m = messages[static_cast<std::size_t>(i)];
    const std::string loc = "messages[" + env.agents[static_cast<std::size_t>(i)] + "]";
    if (m.reported_type < 0 || m.reported_type >= env.type_count(i)) {
      report.add("message_type", loc, "reported type out of range");
    }
    if (m.vector) {
      if (static_cast<int>(m.vector->size()) != params.vector_length) {
        report.add("message_vector", loc,
                   "integer vector must have length " +
                       std::to_string(params.vector_length));
      } else {
        for (int v : *m.vector) {
          if (v < 0 || v > params.entry_max) {
            report.add("message_vector", loc,
                       "vector entries must lie in [0, " +
                           std::to_string(params.entry_max) + "]");
            break;
          }
        }
      }
    }
    auto check_scf = [&](const Scf& s, const char* which) {
      if (s.table.size() != states) {
        report.add("message_scf", loc, std::string(which) + " must cover every state");
        return;
      }
      for (int a : s.table) {
        if (a < 0 || a >= env.outcome_count()) {
          report.add("message_scf", loc, std::string(which) + " has an unknown outcome");
          break;
        }
      }
    };
    check_scf(m.scf3, "third coordinate");
    if (m.flag) check_scf(*m.flag, "flagged rule");
  }
  return report;
}

MechanismStrategy report_strategy(const Environment& env, const Scf& f,
                                  const Deception& alpha) {
  MechanismStrategy strategy;
  strategy.by_agent_type.resize(static_cast<std::size_t>(env.agent_count()));
  for (int i = 0; i < env.agent_count(); ++i) {
    for (int t = 0; t < env.type_count(i); ++t) {
      Message m;
      m.reported_type = alpha.report(i, t);
      m.scf3 = f;
      strategy.by_agent_type[static_cast<std::size_t>(i)].push_back(std::move(m));
    }
  }
  return strategy;
}

Rat interim_value(const Environment& env, const Scf& f, const MechanismStrategy& strategy,
                  int agent, int type, const BeliefContext& ctx,
                  const Message* replacement) {
  const Belief b = ctx.belief(env, agent, type);
  const ProfileSpace others = env.others_space(agent);
  const int n = env.agent_count();
  std::vector<int> coords(static_cast<std::size_t>(n - 1));
  std::vector<Message> messages(static_cast<std::size_t>(n));
  Rat total = 0;
  for (std::size_t q = 0; q < others.size(); ++q) {
    others.decode(q, coords);
    int k = 0;
    for (int j = 0; j < n; ++j) {
      if (j == agent) continue;
      messages[static_cast<std::size_t>(j)] =
          strategy.at(j, coords[static_cast<std::size_t>(k++)]);
    }
    messages[static_cast<std::size_t>(agent)] =
        replacement != nullptr ? *replacement : strategy.at(agent, type);
    const int outcome = mechanism_outcome(env, f, messages, ctx);
    total += b.p[q] * env.utility(agent, outcome, type);
  }
  return total;
}

namespace {

void require_plain_base(const MechanismStrategy& strategy) {
  for (const auto& per_type : strategy.by_agent_type) {
    for (const auto& m : per_type) {
      if (!m.plain()) {
        throw PreconditionError(
            "flag-deviation audits need a plain type-report base profile");
      }
    }
  }
}

}  // namespace

Rat rule2_flag_gain(const Environment& env, const Scf& f,
                    const MechanismStrategy& strategy, int agent, int type,
                    const ReplyFunction& reply, const BeliefContext& ctx) {
  require_plain_base(strategy);
  const StateJoiner joiner(env, agent);
  Message deviated = strategy.at(agent, type);
  Scf lifted;
  lifted.table.resize(env.state_space().size());
  for (std::size_t q = 0; q < joiner.others_size(); ++q) {
    for (int t = 0; t < env.type_count(agent); ++t) {
      lifted.table[joiner.state(t, q)] = reply.table[q];
    }
  }
  deviated.flag = std::move(lifted);
  const Rat base = interim_value(env, f, strategy, agent, type, ctx);
  const Rat flagged = interim_value(env, f, strategy, agent, type, ctx, &deviated);
  return flagged - base;
}

namespace {

// A deviation vector that wins the integer game at every profile of the
// others: match every opponent's possible coordinate-of-self inside that
// opponent's window, dodge every guess the opponents make about this agent,
// and self-match in the own window. Entry values never leave [0, S^2]
// because each dodge excludes at most S * |Theta_j| <= S^2 of the S^2 + 1
// candidates.
std::vector<int> winning_vector(const Environment& env, const MechanismParams& params,
                                const MechanismStrategy& strategy, int agent) {
  const int n = env.agent_count();
  const int s = params.max_types;
  std::vector<int> v(static_cast<std::size_t>(params.vector_length), 0);

  for (int j = 0; j < n; ++j) {
    if (j == agent) continue;
    std::set<int> forbidden;
    for (int tj = 0; tj < env.type_count(j); ++tj) {
      const auto& mj = strategy.at(j, tj);
      if (!mj.vector) continue;
      const int base = n + agent * s;
      for (int l = base; l < base + s; ++l) {
        forbidden.insert((*mj.vector)[static_cast<std::size_t>(l)]);
      }
    }
    int pick = 0;
    while (forbidden.contains(pick)) ++pick;
    v[static_cast<std::size_t>(j)] = pick;
  }

  for (int j = 0; j < n; ++j) {
    const int base = n + j * s;
    if (j == agent) {
      v[static_cast<std::size_t>(base)] = v[static_cast<std::size_t>(agent)];
      continue;
    }
    std::vector<int> values;
    for (int tj = 0; tj < env.type_count(j); ++tj) {
      const auto& mj = strategy.at(j, tj);
      if (!mj.vector) continue;
      const int coord = (*mj.vector)[static_cast<std::size_t>(agent)];
      if (std::find(values.begin(), values.end(), coord) == values.end()) {
        values.push_back(coord);
      }
    }
    for (int k = 0; k < s; ++k) {
      v[static_cast<std::size_t>(base + k)] =
          k < static_cast<int>(values.size()) ? values[static_cast<std::size_t>(k)] : 0;
    }
  }
  return v;
}

}  // namespace

std::vector<AuditFinding> audit_deviations(const Environment& env, const Scf& f,
                                           const MechanismStrategy& strategy,
                                           DeviationClass cls, const BeliefContext& ctx,
                                           Budget& budget) {
  std::vector<AuditFinding> findings;
  const MechanismParams params = MechanismParams::from(env);

  for (int i = 0; i < env.agent_count(); ++i) {
    for (int t = 0; t < env.type_count(i); ++t) {
      switch (cls) {
        case DeviationClass::TypeMisreport: {
          const Rat base = interim_value(env, f, strategy, i, t, ctx);
          for (int r = 0; r < env.type_count(i); ++r) {
            if (r == strategy.at(i, t).reported_type) continue;
            budget.charge(1, "type-misreport audit");
            Message deviated = strategy.at(i, t);
            deviated.reported_type = r;
            const Rat value = interim_value(env, f, strategy, i, t, ctx, &deviated);
            if (value > base) {
              AuditFinding finding;
              finding.agent = i;
              finding.type = t;
              finding.cls = cls;
              finding.misreport = r;
              finding.gap = value - base;
              findings.push_back(std::move(finding));
            }
          }
          break;
        }
        case DeviationClass::Rule2Flag: {
          require_plain_base(strategy);
          // A plain base keeps the mechanism at the reported-state outcome,
          // so a flag pays exactly when the lifted reply passes the
          // weak-harm test and beats the deceived baseline at this type:
          // the reply search with the strict side pinned to `t`.
          Deception alpha = identity_deception(env);
          for (int j = 0; j < env.agent_count(); ++j) {
            for (int tj = 0; tj < env.type_count(j); ++tj) {
              alpha.maps[static_cast<std::size_t>(j)][static_cast<std::size_t>(tj)] =
                  strategy.at(j, tj).reported_type;
            }
          }
          if (compose(env, f, alpha) == f) {
            // Flags can never strictly pay against truth-equivalent play.
            break;
          }
          auto witness = search_undermining(env, f, alpha, i, ctx, budget, t);
          if (witness) {
            const Rat gap = rule2_flag_gain(env, f, strategy, i, t, witness->reply, ctx);
            AuditFinding finding;
            finding.agent = i;
            finding.type = t;
            finding.cls = cls;
            finding.reply = witness->reply;
            finding.gap = gap;
            findings.push_back(std::move(finding));
          }
          break;
        }
        case DeviationClass::Rule3Vector: {
          budget.charge(1, "rule3-vector audit");
          const Rat base = interim_value(env, f, strategy, i, t, ctx);
          Message deviated = strategy.at(i, t);
          deviated.vector = winning_vector(env, params, strategy, i);
          deviated.flag.reset();
          int best = 0;
          for (int a = 1; a < env.outcome_count(); ++a) {
            if (env.utility(i, a, t) > env.utility(i, best, t)) best = a;
          }
          Scf constant;
          constant.table.assign(env.state_space().size(), best);
          deviated.scf3 = std::move(constant);
          const Rat value = interim_value(env, f, strategy, i, t, ctx, &deviated);
          if (value > base) {
            AuditFinding finding;
            finding.agent = i;
            finding.type = t;
            finding.cls = cls;
            finding.vector = deviated.vector;
            finding.best_outcome = best;
            finding.gap = value - base;
            findings.push_back(std::move(finding));
          }
          break;
        }
      }
    }
  }
  return findings;
}

namespace {

using nlohmann::json;

Scf parse_scf_value(const Environment& env, const Scf& f, const json& value,
                    const std::string& where) {
  if (value.is_string() && value.get<std::string>() == "F") return f;
  if (!value.is_object()) {
    throw ScenarioError(where + " must be \"F\" or an object mapping profiles to outcomes");
  }
  Scf out;
  out.table.assign(env.state_space().size(), -1);
  for (const auto& [key, outcome] : value.items()) {
    auto s = state_from_key(env, key);
    if (!s) throw ScenarioError(where + ": unknown type profile '" + key + "'");
    if (!outcome.is_string()) throw ScenarioError(where + ": outcomes must be strings");
    auto a = env.outcome_index(outcome.get<std::string>());
    if (!a) throw ScenarioError(where + ": unknown outcome '" +
                                outcome.get<std::string>() + "'");
    out.table[*s] = *a;
  }
  for (std::size_t s = 0; s < out.table.size(); ++s) {
    if (out.table[s] < 0) {
      throw ScenarioError(where + ": missing entry for '" + state_key(env, s) + "'");
    }
  }
  return out;
}

// Flags may also be written as reply tables over the others' profiles; they
// are lifted constantly in the flagger's own coordinate.
Scf parse_flag_value(const Environment& env, const Scf& f, int agent, const json& value,
                     const std::string& where) {
  if (value.is_object() && !value.empty()) {
    const std::string first = value.begin().key();
    if (others_from_key(env, agent, first)) {
      Scf out;
      out.table.assign(env.state_space().size(), -1);
      const StateJoiner joiner(env, agent);
      std::vector<int> reply(joiner.others_size(), -1);
      for (const auto& [key, outcome] : value.items()) {
        auto q = others_from_key(env, agent, key);
        if (!q) throw ScenarioError(where + ": unknown profile '" + key + "'");
        if (!outcome.is_string()) throw ScenarioError(where + ": outcomes must be strings");
        auto a = env.outcome_index(outcome.get<std::string>());
        if (!a) throw ScenarioError(where + ": unknown outcome '" +
                                    outcome.get<std::string>() + "'");
        reply[*q] = *a;
      }
      for (std::size_t q = 0; q < reply.size(); ++q) {
        if (reply[q] < 0) {
          throw ScenarioError(where + ": missing entry for '" +
                              others_key(env, agent, q) + "'");
        }
        for (int t = 0; t < env.type_count(agent); ++t) {
          out.table[joiner.state(t, q)] = reply[q];
        }
      }
      return out;
    }
  }
  return parse_scf_value(env, f, value, where);
}

}  // namespace

std::vector<Message> parse_message_profile(const Environment& env, const Scf& f,
                                           const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError(std::string("message profile: ") + e.what());
  }
  if (!root.is_object() || !root.contains("messages") || !root["messages"].is_object()) {
    throw ScenarioError("message profile must be {\"messages\": {agent: message}}");
  }
  std::vector<Message> messages(static_cast<std::size_t>(env.agent_count()));
  std::vector<bool> seen(static_cast<std::size_t>(env.agent_count()), false);
  for (const auto& [agent_name, body] : root["messages"].items()) {
    auto i = env.agent_index(agent_name);
    if (!i) throw ScenarioError("message profile: unknown agent '" + agent_name + "'");
    const std::string where = "messages['" + agent_name + "']";
    if (!body.is_object()) throw ScenarioError(where + " must be an object");
    Message m;
    if (!body.contains("type") || !body["type"].is_string()) {
      throw ScenarioError(where + ": field 'type' must be a type label");
    }
    auto t = env.type_index(*i, body["type"].get<std::string>());
    if (!t) throw ScenarioError(where + ": unknown type '" +
                                body["type"].get<std::string>() + "'");
    m.reported_type = *t;
    if (body.contains("vector") && !body["vector"].is_null()) {
      if (!body["vector"].is_array()) throw ScenarioError(where + ": 'vector' must be an array");
      m.vector = std::vector<int>{};
      for (const auto& e : body["vector"]) {
        if (!e.is_number_integer()) {
          throw ScenarioError(where + ": vector entries must be integers");
        }
        m.vector->push_back(e.get<int>());
      }
    }
    m.scf3 = body.contains("scf") ? parse_scf_value(env, f, body["scf"], where + ".scf") : f;
    if (body.contains("flag") && !body["flag"].is_null()) {
      m.flag = parse_flag_value(env, f, *i, body["flag"], where + ".flag");
    }
    messages[static_cast<std::size_t>(*i)] = std::move(m);
    seen[static_cast<std::size_t>(*i)] = true;
  }
  for (int i = 0; i < env.agent_count(); ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw ScenarioError("message profile: missing message for agent '" +
                          env.agents[static_cast<std::size_t>(i)] + "'");
    }
  }
  const ValidationReport report = validate_messages(env, messages);
  if (!report.ok) {
    throw ScenarioError(report.violations.front().message + " (" +
                        report.violations.front().location + ")");
  }
  return messages;
}

}  // namespace bayimp
