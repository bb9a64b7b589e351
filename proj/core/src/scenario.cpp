#include "bayimp/scenario.hpp"

#include <set>
#include <utility>

#include <json.hpp>

#include "bayimp/errors.hpp"

namespace bayimp {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

// nlohmann keeps the last value on duplicate object keys, so duplicates are
// hunted with a parser callback before anything else is interpreted.
json parse_json_checked(const std::string& text) {
  std::vector<std::set<std::string>> seen;
  std::vector<std::string> path;
  std::string last_key = "<root>";
  json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event,
                                   json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        path.push_back(last_key);
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        path.pop_back();
        break;
      case json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!seen.back().insert(key).second) {
          throw ScenarioError("duplicate entry '" + key + "' under '" + path.back() + "'");
        }
        last_key = key;
        break;
      }
      default:
        break;
    }
    return true;
  };
  try {
    return json::parse(text, cb);
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ScenarioError("syntax error at line " + std::to_string(line) + ", column " +
                            std::to_string(column) + ": " + e.what(),
                        line, column);
  }
}

const json& require_field(const json& root, const char* name, json::value_t type,
                          const char* type_name) {
  auto it = root.find(name);
  if (it == root.end()) throw ScenarioError(std::string("missing field '") + name + "'");
  if (it->type() != type) {
    throw ScenarioError(std::string("field '") + name + "' must be " + type_name);
  }
  return *it;
}

std::string require_string(const json& value, const std::string& where) {
  if (!value.is_string()) throw ScenarioError(where + " must be a string");
  return value.get<std::string>();
}

void check_label(const std::string& label, const std::string& where) {
  if (label.empty()) throw ScenarioError(where + ": empty label");
  if (label.find('|') != std::string::npos) {
    throw ScenarioError(where + ": label '" + label + "' contains reserved character '|'");
  }
}

std::size_t require_state(const Environment& env, const std::string& key,
                          const std::string& where) {
  auto s = state_from_key(env, key);
  if (!s) throw ScenarioError(where + ": unknown type profile '" + key + "'");
  return *s;
}

}  // namespace

Scenario parse_scenario(const std::string& text, bool validate) {
  const json root = parse_json_checked(text);
  if (!root.is_object()) throw ScenarioError("scenario must be a JSON object");

  Scenario scenario;
  Environment& env = scenario.env;

  for (const auto& a : require_field(root, "agents", json::value_t::array, "an array")) {
    const auto name = require_string(a, "agents entry");
    check_label(name, "agents");
    if (env.agent_index(name)) throw ScenarioError("duplicate agent '" + name + "'");
    env.agents.push_back(name);
  }
  if (env.agents.empty()) throw ScenarioError("at least one agent required");

  const json& types = require_field(root, "types", json::value_t::object, "an object");
  env.types.resize(env.agents.size());
  for (const auto& [agent_name, labels] : types.items()) {
    auto i = env.agent_index(agent_name);
    if (!i) throw ScenarioError("types: unknown agent '" + agent_name + "'");
    if (!labels.is_array()) throw ScenarioError("types['" + agent_name + "'] must be an array");
    auto& space = env.types[static_cast<std::size_t>(*i)];
    for (const auto& l : labels) {
      const auto label = require_string(l, "types['" + agent_name + "'] entry");
      check_label(label, "types['" + agent_name + "']");
      if (env.type_index(*i, label)) {
        throw ScenarioError("duplicate type '" + label + "' for agent '" + agent_name + "'");
      }
      space.push_back(label);
    }
    if (space.empty()) throw ScenarioError("types['" + agent_name + "'] must be non-empty");
  }
  for (std::size_t i = 0; i < env.agents.size(); ++i) {
    if (env.types[i].empty()) {
      throw ScenarioError("types: missing type space for agent '" + env.agents[i] + "'");
    }
  }

  for (const auto& o : require_field(root, "outcomes", json::value_t::array, "an array")) {
    const auto label = require_string(o, "outcomes entry");
    check_label(label, "outcomes");
    if (env.outcome_index(label)) throw ScenarioError("duplicate outcome '" + label + "'");
    env.outcomes.push_back(label);
  }
  if (env.outcomes.empty()) throw ScenarioError("at least one outcome required");

  const ProfileSpace space = env.state_space();
  env.prior.assign(space.size(), Rat(0));
  const json& prior = require_field(root, "prior", json::value_t::object, "an object");
  for (const auto& [key, value] : prior.items()) {
    const std::size_t s = require_state(env, key, "prior");
    env.prior[s] = parse_rational(require_string(value, "prior['" + key + "']"));
  }

  const json& utilities = require_field(root, "utilities", json::value_t::object, "an object");
  env.utilities.resize(env.agents.size());
  for (std::size_t i = 0; i < env.agents.size(); ++i) {
    env.utilities[i].assign(env.outcomes.size(),
                            std::vector<Rat>(env.types[i].size(), Rat(0)));
  }
  std::set<std::pair<int, std::string>> utility_seen;
  for (const auto& [agent_name, table] : utilities.items()) {
    auto i = env.agent_index(agent_name);
    if (!i) throw ScenarioError("utilities: unknown agent '" + agent_name + "'");
    if (!table.is_object()) {
      throw ScenarioError("utilities['" + agent_name + "'] must be an object");
    }
    for (const auto& [key, value] : table.items()) {
      const auto sep = key.rfind('|');
      if (sep == std::string::npos) {
        throw ScenarioError("utilities['" + agent_name + "']: key '" + key +
                            "' must be 'outcome|own_type'");
      }
      auto a = env.outcome_index(key.substr(0, sep));
      auto t = env.type_index(*i, key.substr(sep + 1));
      if (!a) {
        throw ScenarioError("utilities['" + agent_name + "']: unknown outcome in '" + key + "'");
      }
      if (!t) {
        throw ScenarioError("utilities['" + agent_name + "']: unknown type in '" + key + "'");
      }
      env.utilities[static_cast<std::size_t>(*i)][static_cast<std::size_t>(*a)]
                   [static_cast<std::size_t>(*t)] =
          parse_rational(require_string(value, "utilities['" + agent_name + "']['" + key + "']"));
      utility_seen.insert({*i, key});
    }
  }
  for (int i = 0; i < env.agent_count(); ++i) {
    const std::size_t expect =
        static_cast<std::size_t>(env.outcome_count()) *
        static_cast<std::size_t>(env.type_count(i));
    std::size_t have = 0;
    for (const auto& [agent, key] : utility_seen) have += (agent == i);
    if (have != expect) {
      throw ScenarioError("utilities['" + env.agents[static_cast<std::size_t>(i)] +
                          "']: table must cover every outcome|own_type pair (" +
                          std::to_string(have) + " of " + std::to_string(expect) + ")");
    }
  }

  const json& scf = require_field(root, "scf", json::value_t::object, "an object");
  scenario.scf.table.assign(space.size(), -1);
  for (const auto& [key, value] : scf.items()) {
    const std::size_t s = require_state(env, key, "scf");
    auto a = env.outcome_index(require_string(value, "scf['" + key + "']"));
    if (!a) throw ScenarioError("scf['" + key + "']: unknown outcome");
    scenario.scf.table[s] = *a;
  }
  for (std::size_t s = 0; s < scenario.scf.table.size(); ++s) {
    if (scenario.scf.table[s] < 0) {
      throw ScenarioError("scf: missing entry for '" + state_key(env, s) + "'");
    }
  }

  if (auto it = root.find("signals"); it != root.end()) {
    if (!it->is_object()) throw ScenarioError("field 'signals' must be an object");
    SignalScheme scheme = uninformative_scheme(env);
    for (const auto& [agent_name, block] : it->items()) {
      auto i = env.agent_index(agent_name);
      if (!i) throw ScenarioError("signals: unknown agent '" + agent_name + "'");
      AgentSignal sig;
      const json& realizations =
          require_field(block, "realizations", json::value_t::array, "an array");
      for (const auto& r : realizations) {
        const auto label = require_string(r, "signals['" + agent_name + "'] realization");
        check_label(label, "signals['" + agent_name + "']");
        for (const auto& existing : sig.realizations) {
          if (existing == label) {
            throw ScenarioError("signals['" + agent_name + "']: duplicate realization '" +
                                label + "'");
          }
        }
        sig.realizations.push_back(label);
      }
      if (sig.realizations.empty()) {
        throw ScenarioError("signals['" + agent_name + "']: at least one realization required");
      }
      const std::size_t others = env.others_space(*i).size();
      sig.likelihood.assign(others, std::vector<Rat>(sig.realizations.size(), Rat(0)));
      const json& likelihood =
          require_field(block, "likelihood", json::value_t::object, "an object");
      for (const auto& [key, dist] : likelihood.items()) {
        auto q = others_from_key(env, *i, key);
        if (!q) {
          throw ScenarioError("signals['" + agent_name + "']: unknown profile '" + key + "'");
        }
        if (!dist.is_object()) {
          throw ScenarioError("signals['" + agent_name + "']['" + key + "'] must be an object");
        }
        for (const auto& [rlabel, p] : dist.items()) {
          int x = -1;
          for (int k = 0; k < sig.realization_count(); ++k) {
            if (sig.realizations[static_cast<std::size_t>(k)] == rlabel) x = k;
          }
          if (x < 0) {
            throw ScenarioError("signals['" + agent_name + "']: unknown realization '" +
                                rlabel + "'");
          }
          sig.likelihood[*q][static_cast<std::size_t>(x)] = parse_rational(
              require_string(p, "signals['" + agent_name + "']['" + key + "']['" + rlabel + "']"));
        }
      }
      scheme.per_agent[static_cast<std::size_t>(*i)] = std::move(sig);
    }
    scenario.signals = std::move(scheme);
  }

  if (auto it = root.find("deceptions"); it != root.end()) {
    if (!it->is_object()) throw ScenarioError("field 'deceptions' must be an object");
    for (const auto& [name, table] : it->items()) {
      if (!table.is_object()) {
        throw ScenarioError("deceptions['" + name + "'] must be an object");
      }
      Deception alpha = identity_deception(env);
      for (const auto& [agent_name, m] : table.items()) {
        auto i = env.agent_index(agent_name);
        if (!i) throw ScenarioError("deceptions['" + name + "']: unknown agent '" +
                                    agent_name + "'");
        if (!m.is_object()) {
          throw ScenarioError("deceptions['" + name + "']['" + agent_name +
                              "'] must be an object");
        }
        for (const auto& [from, to] : m.items()) {
          auto tf = env.type_index(*i, from);
          auto tt = env.type_index(*i, require_string(to, "deceptions['" + name + "']"));
          if (!tf || !tt) {
            throw ScenarioError("deceptions['" + name + "']: unknown type for agent '" +
                                agent_name + "'");
          }
          alpha.maps[static_cast<std::size_t>(*i)][static_cast<std::size_t>(*tf)] = *tt;
        }
      }
      scenario.deceptions.emplace(name, std::move(alpha));
    }
  }

  if (validate) {
    const ValidationReport report = validate_scenario(scenario);
    if (!report.ok) {
      const auto& v = report.violations.front();
      throw ScenarioError(v.message + " (" + v.location + ")");
    }
  }
  return scenario;
}

ValidationReport validate_scenario(const Scenario& scenario) {
  ValidationReport report = validate_environment(scenario.env);
  const ValidationReport scf_report = validate_scf(scenario.env, scenario.scf);
  for (const auto& v : scf_report.violations) report.add(v.check, v.location, v.message);
  if (scenario.signals) {
    const ValidationReport sig_report = validate_scheme(scenario.env, *scenario.signals);
    for (const auto& v : sig_report.violations) report.add(v.check, v.location, v.message);
  }
  return report;
}

std::string serialize_scenario(const Scenario& scenario) {
  const Environment& env = scenario.env;
  ordered_json root;
  root["agents"] = env.agents;
  ordered_json types = ordered_json::object();
  for (int i = 0; i < env.agent_count(); ++i) {
    types[env.agents[static_cast<std::size_t>(i)]] = env.types[static_cast<std::size_t>(i)];
  }
  root["types"] = std::move(types);
  root["outcomes"] = env.outcomes;

  ordered_json prior = ordered_json::object();
  for (std::size_t s = 0; s < env.prior.size(); ++s) {
    prior[state_key(env, s)] = rational_to_string(env.prior[s]);
  }
  root["prior"] = std::move(prior);

  ordered_json utilities = ordered_json::object();
  for (int i = 0; i < env.agent_count(); ++i) {
    ordered_json table = ordered_json::object();
    for (int a = 0; a < env.outcome_count(); ++a) {
      for (int t = 0; t < env.type_count(i); ++t) {
        table[env.outcomes[static_cast<std::size_t>(a)] + "|" +
              env.types[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]] =
            rational_to_string(env.utility(i, a, t));
      }
    }
    utilities[env.agents[static_cast<std::size_t>(i)]] = std::move(table);
  }
  root["utilities"] = std::move(utilities);

  ordered_json scf = ordered_json::object();
  for (std::size_t s = 0; s < scenario.scf.table.size(); ++s) {
    scf[state_key(env, s)] =
        env.outcomes[static_cast<std::size_t>(scenario.scf.table[s])];
  }
  root["scf"] = std::move(scf);

  if (scenario.signals) {
    ordered_json signals = ordered_json::object();
    for (int i = 0; i < env.agent_count(); ++i) {
      const auto& sig = scenario.signals->per_agent[static_cast<std::size_t>(i)];
      ordered_json block;
      block["realizations"] = sig.realizations;
      ordered_json likelihood = ordered_json::object();
      for (std::size_t q = 0; q < sig.likelihood.size(); ++q) {
        ordered_json dist = ordered_json::object();
        for (int x = 0; x < sig.realization_count(); ++x) {
          dist[sig.realizations[static_cast<std::size_t>(x)]] =
              rational_to_string(sig.likelihood[q][static_cast<std::size_t>(x)]);
        }
        likelihood[others_key(env, i, q)] = std::move(dist);
      }
      block["likelihood"] = std::move(likelihood);
      signals[env.agents[static_cast<std::size_t>(i)]] = std::move(block);
    }
    root["signals"] = std::move(signals);
  }

  if (!scenario.deceptions.empty()) {
    ordered_json deceptions = ordered_json::object();
    for (const auto& [name, alpha] : scenario.deceptions) {
      ordered_json table = ordered_json::object();
      for (int i = 0; i < env.agent_count(); ++i) {
        ordered_json m = ordered_json::object();
        for (int t = 0; t < env.type_count(i); ++t) {
          m[env.types[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]] =
              env.types[static_cast<std::size_t>(i)]
                       [static_cast<std::size_t>(alpha.report(i, t))];
        }
        table[env.agents[static_cast<std::size_t>(i)]] = std::move(m);
      }
      deceptions[name] = std::move(table);
    }
    root["deceptions"] = std::move(deceptions);
  }

  return root.dump(2) + "\n";
}

}  // namespace bayimp
