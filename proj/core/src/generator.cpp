#include "bayimp/generator.hpp"

#include <json.hpp>

#include "bayimp/errors.hpp"

namespace bayimp {

namespace {

int draw(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

GenParams GenParams::small_enumerable() {
  GenParams p;
  p.agents_min = 3;
  p.agents_max = 3;
  p.types_max = 2;
  p.outcomes_min = 2;
  p.outcomes_max = 4;
  return p;
}

GenParams parse_gen_params(const std::string& json_text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioError(std::string("generator template: ") + e.what());
  }
  if (!root.is_object()) throw ScenarioError("generator template must be a JSON object");
  GenParams p;
  auto load = [&](const char* name, int& slot) {
    if (auto it = root.find(name); it != root.end()) {
      if (!it->is_number_integer()) {
        throw ScenarioError(std::string("generator template: '") + name +
                            "' must be an integer");
      }
      slot = it->get<int>();
    }
  };
  load("agents_min", p.agents_min);
  load("agents_max", p.agents_max);
  load("types_max", p.types_max);
  load("outcomes_min", p.outcomes_min);
  load("outcomes_max", p.outcomes_max);
  load("prior_weight_max", p.prior_weight_max);
  load("util_num_max", p.util_num_max);
  load("util_den_max", p.util_den_max);
  load("realizations_max", p.realizations_max);
  load("likelihood_weight_max", p.likelihood_weight_max);
  return p;
}

std::string serialize_gen_params(const GenParams& p) {
  nlohmann::ordered_json root;
  root["agents_min"] = p.agents_min;
  root["agents_max"] = p.agents_max;
  root["types_max"] = p.types_max;
  root["outcomes_min"] = p.outcomes_min;
  root["outcomes_max"] = p.outcomes_max;
  root["prior_weight_max"] = p.prior_weight_max;
  root["util_num_max"] = p.util_num_max;
  root["util_den_max"] = p.util_den_max;
  root["realizations_max"] = p.realizations_max;
  root["likelihood_weight_max"] = p.likelihood_weight_max;
  return root.dump(2) + "\n";
}

Environment random_environment(std::mt19937_64& rng, const GenParams& params) {
  Environment env;
  const int n = draw(rng, params.agents_min, params.agents_max);
  for (int i = 0; i < n; ++i) env.agents.push_back("a" + std::to_string(i + 1));
  env.types.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int k = draw(rng, 1, params.types_max);
    for (int t = 0; t < k; ++t) {
      env.types[static_cast<std::size_t>(i)].push_back("t" + std::to_string(i + 1) +
                                                       std::to_string(t + 1));
    }
  }
  const int na = draw(rng, params.outcomes_min, params.outcomes_max);
  for (int a = 0; a < na; ++a) env.outcomes.push_back("o" + std::to_string(a + 1));

  const std::size_t states = env.state_space().size();
  std::vector<long> weights(states);
  long total = 0;
  for (auto& w : weights) {
    w = draw(rng, 1, params.prior_weight_max);
    total += w;
  }
  env.prior.reserve(states);
  for (long w : weights) env.prior.push_back(make_rat(w, total));

  env.utilities.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& table = env.utilities[static_cast<std::size_t>(i)];
    table.resize(static_cast<std::size_t>(na));
    for (int a = 0; a < na; ++a) {
      for (int t = 0; t < env.type_count(i); ++t) {
        table[static_cast<std::size_t>(a)].push_back(
            make_rat(draw(rng, -params.util_num_max, params.util_num_max),
                     draw(rng, 1, params.util_den_max)));
      }
    }
  }
  return env;
}

Scf random_scf(std::mt19937_64& rng, const Environment& env) {
  Scf f;
  const std::size_t states = env.state_space().size();
  f.table.reserve(states);
  for (std::size_t s = 0; s < states; ++s) {
    f.table.push_back(draw(rng, 0, env.outcome_count() - 1));
  }
  return f;
}

SignalScheme random_scheme(std::mt19937_64& rng, const Environment& env,
                           const GenParams& params) {
  SignalScheme scheme;
  for (int i = 0; i < env.agent_count(); ++i) {
    AgentSignal sig;
    const int k = draw(rng, 1, params.realizations_max);
    for (int x = 0; x < k; ++x) sig.realizations.push_back("x" + std::to_string(x));
    const std::size_t others = env.others_space(i).size();
    sig.likelihood.resize(others);
    for (std::size_t q = 0; q < others; ++q) {
      std::vector<long> weights(static_cast<std::size_t>(k));
      long total = 0;
      for (auto& w : weights) {
        w = draw(rng, 1, params.likelihood_weight_max);
        total += w;
      }
      for (long w : weights) sig.likelihood[q].push_back(make_rat(w, total));
    }
    scheme.per_agent.push_back(std::move(sig));
  }
  return scheme;
}

Scenario random_scenario(std::mt19937_64& rng, const GenParams& params,
                         bool with_signals) {
  Scenario scenario;
  scenario.env = random_environment(rng, params);
  scenario.scf = random_scf(rng, scenario.env);
  if (with_signals) {
    scenario.signals = random_scheme(rng, scenario.env, params);
  }
  return scenario;
}

}  // namespace bayimp
