#include "bayimp/signal_scheme.hpp"

namespace bayimp {

AgentSignal uninformative_signal(const Environment& env, int agent) {
  AgentSignal sig;
  sig.realizations = {"*"};
  sig.likelihood.assign(env.others_space(agent).size(), {Rat(1)});
  return sig;
}

SignalScheme uninformative_scheme(const Environment& env) {
  SignalScheme scheme;
  scheme.per_agent.reserve(static_cast<std::size_t>(env.agent_count()));
  for (int i = 0; i < env.agent_count(); ++i) {
    scheme.per_agent.push_back(uninformative_signal(env, i));
  }
  return scheme;
}

bool is_informative(const AgentSignal& sig) {
  if (sig.likelihood.empty()) return false;
  for (int x = 0; x < sig.realization_count(); ++x) {
    const Rat& first = sig.likelihood.front()[static_cast<std::size_t>(x)];
    for (const auto& row : sig.likelihood) {
      if (row[static_cast<std::size_t>(x)] != first) return true;
    }
  }
  return false;
}

ValidationReport validate_scheme(const Environment& env, const SignalScheme& scheme) {
  ValidationReport report;
  if (static_cast<int>(scheme.per_agent.size()) != env.agent_count()) {
    report.add("signals_total", "signals", "scheme must name every agent");
    return report;
  }
  for (int i = 0; i < env.agent_count(); ++i) {
    const auto& sig = scheme.per_agent[static_cast<std::size_t>(i)];
    const std::string loc = "signals[" + env.agents[static_cast<std::size_t>(i)] + "]";
    if (sig.realizations.empty()) {
      report.add("signal_realizations", loc, "at least one realization required");
      continue;
    }
    const std::size_t others = env.others_space(i).size();
    if (sig.likelihood.size() != others) {
      report.add("signal_total", loc,
                 "likelihood must cover every profile of the other agents");
      continue;
    }
    for (std::size_t q = 0; q < others; ++q) {
      const auto& row = sig.likelihood[q];
      if (row.size() != sig.realizations.size()) {
        report.add("signal_total", loc + "[" + others_key(env, i, q) + "]",
                   "distribution must cover every realization");
        continue;
      }
      Rat total = 0;
      for (const Rat& p : row) {
        if (p <= 0) {
          report.add("signal_full_support", loc + "[" + others_key(env, i, q) + "]",
                     "full support violated: realization probability is not strictly positive");
        }
        total += p;
      }
      if (total != 1) {
        report.add("signal_normalized", loc + "[" + others_key(env, i, q) + "]",
                   "distribution sums to " + rational_to_string(total));
      }
    }
  }
  return report;
}

}  // namespace bayimp
