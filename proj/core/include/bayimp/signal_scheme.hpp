#pragma once

#include <string>
#include <vector>

#include "bayimp/model.hpp"
#include "bayimp/rational.hpp"

namespace bayimp {

/// One agent's signal about the others' type profile: a full-support
/// conditional distribution over finitely many realizations.
struct AgentSignal {
  std::vector<std::string> realizations;        // file order
  std::vector<std::vector<Rat>> likelihood;     // [others index][realization]

  int realization_count() const { return static_cast<int>(realizations.size()); }
  bool operator==(const AgentSignal&) const = default;
};

struct SignalScheme {
  std::vector<AgentSignal> per_agent;  // one entry per agent, in agent order
  bool operator==(const SignalScheme&) const = default;
};

/// Single-realization signal carrying no information.
AgentSignal uninformative_signal(const Environment& env, int agent);

/// Scheme where every agent's signal is uninformative.
SignalScheme uninformative_scheme(const Environment& env);

/// True when some realization's likelihood differs across profiles of the
/// other agents (an uninformative signal leaves every posterior untouched).
bool is_informative(const AgentSignal& sig);

ValidationReport validate_scheme(const Environment& env, const SignalScheme& scheme);

}  // namespace bayimp
