#pragma once

#include <map>
#include <optional>
#include <string>

#include "bayimp/direct_mechanism.hpp"
#include "bayimp/model.hpp"
#include "bayimp/signal_scheme.hpp"

namespace bayimp {

struct Scenario {
  Environment env;
  Scf scf;
  std::optional<SignalScheme> signals;
  // Optional named deceptions for CLI convenience ("truth" is built in).
  std::map<std::string, Deception> deceptions;
};

/// Parses a UTF-8 JSON scenario. Structural problems (syntax, unknown label
/// references, bad rational literals, duplicate keys) throw ScenarioError.
/// With `validate` set, environment/SCF/signal invariant failures also throw,
/// carrying the first violation message.
Scenario parse_scenario(const std::string& text, bool validate = true);

/// Full invariant check: environment, SCF, and signal scheme when present.
ValidationReport validate_scenario(const Scenario& scenario);

/// Canonical JSON emission. Parsing the result reproduces the scenario
/// exactly (order of agents/types/outcomes and all rationals preserved).
std::string serialize_scenario(const Scenario& scenario);

}  // namespace bayimp
