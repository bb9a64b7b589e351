#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bayimp/rational.hpp"

namespace bayimp {

/// Mixed-radix index over an ordered list of finite dimensions. The first
/// coordinate is the most significant, so enumeration order by index is
/// lexicographic in file order. This order fixes every tie-break downstream.
class ProfileSpace {
 public:
  ProfileSpace() = default;
  explicit ProfileSpace(std::vector<int> dims);

  std::size_t size() const { return size_; }
  int dim_count() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_[static_cast<std::size_t>(k)]; }

  std::size_t index(std::span<const int> coords) const;
  void decode(std::size_t idx, std::span<int> out) const;
  std::vector<int> coords(std::size_t idx) const;

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

/// Agents, type spaces, outcomes, full-support prior and private-value
/// utilities. Lists keep file order; all tables are dense over the
/// corresponding profile space. Immutable by convention after construction.
struct Environment {
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> types;  // [agent][type]
  std::vector<std::string> outcomes;
  std::vector<Rat> prior;  // [state], state space = product of type spaces
  std::vector<std::vector<std::vector<Rat>>> utilities;  // [agent][outcome][own type]

  int agent_count() const { return static_cast<int>(agents.size()); }
  int type_count(int agent) const {
    return static_cast<int>(types[static_cast<std::size_t>(agent)].size());
  }
  int outcome_count() const { return static_cast<int>(outcomes.size()); }

  ProfileSpace state_space() const;
  ProfileSpace others_space(int agent) const;

  const Rat& utility(int agent, int outcome, int own_type) const {
    return utilities[static_cast<std::size_t>(agent)][static_cast<std::size_t>(outcome)]
                    [static_cast<std::size_t>(own_type)];
  }

  std::optional<int> agent_index(std::string_view name) const;
  std::optional<int> type_index(int agent, std::string_view label) const;
  std::optional<int> outcome_index(std::string_view label) const;

  bool operator==(const Environment&) const = default;
};

/// Precomputed (own type, others-profile index) -> full state index table
/// for one agent. Build once outside hot loops.
class StateJoiner {
 public:
  StateJoiner(const Environment& env, int agent);

  std::size_t state(int own_type, std::size_t others_index) const {
    return table_[others_index * static_cast<std::size_t>(own_types_) +
                  static_cast<std::size_t>(own_type)];
  }
  std::size_t others_size() const { return others_size_; }

 private:
  int own_types_ = 0;
  std::size_t others_size_ = 0;
  std::vector<std::size_t> table_;
};

/// Social choice function: outcome index per full state index.
struct Scf {
  std::vector<int> table;
  bool operator==(const Scf&) const = default;
};

/// Alternate outcome rule an agent may propose: outcome per profile of the
/// other agents.
struct ReplyFunction {
  int agent = -1;
  std::vector<int> table;  // [others index] -> outcome
  bool operator==(const ReplyFunction&) const = default;
};

struct Violation {
  std::string check;
  std::string location;
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;

  void add(std::string check, std::string location, std::string message) {
    ok = false;
    violations.push_back({std::move(check), std::move(location), std::move(message)});
  }
};

struct EconomicWitness {
  std::size_t state;
  int agent_a;
  int better_a;  // outcome agent_a strictly prefers to the prescribed one
  int agent_b;
  int better_b;
};

struct EconomicVerdict {
  bool economic = true;
  std::vector<EconomicWitness> witnesses;        // one per state when economic
  std::optional<std::size_t> failing_state;      // first offender otherwise
};

ValidationReport validate_environment(const Environment& env);

/// Checks totality of the SCF table and membership of its values.
ValidationReport validate_scf(const Environment& env, const Scf& f);

/// At every state at least two agents must strictly prefer some other
/// outcome to the prescribed one. Witnesses are canonically first.
EconomicVerdict check_economic(const Environment& env, const Scf& f);

/// "|"-joined type labels of a full state, in agent order.
std::string state_key(const Environment& env, std::size_t state);
/// Same for a profile of agents other than `agent`.
std::string others_key(const Environment& env, int agent, std::size_t others_index);

std::optional<std::size_t> state_from_key(const Environment& env, std::string_view key);
std::optional<std::size_t> others_from_key(const Environment& env, int agent,
                                           std::string_view key);

}  // namespace bayimp
