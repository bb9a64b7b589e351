#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bayimp/beliefs.hpp"
#include "bayimp/budget.hpp"
#include "bayimp/model.hpp"
#include "bayimp/signal_scheme.hpp"

namespace bayimp {

/// Per-agent self-maps on own types. Doubles as a pure strategy profile of
/// the direct mechanism (each type reports its image).
struct Deception {
  std::vector<std::vector<int>> maps;  // [agent][true type] -> reported type

  int report(int agent, int type) const {
    return maps[static_cast<std::size_t>(agent)][static_cast<std::size_t>(type)];
  }
  bool is_identity() const;
  bool operator==(const Deception&) const = default;
};

Deception identity_deception(const Environment& env);

/// (F o alpha)(theta) = F(alpha_1(theta_1), ..., alpha_n(theta_n)).
Scf compose(const Environment& env, const Scf& f, const Deception& alpha);

/// Maps each profile of the agents other than `agent` through the others'
/// components of `alpha`. Indexed over the others space of `agent`.
std::vector<std::size_t> others_deception_map(const Environment& env,
                                              const Deception& alpha, int agent);

struct IcViolation {
  int agent;
  int true_type;
  int misreport;
  int realization;  // -1 when no signal is involved
  Rat gap;          // strictly positive payoff advantage of the misreport
};

struct IcVerdict {
  bool ok = true;
  std::vector<IcViolation> violations;
};

/// Truth-telling must be interim-optimal for every agent and type under
/// prior-conditional beliefs.
IcVerdict check_incentive_compatibility(const Environment& env, const Scf& f);

/// Same requirement in every realization of each agent's signal, under the
/// corresponding posterior beliefs.
IcVerdict check_ic_with_signals(const Environment& env, const Scf& f,
                                const SignalScheme& scheme);

struct DominanceWitness {
  int true_type;
  int misreport;
  std::size_t others_index;  // profile where the misreport beats the truth
};

struct DominanceResult {
  bool dominant = true;
  std::optional<DominanceWitness> witness;
};

/// Pointwise (belief-free) optimality of truthful reporting for one agent.
DominanceResult is_dominant_truthtelling(const Environment& env, const Scf& f, int agent);

struct DeviationWitness {
  int agent;
  int type;
  int better_report;
  Rat gap;
};

/// First profitable unilateral deviation from `alpha` in canonical order, or
/// nullopt when `alpha` is an equilibrium under `beliefs`.
std::optional<DeviationWitness> find_profitable_deviation(const Environment& env,
                                                          const Scf& f,
                                                          const Deception& alpha,
                                                          const BeliefSystem& beliefs);

bool is_direct_equilibrium(const Environment& env, const Scf& f, const Deception& alpha,
                           const BeliefSystem& beliefs);

struct EquilibriumSet {
  std::vector<Deception> equilibria;  // canonical enumeration order
  bool contains_truth = false;
};

/// Number of deceptions, prod_i |Theta_i|^|Theta_i|.
Int deception_space_size(const Environment& env);

/// Exhaustive scan of all deceptions in lexicographic order over the
/// per-agent report tables.
EquilibriumSet enumerate_direct_equilibria(const Environment& env, const Scf& f,
                                           const BeliefSystem& beliefs, Budget& budget);

}  // namespace bayimp
