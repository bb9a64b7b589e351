#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bayimp/budget.hpp"
#include "bayimp/direct_mechanism.hpp"
#include "bayimp/interval.hpp"
#include "bayimp/model.hpp"
#include "bayimp/monotonicity.hpp"
#include "bayimp/signal_scheme.hpp"

namespace bayimp {

/// Binary signal telling `agent`, with accuracy tau in (1/2, 1), whether the
/// others' profile lies in `group0`: Pr("0" | q in group0) = tau and
/// Pr("1" | q outside) = tau. Full support since tau < 1.
AgentSignal build_signal(const Environment& env, int agent,
                         const std::vector<bool>& group0, const Rat& tau);

/// Reply that swaps the prescribed outcomes of two profiles of the others
/// and copies F elsewhere, all evaluated at a fixed own type.
ReplyFunction swap_reply(const Environment& env, const Scf& f, int agent,
                         std::size_t profile_x, std::size_t profile_y,
                         int eval_own_type);

/// group0 of the binary signal for a potential pair:
/// {chain[0], chain[3]} plus every profile alpha maps onto chain[2].
std::vector<bool> signal_group0(const Environment& env, const Deception& alpha,
                                int agent, const PotentialPair& pair);

/// Exact set of accuracies tau in (1/2, 1) for which the two swap replies
/// undermine alpha in their respective realizations. Every inequality is
/// affine in tau once the positive posterior normalizer is cleared, so the
/// set is an intersection/union of exact half-lines.
RatIntervalSet tau_threshold(const Environment& env, const Scf& f,
                             const Deception& alpha, int agent,
                             const PotentialPair& pair);

struct SynthesizedSignal {
  int agent = -1;
  PotentialPair pair;
  std::vector<bool> group0;
  Rat tau;                      // midpoint of the rightmost feasible interval
  RatIntervalSet tau_feasible;  // exact feasible accuracy set
  ReplyFunction reply0;         // undermining reply in realization "0"
  ReplyFunction reply1;         // undermining reply in realization "1"
  AgentSignal signal;
  std::vector<PotentialPair> alternates;  // other strong pairs, for reports
};

/// Runs the pair scan and, when a pair exists, assembles the binary signal,
/// replies and accuracy. Both realizations are revalidated through
/// check_undermines before returning. Returns nullopt when no pair exists;
/// throws ConstructionInfeasible when the feasible accuracy set is empty.
std::optional<SynthesizedSignal> synthesize_signal(const Environment& env, const Scf& f,
                                                   const Deception& alpha, int agent,
                                                   std::optional<Rat> tau_override =
                                                       std::nullopt);

struct RealizationDiff {
  std::vector<int> realization_profile;  // per agent
  std::vector<Deception> added;
  std::vector<Deception> removed;
};

struct PreservationResult {
  bool preserved = true;
  std::vector<RealizationDiff> diffs;
};

/// Re-enumerates the direct-mechanism equilibria under the posterior beliefs
/// of every joint realization of the informative signals and compares with
/// the no-signal set.
PreservationResult verify_equilibrium_preservation(const Environment& env, const Scf& f,
                                                   const SignalScheme& scheme,
                                                   Budget& budget);

struct SignalPlan {
  struct Assignment {
    Deception alpha;
    int agent = -1;
    SynthesizedSignal signal;
  };
  std::vector<Assignment> assignments;
  std::vector<int> j_set;
  struct PreservedUnderminer {
    Deception alpha;
    int agent = -1;
    UnderminingWitness witness;
  };
  std::vector<PreservedUnderminer> preserved;
  SignalScheme scheme;
};

struct PlanChecks {
  bool preservation_ok = false;
  bool residual_undermining_ok = false;
  bool preserved_witnesses_ok = false;
  bool ic_with_signals_ok = false;
  PreservationResult preservation;

  bool all_ok() const {
    return preservation_ok && residual_undermining_ok && preserved_witnesses_ok &&
           ic_with_signals_ok;
  }
};

struct PlanResult {
  IcVerdict ic;
  DeceptionSets sets;
  std::optional<SignalPlan> plan;
  std::optional<PlanChecks> checks;
  bool fully_implementable = false;
  std::string bottleneck;  // set when no verified plan exists
  bool relaxation_would_unlock = false;
  std::vector<std::string> anomalies;  // infeasible constructions encountered
};

/// Searches for an injective assignment of residual deceptions to agents
/// that can potentially undermine them, such that every undermined deception
/// keeps an underminer outside the assigned set. On success, synthesizes the
/// signals and verifies preservation, per-realization undermining, the
/// preserved witnesses and incentive compatibility under the scheme.
PlanResult plan_full_implementation(const Environment& env, const Scf& f, Budget& budget,
                                    std::optional<Rat> tau_override = std::nullopt);

}  // namespace bayimp
