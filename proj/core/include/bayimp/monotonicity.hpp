#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bayimp/beliefs.hpp"
#include "bayimp/budget.hpp"
#include "bayimp/direct_mechanism.hpp"
#include "bayimp/model.hpp"
#include "bayimp/signal_scheme.hpp"

namespace bayimp {

/// Which interim beliefs an undermining check runs under: the prior
/// conditionals, or the posteriors after one realization of the agent's
/// signal.
class BeliefContext {
 public:
  static BeliefContext prior() { return BeliefContext{}; }
  static BeliefContext posterior_of(const SignalScheme& scheme, int realization) {
    BeliefContext ctx;
    ctx.scheme_ = &scheme;
    ctx.realization_ = realization;
    return ctx;
  }

  bool is_posterior() const { return scheme_ != nullptr; }
  int realization() const { return realization_; }
  const SignalScheme* scheme() const { return scheme_; }

  Belief belief(const Environment& env, int agent, int own_type) const;
  std::string describe(const Environment& env, int agent) const;

 private:
  const SignalScheme* scheme_ = nullptr;
  int realization_ = -1;
};

struct UnderminingCheck {
  bool undermines = false;
  int strict_type = -1;  // first type with the strict incentive, when undermining
};

/// Definition of undermining: the reply weakly harms the agent at every own
/// type under truthful play, and strictly helps some type when everyone else
/// follows the deception. Requires F o alpha != F.
UnderminingCheck check_undermines(const Environment& env, const Scf& f,
                                  const Deception& alpha, int agent,
                                  const ReplyFunction& reply, const BeliefContext& ctx);

struct UnderminingWitness {
  int agent = -1;
  ReplyFunction reply;
  int strict_type = -1;
  bool posterior_context = false;
  int realization = -1;  // meaningful when posterior_context
};

/// Exhaustive scan over reply functions in lexicographic outcome order,
/// returning the first witness. Branch-and-bound pruning keeps the scan
/// sound and complete: a partial reply is abandoned only when no completion
/// can satisfy the weak-harm family (lower bounds) or reach any strict gain
/// (upper bounds).
std::optional<UnderminingWitness> search_undermining(
    const Environment& env, const Scf& f, const Deception& alpha, int agent,
    const BeliefContext& ctx, Budget& budget,
    std::optional<int> required_strict_type = std::nullopt);

struct PotentialPair {
  int agent = -1;
  std::size_t profile_a = 0;  // first preferred-truthful profile
  std::size_t profile_b = 0;  // second one
  // profile_a, alpha(-agent)(profile_a), profile_b, alpha(-agent)(profile_b)
  std::array<std::size_t, 4> chain{};
  int strict_a = -1;  // type making the first family strict
  int strict_b = -1;
  bool chain_distinct = false;  // all four chain profiles pairwise distinct
};

struct PotentialScan {
  std::vector<PotentialPair> strong;     // chain pairwise distinct
  std::vector<PotentialPair> weak_only;  // pass the written condition only
};

/// All candidate pairs for the signal construction, canonical order. Empty
/// unless truth-telling is dominant for the agent. Requires F o alpha != F.
PotentialScan scan_potential_pairs(const Environment& env, const Scf& f,
                                   const Deception& alpha, int agent);

/// First pair satisfying the strong (pairwise-distinct chain) condition.
std::optional<PotentialPair> check_potentially_undermines(const Environment& env,
                                                          const Scf& f,
                                                          const Deception& alpha,
                                                          int agent);

struct UnderminedDeception {
  Deception alpha;
  UnderminingWitness witness;
};

struct DeceptionSets {
  std::vector<Deception> undesired;              // equilibria with F o alpha != F
  std::vector<UnderminedDeception> undermined;   // subset with a witness
  std::vector<Deception> residual;               // undesired minus undermined
};

/// Enumerates the undesired equilibria under prior beliefs and splits them
/// by whether any agent (canonical order, first witness wins) undermines.
DeceptionSets compute_deception_sets(const Environment& env, const Scf& f,
                                     Budget& budget);

struct NoSignalVerdict {
  bool ic_ok = false;
  bool residual_empty = false;
  bool fully_implementable = false;  // ic_ok && residual_empty
};

NoSignalVerdict full_implementability_no_signals(const DeceptionSets& sets,
                                                 const IcVerdict& ic);

}  // namespace bayimp
