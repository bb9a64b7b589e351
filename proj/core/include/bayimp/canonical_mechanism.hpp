#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bayimp/budget.hpp"
#include "bayimp/direct_mechanism.hpp"
#include "bayimp/model.hpp"
#include "bayimp/monotonicity.hpp"

namespace bayimp {

/// Dimensions of the augmented mechanism. The integer-vector space and the
/// SCF space are tracked symbolically; neither is ever materialized.
struct MechanismParams {
  int max_types = 0;       // S = max_i |Theta_i|
  int vector_length = 0;   // K = n(S+1)
  int entry_max = 0;       // vector entries range over 0..S^2
  Int vector_space_size;   // (S^2+1)^K
  Int scf_space_size;      // |A|^|Theta|

  static MechanismParams from(const Environment& env);
  bool scf_space_materializable(const Budget& budget) const;
};

/// One agent's message: a type report, an optional integer vector, an SCF,
/// and an optional flagged alternate SCF.
struct Message {
  int reported_type = 0;
  std::optional<std::vector<int>> vector;
  Scf scf3;
  std::optional<Scf> flag;

  bool plain() const { return !vector && !flag; }
  bool operator==(const Message&) const = default;
};

enum class RuleKind { Rule1, Rule2, Rule3 };

struct RuleClass {
  RuleKind kind = RuleKind::Rule1;
  int flagger = -1;  // the flagging agent under Rule 2
};

// The three predicates are exposed separately so the partition property can
// be asserted directly.
bool rule1_applies(const std::vector<Message>& messages);
bool rule2_applies(const std::vector<Message>& messages, int* flagger = nullptr);
bool rule3_applies(const std::vector<Message>& messages);

RuleClass classify_rule(const std::vector<Message>& messages);

struct Rule3Winner {
  int winner = -1;
  // Rule 3 can fire with flags and no integer vectors; the winner rule is
  // then undefined as stated, and the flagging agents stand in for the
  // vector-carrying set.
  bool i0_empty_fallback = false;
};

Rule3Winner rule3_winner(const MechanismParams& params,
                         const std::vector<Message>& messages);

/// Outcome function of the augmented mechanism. `flag_ctx` supplies the
/// flagging agent's interim beliefs for the Rule 2 test (prior by default;
/// pass a posterior context when auditing a scenario with signals).
int mechanism_outcome(const Environment& env, const Scf& f,
                      const std::vector<Message>& messages,
                      const BeliefContext& flag_ctx);

ValidationReport validate_messages(const Environment& env,
                                   const std::vector<Message>& messages);

/// Pure type-report strategy: every type of every agent sends
/// (alpha_i(type), none, F, none).
struct MechanismStrategy {
  std::vector<std::vector<Message>> by_agent_type;  // [agent][type]

  const Message& at(int agent, int type) const {
    return by_agent_type[static_cast<std::size_t>(agent)][static_cast<std::size_t>(type)];
  }
};

MechanismStrategy report_strategy(const Environment& env, const Scf& f,
                                  const Deception& alpha);

enum class DeviationClass { TypeMisreport, Rule2Flag, Rule3Vector };

struct AuditFinding {
  int agent = -1;
  int type = -1;
  DeviationClass cls = DeviationClass::TypeMisreport;
  int misreport = -1;                      // TypeMisreport
  std::optional<ReplyFunction> reply;      // Rule2Flag: the flagged rule
  std::optional<std::vector<int>> vector;  // Rule3Vector: witness vector
  int best_outcome = -1;                   // Rule3Vector: constant third coordinate
  Rat gap;                                 // strictly positive interim gain
};

/// Interim expected utility of one (agent, type) against a strategy profile,
/// under `ctx` beliefs for that agent, with an optional message override for
/// the agent itself.
Rat interim_value(const Environment& env, const Scf& f, const MechanismStrategy& strategy,
                  int agent, int type, const BeliefContext& ctx,
                  const Message* replacement = nullptr);

/// Gain of flagging `reply` (lifted constantly in the own type) relative to
/// following the strategy. Requires every base message to be plain.
Rat rule2_flag_gain(const Environment& env, const Scf& f,
                    const MechanismStrategy& strategy, int agent, int type,
                    const ReplyFunction& reply, const BeliefContext& ctx);

/// All strictly profitable unilateral deviations of the given class, in
/// canonical (agent, type, candidate) order.
std::vector<AuditFinding> audit_deviations(const Environment& env, const Scf& f,
                                           const MechanismStrategy& strategy,
                                           DeviationClass cls, const BeliefContext& ctx,
                                           Budget& budget);

/// Parses a message-profile JSON document (see README for the schema).
std::vector<Message> parse_message_profile(const Environment& env, const Scf& f,
                                           const std::string& text);

}  // namespace bayimp
