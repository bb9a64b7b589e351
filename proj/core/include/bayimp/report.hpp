#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bayimp/budget.hpp"
#include "bayimp/canonical_mechanism.hpp"
#include "bayimp/monotonicity.hpp"
#include "bayimp/scenario.hpp"
#include "bayimp/signals.hpp"

namespace bayimp {

struct StageTiming {
  std::string stage;
  long long microseconds = 0;
};

struct AnalysisOptions {
  bool with_signals = false;
  long long budget = Budget::kDefaultLimit;
  long long max_deceptions = Budget::kDefaultLimit;
  long long max_reply_search = Budget::kDefaultLimit;
  std::optional<Rat> tau_override;

  Budget make_budget() const {
    Budget b(budget);
    b.set_deception_limit(max_deceptions);
    b.set_reply_limit(max_reply_search);
    return b;
  }
};

/// Everything one analysis run produced, with machine-checkable witnesses
/// for every claim. Later stages are absent when an earlier one failed.
struct AnalysisReport {
  ValidationReport validation;
  std::optional<EconomicVerdict> economic;
  std::optional<IcVerdict> ic;
  std::optional<EquilibriumSet> equilibria;
  std::optional<DeceptionSets> sets;
  std::optional<NoSignalVerdict> no_signal_verdict;
  std::optional<IcVerdict> ic_with_file_signals;  // when the scenario ships signals
  std::optional<PlanResult> plan;                 // with_signals runs only
  std::vector<StageTiming> timings;
  bool budget_exceeded = false;
  std::string budget_dimension;

  /// 0 when the final verdict is "fully implementable" (with signals when
  /// requested), 3 on budget exhaustion, 1 otherwise.
  int exit_code(bool with_signals) const;
};

AnalysisReport analyze_scenario(const Scenario& scenario, const AnalysisOptions& options);

std::string report_to_json(const Scenario& scenario, const AnalysisReport& report);
std::string report_to_markdown(const Scenario& scenario, const AnalysisReport& report);

std::string validation_to_json(const ValidationReport& report);
std::string validation_to_markdown(const ValidationReport& report);

std::string plan_to_json(const Scenario& scenario, const PlanResult& plan);
std::string plan_to_markdown(const Scenario& scenario, const PlanResult& plan);

std::string findings_to_json(const Scenario& scenario,
                             const std::vector<AuditFinding>& findings,
                             bool i0_ambiguity_note);
std::string findings_to_markdown(const Scenario& scenario,
                                 const std::vector<AuditFinding>& findings,
                                 bool i0_ambiguity_note);

}  // namespace bayimp
