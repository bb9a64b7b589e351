#include "bayimp/report.hpp"

#include <chrono>

#include <json.hpp>

namespace bayimp {

namespace {

using nlohmann::ordered_json;

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  template <typename Fn>
  auto run(const char* stage, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    auto result = fn();
    const auto stop = std::chrono::steady_clock::now();
    sink_.push_back({stage, std::chrono::duration_cast<std::chrono::microseconds>(
                                stop - start)
                                .count()});
    return result;
  }

 private:
  std::vector<StageTiming>& sink_;
};

ordered_json deception_json(const Environment& env, const Deception& alpha) {
  ordered_json out = ordered_json::object();
  for (int i = 0; i < env.agent_count(); ++i) {
    ordered_json map = ordered_json::object();
    for (int t = 0; t < env.type_count(i); ++t) {
      map[env.types[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]] =
          env.types[static_cast<std::size_t>(i)]
                   [static_cast<std::size_t>(alpha.report(i, t))];
    }
    out[env.agents[static_cast<std::size_t>(i)]] = std::move(map);
  }
  return out;
}

ordered_json reply_json(const Environment& env, const ReplyFunction& reply) {
  ordered_json table = ordered_json::object();
  for (std::size_t q = 0; q < reply.table.size(); ++q) {
    table[others_key(env, reply.agent, q)] =
        env.outcomes[static_cast<std::size_t>(reply.table[q])];
  }
  return table;
}

ordered_json witness_json(const Environment& env, const UnderminingWitness& witness) {
  ordered_json out;
  out["agent"] = env.agents[static_cast<std::size_t>(witness.agent)];
  out["reply"] = reply_json(env, witness.reply);
  out["strict_type"] = env.types[static_cast<std::size_t>(witness.agent)]
                                [static_cast<std::size_t>(witness.strict_type)];
  out["context"] = witness.posterior_context
                       ? ordered_json{{"kind", "signal"},
                                      {"realization", witness.realization}}
                       : ordered_json{{"kind", "prior"}};
  return out;
}

ordered_json ic_json(const Environment& env, const IcVerdict& verdict,
                     const SignalScheme* scheme) {
  ordered_json out;
  out["ok"] = verdict.ok;
  ordered_json list = ordered_json::array();
  for (const auto& v : verdict.violations) {
    ordered_json item;
    item["agent"] = env.agents[static_cast<std::size_t>(v.agent)];
    item["true_type"] = env.types[static_cast<std::size_t>(v.agent)]
                                 [static_cast<std::size_t>(v.true_type)];
    item["misreport"] = env.types[static_cast<std::size_t>(v.agent)]
                                 [static_cast<std::size_t>(v.misreport)];
    if (v.realization >= 0 && scheme != nullptr) {
      item["realization"] = scheme->per_agent[static_cast<std::size_t>(v.agent)]
                                .realizations[static_cast<std::size_t>(v.realization)];
    } else {
      item["realization"] = "none";
    }
    item["gap"] = rational_to_string(v.gap);
    list.push_back(std::move(item));
  }
  out["violations"] = std::move(list);
  return out;
}

ordered_json validation_json(const ValidationReport& report) {
  ordered_json out;
  out["ok"] = report.ok;
  ordered_json list = ordered_json::array();
  for (const auto& v : report.violations) {
    list.push_back(ordered_json{{"check", v.check}, {"location", v.location},
                                {"message", v.message}});
  }
  out["violations"] = std::move(list);
  return out;
}

ordered_json pair_json(const Environment& env, const PotentialPair& pair) {
  ordered_json out;
  out["agent"] = env.agents[static_cast<std::size_t>(pair.agent)];
  out["profile_a"] = others_key(env, pair.agent, pair.profile_a);
  out["profile_b"] = others_key(env, pair.agent, pair.profile_b);
  ordered_json chain = ordered_json::array();
  for (std::size_t c : pair.chain) chain.push_back(others_key(env, pair.agent, c));
  out["chain"] = std::move(chain);
  out["strict_types"] = ordered_json::array(
      {env.types[static_cast<std::size_t>(pair.agent)]
                [static_cast<std::size_t>(pair.strict_a)],
       env.types[static_cast<std::size_t>(pair.agent)]
                [static_cast<std::size_t>(pair.strict_b)]});
  out["chain_distinct"] = pair.chain_distinct;
  return out;
}

ordered_json interval_set_json(const RatIntervalSet& set) {
  ordered_json parts = ordered_json::array();
  for (const auto& iv : set.parts()) {
    parts.push_back(ordered_json{{"lo", rational_to_string(iv.lo)},
                                 {"lo_open", iv.lo_open},
                                 {"hi", rational_to_string(iv.hi)},
                                 {"hi_open", iv.hi_open}});
  }
  return parts;
}

ordered_json signal_json(const Environment& env, int agent, const AgentSignal& sig) {
  ordered_json block;
  block["realizations"] = sig.realizations;
  ordered_json likelihood = ordered_json::object();
  for (std::size_t q = 0; q < sig.likelihood.size(); ++q) {
    ordered_json dist = ordered_json::object();
    for (int x = 0; x < sig.realization_count(); ++x) {
      dist[sig.realizations[static_cast<std::size_t>(x)]] =
          rational_to_string(sig.likelihood[q][static_cast<std::size_t>(x)]);
    }
    likelihood[others_key(env, agent, q)] = std::move(dist);
  }
  block["likelihood"] = std::move(likelihood);
  return block;
}

ordered_json synthesized_json(const Environment& env, const SynthesizedSignal& sig) {
  ordered_json out;
  out["agent"] = env.agents[static_cast<std::size_t>(sig.agent)];
  out["pair"] = pair_json(env, sig.pair);
  ordered_json group0 = ordered_json::array();
  for (std::size_t q = 0; q < sig.group0.size(); ++q) {
    if (sig.group0[q]) group0.push_back(others_key(env, sig.agent, q));
  }
  out["group0"] = std::move(group0);
  out["tau"] = rational_to_string(sig.tau);
  out["tau_feasible"] = interval_set_json(sig.tau_feasible);
  out["replies"] = ordered_json{{"0", reply_json(env, sig.reply0)},
                                {"1", reply_json(env, sig.reply1)}};
  out["signal"] = signal_json(env, sig.agent, sig.signal);
  ordered_json alternates = ordered_json::array();
  for (const auto& pair : sig.alternates) alternates.push_back(pair_json(env, pair));
  out["alternate_pairs"] = std::move(alternates);
  return out;
}

ordered_json sets_json(const Environment& env, const DeceptionSets& sets) {
  ordered_json out;
  ordered_json undesired = ordered_json::array();
  for (const auto& alpha : sets.undesired) undesired.push_back(deception_json(env, alpha));
  out["undesired"] = std::move(undesired);
  ordered_json undermined = ordered_json::array();
  for (const auto& entry : sets.undermined) {
    undermined.push_back(ordered_json{{"deception", deception_json(env, entry.alpha)},
                                      {"witness", witness_json(env, entry.witness)}});
  }
  out["undermined"] = std::move(undermined);
  ordered_json residual = ordered_json::array();
  for (const auto& alpha : sets.residual) residual.push_back(deception_json(env, alpha));
  out["residual"] = std::move(residual);
  return out;
}

ordered_json plan_json_impl(const Environment& env, const PlanResult& plan) {
  ordered_json out;
  out["ic_ok"] = plan.ic.ok;
  out["fully_implementable_with_signals"] = plan.fully_implementable;
  if (!plan.bottleneck.empty()) out["bottleneck"] = plan.bottleneck;
  out["relaxing_agent_reuse_would_unlock"] = plan.relaxation_would_unlock;
  if (!plan.anomalies.empty()) out["anomalies"] = plan.anomalies;
  if (plan.plan) {
    ordered_json assignments = ordered_json::array();
    for (const auto& assignment : plan.plan->assignments) {
      assignments.push_back(
          ordered_json{{"deception", deception_json(env, assignment.alpha)},
                       {"agent", env.agents[static_cast<std::size_t>(assignment.agent)]},
                       {"signal", synthesized_json(env, assignment.signal)}});
    }
    out["assignments"] = std::move(assignments);
    ordered_json j_set = ordered_json::array();
    for (int j : plan.plan->j_set) {
      j_set.push_back(env.agents[static_cast<std::size_t>(j)]);
    }
    out["j_set"] = std::move(j_set);
    ordered_json preserved = ordered_json::array();
    for (const auto& p : plan.plan->preserved) {
      preserved.push_back(
          ordered_json{{"deception", deception_json(env, p.alpha)},
                       {"agent", env.agents[static_cast<std::size_t>(p.agent)]},
                       {"witness", witness_json(env, p.witness)}});
    }
    out["preserved_underminers"] = std::move(preserved);
    ordered_json scheme = ordered_json::object();
    for (int i = 0; i < env.agent_count(); ++i) {
      scheme[env.agents[static_cast<std::size_t>(i)]] =
          signal_json(env, i, plan.plan->scheme.per_agent[static_cast<std::size_t>(i)]);
    }
    out["scheme"] = std::move(scheme);
  }
  if (plan.checks) {
    ordered_json checks;
    checks["equilibrium_preservation"] = plan.checks->preservation_ok;
    checks["residual_undermining"] = plan.checks->residual_undermining_ok;
    checks["preserved_witnesses"] = plan.checks->preserved_witnesses_ok;
    checks["ic_with_signals"] = plan.checks->ic_with_signals_ok;
    ordered_json diffs = ordered_json::array();
    for (const auto& diff : plan.checks->preservation.diffs) {
      ordered_json d;
      ordered_json profile = ordered_json::array();
      for (int i = 0; i < env.agent_count(); ++i) {
        const auto& sig = plan.plan->scheme.per_agent[static_cast<std::size_t>(i)];
        profile.push_back(
            sig.realizations[static_cast<std::size_t>(
                diff.realization_profile[static_cast<std::size_t>(i)])]);
      }
      d["realizations"] = std::move(profile);
      ordered_json added = ordered_json::array();
      for (const auto& alpha : diff.added) added.push_back(deception_json(env, alpha));
      ordered_json removed = ordered_json::array();
      for (const auto& alpha : diff.removed) removed.push_back(deception_json(env, alpha));
      d["added"] = std::move(added);
      d["removed"] = std::move(removed);
      diffs.push_back(std::move(d));
    }
    checks["preservation_diffs"] = std::move(diffs);
    out["checks"] = std::move(checks);
  }
  return out;
}

std::string deception_text(const Environment& env, const Deception& alpha) {
  std::string out;
  for (int i = 0; i < env.agent_count(); ++i) {
    if (env.type_count(i) == 1) continue;  // keep the narrative on movers
    if (!out.empty()) out += "; ";
    out += env.agents[static_cast<std::size_t>(i)] + ": ";
    for (int t = 0; t < env.type_count(i); ++t) {
      if (t > 0) out += ", ";
      out += env.types[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      out += "->";
      out += env.types[static_cast<std::size_t>(i)]
                      [static_cast<std::size_t>(alpha.report(i, t))];
    }
  }
  if (out.empty()) out = "identity";
  return out;
}

}  // namespace

int AnalysisReport::exit_code(bool with_signals) const {
  if (budget_exceeded) return 3;
  if (!validation.ok) return 1;
  if (with_signals) {
    return (plan && plan->fully_implementable) ? 0 : 1;
  }
  return (no_signal_verdict && no_signal_verdict->fully_implementable) ? 0 : 1;
}

AnalysisReport analyze_scenario(const Scenario& scenario, const AnalysisOptions& options) {
  AnalysisReport report;
  StageClock clock(report.timings);
  Budget budget = options.make_budget();
  const Environment& env = scenario.env;

  report.validation =
      clock.run("validation", [&] { return validate_scenario(scenario); });
  if (!report.validation.ok) return report;

  report.economic =
      clock.run("economic", [&] { return check_economic(env, scenario.scf); });
  report.ic = clock.run("incentive_compatibility", [&] {
    return check_incentive_compatibility(env, scenario.scf);
  });

  try {
    report.equilibria = clock.run("equilibria", [&] {
      return enumerate_direct_equilibria(env, scenario.scf, prior_beliefs(env), budget);
    });
    report.sets = clock.run("deception_sets", [&] {
      return compute_deception_sets(env, scenario.scf, budget);
    });
    report.no_signal_verdict = full_implementability_no_signals(*report.sets, *report.ic);

    if (scenario.signals) {
      report.ic_with_file_signals = clock.run("ic_with_file_signals", [&] {
        return check_ic_with_signals(env, scenario.scf, *scenario.signals);
      });
    }

    if (options.with_signals) {
      report.plan = clock.run("signal_plan", [&] {
        return plan_full_implementation(env, scenario.scf, budget, options.tau_override);
      });
    }
  } catch (const BudgetExceeded& e) {
    report.budget_exceeded = true;
    report.budget_dimension = e.dimension;
  }
  return report;
}

std::string report_to_json(const Scenario& scenario, const AnalysisReport& report) {
  const Environment& env = scenario.env;
  ordered_json root;
  root["validation"] = validation_json(report.validation);
  if (report.economic) {
    ordered_json econ;
    econ["economic"] = report.economic->economic;
    if (report.economic->failing_state) {
      econ["failing_state"] = state_key(env, *report.economic->failing_state);
    } else {
      ordered_json witnesses = ordered_json::array();
      for (const auto& w : report.economic->witnesses) {
        witnesses.push_back(ordered_json{
            {"state", state_key(env, w.state)},
            {"agent_a", env.agents[static_cast<std::size_t>(w.agent_a)]},
            {"prefers_a", env.outcomes[static_cast<std::size_t>(w.better_a)]},
            {"agent_b", env.agents[static_cast<std::size_t>(w.agent_b)]},
            {"prefers_b", env.outcomes[static_cast<std::size_t>(w.better_b)]}});
      }
      econ["witnesses"] = std::move(witnesses);
    }
    root["economic"] = std::move(econ);
  }
  if (report.ic) root["incentive_compatibility"] = ic_json(env, *report.ic, nullptr);
  if (report.equilibria) {
    ordered_json eq;
    eq["count"] = report.equilibria->equilibria.size();
    eq["contains_truth"] = report.equilibria->contains_truth;
    ordered_json list = ordered_json::array();
    for (const auto& alpha : report.equilibria->equilibria) {
      list.push_back(deception_json(env, alpha));
    }
    eq["equilibria"] = std::move(list);
    root["equilibria"] = std::move(eq);
  }
  if (report.sets) root["deception_sets"] = sets_json(env, *report.sets);
  if (report.no_signal_verdict) {
    root["full_implementability"] =
        ordered_json{{"context", "no_signals"},
                     {"ic_ok", report.no_signal_verdict->ic_ok},
                     {"residual_empty", report.no_signal_verdict->residual_empty},
                     {"fully_implementable", report.no_signal_verdict->fully_implementable}};
  }
  if (report.ic_with_file_signals) {
    root["ic_with_file_signals"] =
        ic_json(env, *report.ic_with_file_signals,
                scenario.signals ? &*scenario.signals : nullptr);
  }
  if (report.plan) root["signal_plan"] = plan_json_impl(env, *report.plan);
  if (report.budget_exceeded) {
    root["budget_exceeded"] = ordered_json{{"dimension", report.budget_dimension}};
  }
  ordered_json timings = ordered_json::array();
  for (const auto& t : report.timings) {
    timings.push_back(ordered_json{{"stage", t.stage}, {"microseconds", t.microseconds}});
  }
  root["timings"] = std::move(timings);
  return root.dump(2) + "\n";
}

std::string report_to_markdown(const Scenario& scenario, const AnalysisReport& report) {
  const Environment& env = scenario.env;
  std::string md;
  md += "# Analysis report\n\n";

  md += "## Validation\n\n";
  if (report.validation.ok) {
    md += "All structural checks passed.\n\n";
  } else {
    for (const auto& v : report.validation.violations) {
      md += "- **" + v.check + "** at `" + v.location + "`: " + v.message + "\n";
    }
    md += "\n";
    return md;
  }

  if (report.economic) {
    md += "## Economic environment\n\n";
    md += report.economic->economic
              ? "At every state at least two agents strictly prefer another outcome.\n\n"
              : "Not economic; first failing state `" +
                    state_key(env, *report.economic->failing_state) + "`.\n\n";
  }

  if (report.ic) {
    md += "## Incentive compatibility (no signals)\n\n";
    if (report.ic->ok) {
      md += "Truth-telling is an equilibrium of the direct mechanism.\n\n";
    } else {
      md += "Violations:\n\n";
      for (const auto& v : report.ic->violations) {
        md += "- " + env.agents[static_cast<std::size_t>(v.agent)] + " of type " +
              env.types[static_cast<std::size_t>(v.agent)]
                       [static_cast<std::size_t>(v.true_type)] +
              " gains " + rational_to_string(v.gap) + " by reporting " +
              env.types[static_cast<std::size_t>(v.agent)]
                       [static_cast<std::size_t>(v.misreport)] +
              "\n";
      }
      md += "\n";
    }
  }

  if (report.equilibria) {
    md += "## Direct-mechanism equilibria\n\n";
    md += "Found " + std::to_string(report.equilibria->equilibria.size()) +
          " pure-strategy equilibria" +
          (report.equilibria->contains_truth ? " (including truth-telling):\n\n"
                                             : " (truth-telling absent):\n\n");
    for (const auto& alpha : report.equilibria->equilibria) {
      md += "- " + deception_text(env, alpha) + "\n";
    }
    md += "\n";
  }

  if (report.sets) {
    md += "## Undesired equilibria and undermining\n\n";
    md += "Outcome-changing equilibria: " + std::to_string(report.sets->undesired.size()) +
          "; undermined: " + std::to_string(report.sets->undermined.size()) +
          "; residual: " + std::to_string(report.sets->residual.size()) + ".\n\n";
    for (const auto& entry : report.sets->undermined) {
      md += "- undermined: " + deception_text(env, entry.alpha) + " (by " +
            env.agents[static_cast<std::size_t>(entry.witness.agent)] + ")\n";
    }
    for (const auto& alpha : report.sets->residual) {
      md += "- residual: " + deception_text(env, alpha) + "\n";
    }
    md += "\n";
  }

  if (report.no_signal_verdict) {
    md += "## Verdict without signals\n\n";
    md += report.no_signal_verdict->fully_implementable
              ? "Fully implementable.\n\n"
              : "Not fully implementable.\n\n";
  }

  if (report.plan) {
    md += "## Signal plan\n\n";
    const PlanResult& plan = *report.plan;
    if (plan.plan) {
      for (const auto& assignment : plan.plan->assignments) {
        md += "- " + deception_text(env, assignment.alpha) + " -> agent " +
              env.agents[static_cast<std::size_t>(assignment.agent)] + ", accuracy " +
              rational_to_string(assignment.signal.tau) + "\n";
      }
      md += "\nChecks: preservation " +
            std::string(plan.checks->preservation_ok ? "ok" : "FAILED") +
            ", residual undermining " +
            std::string(plan.checks->residual_undermining_ok ? "ok" : "FAILED") +
            ", preserved witnesses " +
            std::string(plan.checks->preserved_witnesses_ok ? "ok" : "FAILED") +
            ", incentive compatibility " +
            std::string(plan.checks->ic_with_signals_ok ? "ok" : "FAILED") + ".\n\n";
    }
    if (!plan.bottleneck.empty()) md += "Bottleneck: " + plan.bottleneck + "\n\n";
    md += plan.fully_implementable ? "**Fully implementable with signals.**\n"
                                   : "**Not fully implementable with signals.**\n";
  }

  if (report.budget_exceeded) {
    md += "\nBudget exceeded in: " + report.budget_dimension + "\n";
  }
  return md;
}

std::string validation_to_json(const ValidationReport& report) {
  return validation_json(report).dump(2) + "\n";
}

std::string validation_to_markdown(const ValidationReport& report) {
  std::string md = "# Validation\n\n";
  if (report.ok) {
    md += "All checks passed.\n";
  } else {
    for (const auto& v : report.violations) {
      md += "- **" + v.check + "** at `" + v.location + "`: " + v.message + "\n";
    }
  }
  return md;
}

std::string plan_to_json(const Scenario& scenario, const PlanResult& plan) {
  return plan_json_impl(scenario.env, plan).dump(2) + "\n";
}

std::string plan_to_markdown(const Scenario& scenario, const PlanResult& plan) {
  const Environment& env = scenario.env;
  std::string md = "# Signal plan\n\n";
  if (plan.plan) {
    for (const auto& assignment : plan.plan->assignments) {
      md += "- " + deception_text(env, assignment.alpha) + " -> agent " +
            env.agents[static_cast<std::size_t>(assignment.agent)] + ", accuracy " +
            rational_to_string(assignment.signal.tau) + "\n";
    }
  }
  if (!plan.bottleneck.empty()) md += "\nBottleneck: " + plan.bottleneck + "\n";
  md += plan.fully_implementable ? "\n**Fully implementable with signals.**\n"
                                 : "\n**Not fully implementable with signals.**\n";
  return md;
}

std::string findings_to_json(const Scenario& scenario,
                             const std::vector<AuditFinding>& findings,
                             bool i0_ambiguity_note) {
  const Environment& env = scenario.env;
  ordered_json root;
  ordered_json list = ordered_json::array();
  for (const auto& finding : findings) {
    ordered_json item;
    item["agent"] = env.agents[static_cast<std::size_t>(finding.agent)];
    item["type"] = env.types[static_cast<std::size_t>(finding.agent)]
                            [static_cast<std::size_t>(finding.type)];
    switch (finding.cls) {
      case DeviationClass::TypeMisreport:
        item["deviation"] = "type-misreport";
        item["misreport"] = env.types[static_cast<std::size_t>(finding.agent)]
                                     [static_cast<std::size_t>(finding.misreport)];
        break;
      case DeviationClass::Rule2Flag:
        item["deviation"] = "rule2-flag";
        item["reply"] = reply_json(env, *finding.reply);
        break;
      case DeviationClass::Rule3Vector:
        item["deviation"] = "rule3-vector";
        item["vector"] = *finding.vector;
        item["constant_outcome"] =
            env.outcomes[static_cast<std::size_t>(finding.best_outcome)];
        break;
    }
    item["gap"] = rational_to_string(finding.gap);
    list.push_back(std::move(item));
  }
  root["findings"] = std::move(list);
  if (i0_ambiguity_note) {
    root["note"] =
        "some audited profiles reach the integer game without any integer vector; "
        "the winner falls back to the flagging agents";
  }
  return root.dump(2) + "\n";
}

std::string findings_to_markdown(const Scenario& scenario,
                                 const std::vector<AuditFinding>& findings,
                                 bool i0_ambiguity_note) {
  const Environment& env = scenario.env;
  std::string md = "# Deviation audit\n\n";
  if (findings.empty()) {
    md += "No profitable deviations in the audited class.\n";
  }
  for (const auto& finding : findings) {
    md += "- agent " + env.agents[static_cast<std::size_t>(finding.agent)] + ", type " +
          env.types[static_cast<std::size_t>(finding.agent)]
                   [static_cast<std::size_t>(finding.type)] +
          ": gap " + rational_to_string(finding.gap) + "\n";
  }
  if (i0_ambiguity_note) {
    md += "\nNote: some audited profiles reach the integer game without any integer "
          "vector; the winner falls back to the flagging agents.\n";
  }
  return md;
}

}  // namespace bayimp
