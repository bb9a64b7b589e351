// Command-line front end: validates scenario files, runs the full
// implementability pipeline, synthesizes signal plans, audits the augmented
// mechanism, and runs the bundled property suites.
//
// Exit codes
//   0  the command's verdict is positive (valid / fully implementable / ok)
//   1  negative verdict (violations, residual deceptions, failed checks)
//   2  input error (missing file, syntax, unknown labels, bad profiles)
//   3  a search budget was exhausted (the limiting dimension is reported)

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bayimp/canonical_mechanism.hpp"
#include "bayimp/report.hpp"
#include "bayimp/scenario.hpp"
#include "bayimp/selftest.hpp"

namespace {

using namespace bayimp;

struct GlobalFlags {
  std::string format = "json";
  long long budget = Budget::kDefaultLimit;
  long long max_deceptions = Budget::kDefaultLimit;
  long long max_reply_search = Budget::kDefaultLimit;
  std::string tau;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Scenario load(const std::string& path) { return parse_scenario(read_file(path), false); }

AnalysisOptions make_options(const GlobalFlags& flags, bool with_signals) {
  AnalysisOptions options;
  options.with_signals = with_signals;
  options.budget = flags.budget;
  options.max_deceptions = flags.max_deceptions;
  options.max_reply_search = flags.max_reply_search;
  if (!flags.tau.empty()) options.tau_override = parse_rational(flags.tau);
  return options;
}

int cmd_validate(const std::string& path, const GlobalFlags& flags) {
  const Scenario scenario = load(path);
  const ValidationReport report = validate_scenario(scenario);
  std::cout << (flags.format == "md" ? validation_to_markdown(report)
                                     : validation_to_json(report));
  return report.ok ? 0 : 1;
}

int cmd_analyze(const std::string& path, const GlobalFlags& flags, bool with_signals) {
  const Scenario scenario = load(path);
  const AnalysisReport report =
      analyze_scenario(scenario, make_options(flags, with_signals));
  std::cout << (flags.format == "md" ? report_to_markdown(scenario, report)
                                     : report_to_json(scenario, report));
  return report.exit_code(with_signals);
}

int cmd_synthesize(const std::string& path, const GlobalFlags& flags) {
  const Scenario scenario = load(path);
  const ValidationReport validation = validate_scenario(scenario);
  if (!validation.ok) {
    std::cout << (flags.format == "md" ? validation_to_markdown(validation)
                                       : validation_to_json(validation));
    return 1;
  }
  Budget budget = make_options(flags, true).make_budget();
  std::optional<Rat> tau;
  if (!flags.tau.empty()) tau = parse_rational(flags.tau);
  try {
    const PlanResult plan =
        plan_full_implementation(scenario.env, scenario.scf, budget, tau);
    std::cout << (flags.format == "md" ? plan_to_markdown(scenario, plan)
                                       : plan_to_json(scenario, plan));
    return plan.fully_implementable ? 0 : 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
}

Deception resolve_deception(const Scenario& scenario, const std::string& spec) {
  if (spec == "truth" || spec == "identity") return identity_deception(scenario.env);
  if (auto it = scenario.deceptions.find(spec); it != scenario.deceptions.end()) {
    return it->second;
  }
  std::string text;
  if (!spec.empty() && spec.front() == '@') {
    text = read_file(spec.substr(1));
  } else if (!spec.empty() && spec.front() == '{') {
    text = spec;
  } else {
    throw ScenarioError("unknown deception '" + spec +
                        "': use a name from the scenario's deceptions block, 'truth', "
                        "'@file.json', or an inline JSON table");
  }
  // Reuse the scenario parser's table format: {"agent": {"from": "to"}}.
  Scenario probe = scenario;
  probe.deceptions.clear();
  std::string wrapped = serialize_scenario(probe);
  wrapped.erase(wrapped.rfind('}'));
  wrapped += ",\n  \"deceptions\": {\"cli\": " + text + "}\n}\n";
  return parse_scenario(wrapped, false).deceptions.at("cli");
}

int cmd_mechanism_eval(const std::string& path, const std::string& profile_path,
                       const GlobalFlags& flags) {
  const Scenario scenario = load(path);
  const std::vector<Message> messages =
      parse_message_profile(scenario.env, scenario.scf, read_file(profile_path));
  const RuleClass rule = classify_rule(messages);
  const int outcome =
      mechanism_outcome(scenario.env, scenario.scf, messages, BeliefContext::prior());
  const char* rule_name = rule.kind == RuleKind::Rule1   ? "rule1"
                          : rule.kind == RuleKind::Rule2 ? "rule2"
                                                         : "rule3";
  if (flags.format == "md") {
    std::cout << "outcome: " << scenario.env.outcomes[static_cast<std::size_t>(outcome)]
              << " (" << rule_name << ")\n";
  } else {
    std::cout << "{\"outcome\": \""
              << scenario.env.outcomes[static_cast<std::size_t>(outcome)]
              << "\", \"rule\": \"" << rule_name << "\"}\n";
  }
  return 0;
}

int cmd_mechanism_audit(const std::string& path, const std::string& deception_spec,
                        const std::string& cls_name, const std::string& agent_filter,
                        int realization, const GlobalFlags& flags) {
  const Scenario scenario = load(path);
  const Deception alpha = resolve_deception(scenario, deception_spec);
  DeviationClass cls;
  if (cls_name == "type-misreport") {
    cls = DeviationClass::TypeMisreport;
  } else if (cls_name == "rule2-flag") {
    cls = DeviationClass::Rule2Flag;
  } else if (cls_name == "rule3-vector") {
    cls = DeviationClass::Rule3Vector;
  } else {
    throw ScenarioError("unknown deviation class '" + cls_name + "'");
  }

  BeliefContext ctx = BeliefContext::prior();
  if (realization >= 0) {
    if (!scenario.signals) {
      throw ScenarioError("--realization requires a scenario with a signals block");
    }
    ctx = BeliefContext::posterior_of(*scenario.signals, realization);
  }

  Budget budget = make_options(flags, false).make_budget();
  const MechanismStrategy strategy =
      report_strategy(scenario.env, scenario.scf, alpha);
  std::vector<AuditFinding> findings =
      audit_deviations(scenario.env, scenario.scf, strategy, cls, ctx, budget);
  if (!agent_filter.empty()) {
    auto agent = scenario.env.agent_index(agent_filter);
    if (!agent) throw ScenarioError("unknown agent '" + agent_filter + "'");
    std::erase_if(findings,
                  [&](const AuditFinding& f) { return f.agent != *agent; });
  }
  std::cout << (flags.format == "md"
                    ? findings_to_markdown(scenario, findings, false)
                    : findings_to_json(scenario, findings, false));
  return 0;
}

int cmd_selftest(std::uint64_t seed, int count, int synth_count,
                 const std::string& template_path) {
  SelftestOptions options;
  options.seed = seed;
  if (count > 0) {
    options.ic_cases = count;
    options.consistency_cases = count / 5 + 1;
  }
  if (synth_count > 0) options.synthesis_cases = synth_count;
  if (!template_path.empty()) {
    options.random_params = parse_gen_params(read_file(template_path));
  }
  const SelftestResult result = run_selftest(options);
  std::cout << selftest_to_text(result);
  return result.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact analysis of Bayesian implementability and signal design"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"json", "md"}))
      ->capture_default_str();
  app.add_option("--budget", flags.budget, "generic search budget (candidates)")
      ->capture_default_str();
  app.add_option("--max-deceptions", flags.max_deceptions,
                 "deception enumeration budget")
      ->capture_default_str();
  app.add_option("--max-reply-search", flags.max_reply_search,
                 "reply-function search budget")
      ->capture_default_str();
  app.add_option("--tau", flags.tau,
                 "signal accuracy override 'p/q' (default: feasible-interval midpoint)");

  std::string path;
  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("scenario", path, "scenario JSON path")->required();

  bool with_signals = false;
  auto* analyze = app.add_subcommand("analyze", "run the implementability pipeline");
  analyze->add_option("scenario", path, "scenario JSON path")->required();
  analyze->add_flag("--with-signals", with_signals,
                    "also synthesize and verify a signal plan");

  auto* synthesize = app.add_subcommand("synthesize", "signal plan only");
  synthesize->add_option("scenario", path, "scenario JSON path")->required();

  auto* mechanism = app.add_subcommand("mechanism", "augmented-mechanism tools");
  mechanism->require_subcommand(1);
  std::string profile_path;
  auto* eval = mechanism->add_subcommand("eval", "evaluate one message profile");
  eval->add_option("scenario", path, "scenario JSON path")->required();
  eval->add_option("--profile", profile_path, "message profile JSON path")->required();
  std::string deception_spec = "truth";
  std::string cls_name = "rule2-flag";
  std::string agent_filter;
  int realization = -1;
  auto* audit = mechanism->add_subcommand("audit", "unilateral deviation audit");
  audit->add_option("scenario", path, "scenario JSON path")->required();
  audit->add_option("--deception", deception_spec,
                    "deception name, 'truth', '@file.json', or inline JSON");
  audit->add_option("--class", cls_name,
                    "deviation class: type-misreport | rule2-flag | rule3-vector");
  audit->add_option("--agent", agent_filter, "restrict findings to one agent");
  audit->add_option("--realization", realization,
                    "audit under each agent's posterior for this realization index");

  std::uint64_t seed = 1;
  int count = 0;
  int synth_count = 0;
  std::string template_path;
  auto* selftest = app.add_subcommand("selftest", "run the bundled property suites");
  selftest->add_option("--seed", seed, "generator seed")->capture_default_str();
  selftest->add_option("--count", count, "cases for the averaging suite");
  selftest->add_option("--synth-count", synth_count, "cases for the synthesis suite");
  selftest->add_option("--template", template_path, "generator template JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(path, flags);
    if (analyze->parsed()) return cmd_analyze(path, flags, with_signals);
    if (synthesize->parsed()) return cmd_synthesize(path, flags);
    if (eval->parsed()) return cmd_mechanism_eval(path, profile_path, flags);
    if (audit->parsed()) {
      return cmd_mechanism_audit(path, deception_spec, cls_name, agent_filter,
                                 realization, flags);
    }
    if (selftest->parsed()) return cmd_selftest(seed, count, synth_count, template_path);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
