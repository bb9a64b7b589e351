#include "bayimp/selftest.hpp"

#include <random>

#include "bayimp/direct_mechanism.hpp"
#include "bayimp/monotonicity.hpp"
#include "bayimp/signals.hpp"

namespace bayimp {

namespace {

SuiteResult run_posterior_averaging(const SelftestOptions& options) {
  SuiteResult suite;
  suite.name = "posterior-averaging";
  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.ic_cases; ++k) {
    const Scenario scenario = random_scenario(rng, options.random_params, true);
    const Environment& env = scenario.env;
    const SignalScheme& scheme = *scenario.signals;
    ++suite.cases;

    const IcVerdict with_signals = check_ic_with_signals(env, scenario.scf, scheme);
    const IcVerdict without = check_incentive_compatibility(env, scenario.scf);
    if (with_signals.ok && !without.ok) {
      suite.passed = false;
      suite.detail = "case " + std::to_string(k) +
                     ": incentive-compatible in every realization but not under the prior";
      return suite;
    }

    // Law of total expectation, exact: the realization-weighted posterior
    // values reproduce the prior-conditional value for every agent, type
    // and a random outcome map.
    for (int i = 0; i < env.agent_count(); ++i) {
      const auto& sig = scheme.per_agent[static_cast<std::size_t>(i)];
      const std::size_t others = env.others_space(i).size();
      std::vector<int> outcome_map(others);
      for (auto& a : outcome_map) {
        a = std::uniform_int_distribution<int>(0, env.outcome_count() - 1)(rng);
      }
      for (int t = 0; t < env.type_count(i); ++t) {
        const Rat direct =
            expected_utility(env, i, t, prior_conditional(env, i, t), outcome_map);
        Rat averaged = 0;
        for (int x = 0; x < sig.realization_count(); ++x) {
          averaged += realization_probability(env, scheme, i, t, x) *
                      expected_utility(env, i, t, posterior(env, scheme, i, t, x),
                                       outcome_map);
        }
        if (averaged != direct) {
          suite.passed = false;
          suite.detail = "case " + std::to_string(k) +
                         ": posterior averaging broke for agent " +
                         env.agents[static_cast<std::size_t>(i)];
          return suite;
        }
      }
    }
  }
  return suite;
}

SuiteResult run_signal_synthesis(const SelftestOptions& options) {
  SuiteResult suite;
  suite.name = "signal-synthesis";
  std::mt19937_64 rng(options.seed + 0x5157);
  const int max_environments = options.synthesis_cases * 40;
  int environments = 0;
  while (suite.cases < options.synthesis_cases && environments < max_environments) {
    ++environments;
    const Scenario scenario = random_scenario(rng, options.enumerable_params, false);
    const Environment& env = scenario.env;
    Budget budget;
    EquilibriumSet equilibria;
    try {
      equilibria =
          enumerate_direct_equilibria(env, scenario.scf, prior_beliefs(env), budget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    for (const Deception& alpha : equilibria.equilibria) {
      if (compose(env, scenario.scf, alpha) == scenario.scf) continue;
      for (int i = 0; i < env.agent_count(); ++i) {
        const auto pair = check_potentially_undermines(env, scenario.scf, alpha, i);
        if (!pair) continue;
        ++suite.cases;

        std::optional<SynthesizedSignal> sig;
        try {
          sig = synthesize_signal(env, scenario.scf, alpha, i);
        } catch (const ConstructionInfeasible& e) {
          suite.passed = false;
          suite.detail = std::string("case ") + std::to_string(suite.cases) + ": " + e.what();
          return suite;
        }
        if (!sig) {
          suite.passed = false;
          suite.detail = "pair scan and synthesis disagree";
          return suite;
        }

        SignalScheme probe = uninformative_scheme(env);
        probe.per_agent[static_cast<std::size_t>(i)] = sig->signal;
        const auto c0 = check_undermines(env, scenario.scf, alpha, i, sig->reply0,
                                         BeliefContext::posterior_of(probe, 0));
        const auto c1 = check_undermines(env, scenario.scf, alpha, i, sig->reply1,
                                         BeliefContext::posterior_of(probe, 1));
        if (!c0.undermines || !c1.undermines) {
          suite.passed = false;
          suite.detail = "synthesized signal fails a realization check";
          return suite;
        }

        // Accuracy grid oracle: membership in the exact feasible set must
        // agree with direct undermining checks at every grid accuracy.
        for (int k = options.grid_points / 2 + 1; k < options.grid_points; ++k) {
          const Rat tau = make_rat(k, options.grid_points);
          SignalScheme grid_scheme = uninformative_scheme(env);
          grid_scheme.per_agent[static_cast<std::size_t>(i)] =
              build_signal(env, i, sig->group0, tau);
          const bool ok0 = check_undermines(env, scenario.scf, alpha, i, sig->reply0,
                                            BeliefContext::posterior_of(grid_scheme, 0))
                               .undermines;
          const bool ok1 = check_undermines(env, scenario.scf, alpha, i, sig->reply1,
                                            BeliefContext::posterior_of(grid_scheme, 1))
                               .undermines;
          if ((ok0 && ok1) != sig->tau_feasible.contains(tau)) {
            suite.passed = false;
            suite.detail = "feasible set disagrees with the grid oracle at accuracy " +
                           rational_to_string(tau);
            return suite;
          }
        }
        if (suite.cases >= options.synthesis_cases) return suite;
      }
    }
  }
  if (suite.cases < options.synthesis_cases) {
    suite.passed = false;
    suite.detail = "generator produced only " + std::to_string(suite.cases) +
                   " synthesis instances";
  }
  return suite;
}

SuiteResult run_verdict_consistency(const SelftestOptions& options) {
  SuiteResult suite;
  suite.name = "verdict-consistency";
  std::mt19937_64 rng(options.seed + 0xC0115);
  for (int k = 0; k < options.consistency_cases; ++k) {
    const Scenario scenario = random_scenario(rng, options.enumerable_params, false);
    const Environment& env = scenario.env;
    Budget budget;
    ++suite.cases;
    try {
      const IcVerdict ic = check_incentive_compatibility(env, scenario.scf);
      const EquilibriumSet equilibria =
          enumerate_direct_equilibria(env, scenario.scf, prior_beliefs(env), budget);
      const DeceptionSets sets = compute_deception_sets(env, scenario.scf, budget);
      const NoSignalVerdict verdict = full_implementability_no_signals(sets, ic);
      if (verdict.fully_implementable != (ic.ok && sets.residual.empty())) {
        suite.passed = false;
        suite.detail = "verdict is not the stated conjunction";
        return suite;
      }
      if (equilibria.contains_truth != ic.ok) {
        suite.passed = false;
        suite.detail = "truth-telling membership disagrees with incentive compatibility";
        return suite;
      }
    } catch (const BudgetExceeded&) {
      continue;
    }
  }
  return suite;
}

}  // namespace

SelftestResult run_selftest(const SelftestOptions& options) {
  SelftestResult result;
  result.suites.push_back(run_posterior_averaging(options));
  result.suites.push_back(run_signal_synthesis(options));
  result.suites.push_back(run_verdict_consistency(options));
  return result;
}

std::string selftest_to_text(const SelftestResult& result) {
  std::string out;
  for (const auto& suite : result.suites) {
    out += (suite.passed ? "[PASS] " : "[FAIL] ") + suite.name + " (" +
           std::to_string(suite.cases) + " cases)";
    if (!suite.detail.empty()) out += ": " + suite.detail;
    out += "\n";
  }
  return out;
}

}  // namespace bayimp
