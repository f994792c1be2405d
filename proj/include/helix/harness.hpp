// Experiment drivers behind the CLI.
//
// Every driver runs one configured study, renders a CSV report whose first
// lines carry the resolved configuration as '#' metadata, and returns named
// pass/fail checks.  Reports are deterministic: the same (config, base_seed)
// pair reproduces the CSV byte for byte.  Monte-Carlo statistics are plain
// sample means with SE = sample standard deviation / sqrt(M); prediction
// columns are populated only where a closed form exists.
#pragma once

#include <string>
#include <vector>

#include "helix/config.hpp"

namespace helix {

struct CheckResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

struct ExperimentOutput {
    std::string csv;
    std::vector<CheckResult> checks;
    bool passed() const;
};

// Admissibility report of the configured regime (always exits cleanly from
// the library; the CLI turns failed checks into exit code 1).
ExperimentOutput run_validate(const RunConfig& cfg);

// Ito corrector: explicit double-Lie sums against the closed multiplier form
// on M random divergence-free fields.
ExperimentOutput run_corrector_check(const RunConfig& cfg);

// Covariance contractions at x = 0: direct mode sums against the closed-form
// diffusivities, per level in n_list (or the single configured n).
ExperimentOutput run_covariance(const RunConfig& cfg);

// Noise helicity: direct pairing sum against the closed form and its limit.
ExperimentOutput run_helicity(const RunConfig& cfg);

// One stochastic trajectory (path index 0) with the full observable set.
ExperimentOutput run_simulate(const RunConfig& cfg);

// Mean-field trajectory of the limit equation on the same record grid.
ExperimentOutput run_limit(const RunConfig& cfg);

// Monte-Carlo mean of the Beltrami projection against the exact dynamo
// growth law, plus the pathwise growth fraction.
ExperimentOutput run_dynamo(const RunConfig& cfg);

// Beta-effect dissipation: exact limit decay rates over the canonical rho
// sweep, and the fitted SPDE decay of E||B||_{H^{-1-theta}} at level n.
ExperimentOutput run_beta(const RunConfig& cfg);

// Scaling-limit convergence: kappa-moments of ||B^n_t - Bbar_t||_{H^{-1-theta}}
// over n_list, sup over the recorded time grid, with fitted order.
ExperimentOutput run_converge(const RunConfig& cfg);

// Vertical-component convergence in dot-H^{-vartheta} (perturbed2d regime).
ExperimentOutput run_b3_converge(const RunConfig& cfg);

// Experiment names accepted by the CLI, in canonical order.
const std::vector<std::string>& experiment_names();

// Dispatch by name; throws ConfigError for unknown names or regime misuse.
ExperimentOutput run_experiment(const std::string& name, const RunConfig& cfg);

}  // namespace helix
