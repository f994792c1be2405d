// Flat `key = value` run configuration shared by the CLI and the tests.
//
// Exactly the documented key set is accepted and unknown keys are hard
// errors, so a typo can never fall back to a default silently.  Parsed
// values are range-checked here; regime admissibility (the HP constraints)
// is checked separately by validate_regime / the validate experiment.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "helix/noise.hpp"

namespace helix {

// Malformed input, unknown key, or out-of-range value; the CLI maps this
// (and any other configuration misuse) to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    RegimeParams params;      // regime, alpha, beta, gamma, c1h, c2h, cv, rho, eta, n
    std::vector<int> n_list;  // resolutions for convergence studies; empty = {n}
    int lambda = 1;           // Beltrami wavenumber of the initial datum
    double theta = 1.0;       // fluctuation Sobolev index, spaces H^{-1-theta}
    double delta = 0.25;      // regularity traded for the sup over time
    double kappa = 1.0;       // moment order of convergence metrics
    double vartheta = 1.5;    // vertical-component space dot-H^{-vartheta}
    double dt = 1e-3;
    double T = 1.0;
    int K_max = 0;            // spectral cutoff; 0 = resolve to max|k(B0)| + 2n
    int M = 100;              // Monte-Carlo path count
    uint64_t base_seed = 12345;
    int record_every = 10;    // steps between trajectory records (0 = end only)
    double epsilon = 0.5;     // slack of the pathwise growth-fraction threshold
};

// Parse configuration text: one `key = value` per line, '#' comment lines
// and blank lines ignored, duplicate keys rejected.  Throws ConfigError.
RunConfig parse_config(const std::string& text);

// Read and parse a configuration file.  Throws ConfigError.
RunConfig load_config(const std::string& path);

// Deterministic one-line summary of the resolved configuration, emitted as
// the leading '#' metadata comment of every CSV report.
std::string describe(const RunConfig& cfg);

}  // namespace helix
