// Stochastic stepping of the induction equation on the truncated lattice.
//
// One exponential Euler-Maruyama step reads
//   B+ = exp(dt M) [ B + sum_entries L_{sigma dW + conj} B ],
// with M the exact per-mode Ito drift (molecular dissipation + corrector).
// The mean E[B_t] is therefore exact in dt; the pathwise weak error enters
// only through the noise-noise interaction.  Modes pushed beyond K_max by
// the transport term are removed after summing all contributions; their
// energy is tracked as the truncation loss.
//
// reference_step / simulate_path_reference give a direct map-based
// implementation used to validate the dense production engine bit-for-bit
// on the same Gaussian stream.
#pragma once

#include <cstdint>
#include <vector>

#include "helix/field.hpp"
#include "helix/meanfield.hpp"
#include "helix/noise.hpp"

namespace helix {

struct SolverConfig {
    RegimeParams params;
    int K_max = 0;          // resolved ball |k| <= K_max
    double dt = 1e-3;
    double T = 1.0;
    int record_every = 0;   // steps between trajectory records, 0 = end only
    double theta_index = -2.0;  // Sobolev exponent s of the h_theta observable ||B||_{H^s}^2
    int lambda = 1;            // Beltrami projection wavenumber
};

// Throws std::invalid_argument unless dt, T are positive and
// K_max >= max |k(B0)| + 2n (initial support plus one interaction shell).
void validate_solver_config(const SolverConfig& cfg, const SpectralField& b0);

struct TrajectoryPoint {
    double t = 0.0;
    double h_minus1_sq = 0.0;
    double l2_sq = 0.0;
    double h_theta = 0.0;   // ||B||_{H^theta}^2
    double b_lambda = 0.0;
    double div_residual = 0.0;
    double trunc_loss = 0.0;  // cumulative L2 energy removed at K_max
};

struct PathResult {
    std::vector<TrajectoryPoint> records;
    SpectralField final_state;
    double trunc_loss_l2 = 0.0;   // cumulative, L2 metric
    double trunc_loss_hm1 = 0.0;  // cumulative, H^{-1} metric
};

struct StepLoss {
    double l2 = 0.0, hm1 = 0.0;
};

// Deterministic per-path seed derived from the base seed (splitmix64 mix).
uint64_t path_seed(uint64_t base_seed, uint64_t path_index);

TrajectoryPoint observe(const SolverConfig& cfg, const SpectralField& state,
                        double t, double cumulative_loss);

SpectralField reference_step(const SolverConfig& cfg, const NoiseTable& table,
                             const DriftModel& model, const SpectralField& state,
                             const std::vector<BrownianIncrement>& inc,
                             StepLoss* loss);

PathResult simulate_path_reference(const SolverConfig& cfg,
                                   const SpectralField& b0, uint64_t seed);

}  // namespace helix
