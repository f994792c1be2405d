// Mean-field evolution: exact per-mode solutions of
//   d/dt B = eta Lap B + Lambda B + a_rho curl(diag(1,1,0) B),
// which covers both the mean of the stochastic flow at level n (constants
// from the covariance contractions) and its n -> infinity limit equation
// (constants from the closed-form limits).  Every mode h decouples into a
// scalar decay d(h) = eta |h|^2 + lam_h |h_H|^2 + lam_v h3^2 and a rotation
// i h x (A .) tangent to the divergence-free plane, so the propagator is an
// explicit 2x2 exponential in the mode frame.
#pragma once

#include "helix/corrector.hpp"
#include "helix/field.hpp"
#include "helix/noise.hpp"

namespace helix {

struct DriftModel {
    double eta = 0.0;
    CorrectorMultipliers mult;
};

// Finite-n mean of the stochastic equation (Ito drift from direct sums).
DriftModel spde_mean_model(const NoiseTable& table);

// Limit equation: Lambda = eta_T Lap_H (helical/perturbed2d, zero when
// alpha > 2), eta_iso Lap (isotropic); rotation coefficient a_rho_limit.
DriftModel limit_model(const RegimeParams& p);

double mode_decay(const DriftModel& m, const WaveVector& h);

// exp(t M_h) with M_h = -d(h) I + i h x (A .); exact for any t >= 0.
CMat3 mode_propagator(const DriftModel& m, const WaveVector& h, double t);

SpectralField evolve_mean(const DriftModel& m, const SpectralField& b0,
                          double t);

// Slowest decay rate of M_h on the divergence-free plane at mode h
// (positive = decay): d(h) - |Re s| with +/- s the rotation eigenvalues.
double dominant_rate(const DriftModel& m, const WaveVector& h);

// dominant_rate of a single-mode initial datum; throws unless b0 carries
// exactly one mode pair.
double decay_rate(const DriftModel& m, const SpectralField& b0);

// Independent route to the third component at mode h: Duhamel integral of
// the source a_rho [curl(B_H, 0)]_3 against the explicitly diagonalised
// horizontal 2x2 subsystem.
Complex evolve_b3_duhamel(const DriftModel& m, const WaveVector& h,
                          const CVec3& b0, double t);

// Beltrami projection <B, B_lambda> (the dynamo observable).
double b_lambda(const SpectralField& b, int lambda);

}  // namespace helix
