// Ito corrector of the Stratonovich transport noise.
//
// Stratonovich -> Ito conversion adds the drift (Lambda + Lambda_rho) B.  On
// the shell the full nested-Lie sum collapses to a Fourier multiplier:
//   (Lambda B)_h     = -(lam_h |h_H|^2 + lam_v h3^2) b_h
//   (Lambda_rho B)_h = i h x (A b_h),  A = a_rho diag(1, 1, 0),
// with lam_h, lam_v read off the covariance contractions at zero and a_rho
// from the gradient of the cross covariance.  ito_corrector_direct recomputes
// the drift as the explicit sum of Lie-derivative compositions weighted by
// the Brownian quadratic covariations, providing an independent check.
#pragma once

#include <map>

#include "helix/field.hpp"
#include "helix/noise.hpp"

namespace helix {

// Complex (non-conjugate-symmetric) spectral field over the full lattice;
// intermediate values of single-complex-mode Lie derivatives live here.
struct FullField {
    std::map<WaveVector, CVec3> modes;

    void add(const WaveVector& k, const CVec3& v) { modes[k] += v; }
    CVec3 coeff(const WaveVector& k) const;
    double max_conjugate_defect() const;  // 0 for a real field
};

FullField to_full(const SpectralField& f);

// Lie derivative L_v F for the single complex mode v = c e^{ik.x}:
// mode h of F contributes i [ (c.h) b_h - (k.b_h) c ] at h + k.
FullField lie_full(const WaveVector& k, const CVec3& c, const FullField& f);

// Real pair operator for the fused mode amplitude m at wavevector k,
// L_{m e^{ik.x} + conj} F; maps real fields to real fields and preserves
// divergence-freeness exactly.  The result extends to |h| <= K(F) + |k|;
// truncation happens at the solver step, after summing all contributions.
SpectralField lie_pair_fused(const WaveVector& k, const CVec3& m,
                             const SpectralField& f);

// Pointwise cross product (m e^{ik.x} + conj) x F.  The result is real but
// not divergence free; for divergence-free F the curl identity
// curl(sigma x F) = (F.grad) sigma - (sigma.grad) F gives
// lie_pair_fused(k, m, F) = -curl(cross_pair_fused(k, m, F)).
SpectralField cross_pair_fused(const WaveVector& k, const CVec3& m,
                               const SpectralField& f);

struct CorrectorMultipliers {
    double lam_h = 0.0, lam_v = 0.0, a_rho = 0.0;
};

CorrectorMultipliers corrector_multipliers(const NoiseTable& table);

// lam_h |h_H|^2 + lam_v h3^2
double lambda_scalar(const CorrectorMultipliers& m, const WaveVector& h);

// Coefficient of (Lambda + Lambda_rho) B at mode h.
CVec3 corrector_apply(const CorrectorMultipliers& m, const WaveVector& h,
                      const CVec3& b);

// Explicit corrector sum over the shell:
//   sum_{k in Gamma+, j} (L_sigma L_conj(sigma) + L_conj(sigma) L_sigma) F
// + rho sum_{k3 = 0 in Gamma+} (all four j = 1 <-> 2 pairings) F.
// Because every composition shifts a mode by +k then -k (or vice versa), the
// result lives on the mode set of F; ito_corrector_direct exploits that and
// evaluates the composition per stored mode, while ito_corrector_nested
// materialises every intermediate field via lie_full (slow, used to validate
// the specialised route).
SpectralField ito_corrector_direct(const NoiseTable& table,
                                   const SpectralField& f);
FullField ito_corrector_nested(const NoiseTable& table, const SpectralField& f);

// sum_{k in shell, j} || sigma_{k,j} x F ||_{L2}^2; in the isotropic regime
// this equals (4 zeta_s(n,3) / (3 cv^2)) ||F||_{L2}^2 exactly.
double cross_norm_sum(const NoiseTable& table, const SpectralField& f);

}  // namespace helix
