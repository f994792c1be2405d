// Divergence-free vector fields on the 3-torus in spectral form.
//
// Coefficients are taken against the orthonormal basis e^{ik.x}/(2pi)^{3/2},
// so Parseval is coefficient-exact: ||F||_{H^s}^2 = sum_k |b_k|^2 |k|^{2s}.
// Only the half-lattice Gamma+ is stored; reality fixes b_{-k} = conj(b_k).
#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "helix/lattice.hpp"

namespace helix {

struct SpectralField {
    int K_max = 0;             // modes satisfy |k| <= K_max
    bool divergence_free = true;
    std::map<WaveVector, CVec3> modes;  // keys in Gamma+ only

    // Coefficient at any lattice vector (conjugate-mirrored off Gamma+).
    CVec3 coeff(const WaveVector& k) const;
    // Overwrite / accumulate the coefficient at k (k may lie in Gamma-).
    void set(const WaveVector& k, const CVec3& v);
    void add(const WaveVector& k, const CVec3& v);
    void drop_zero_modes(double tol = 0.0);

    double sobolev_sq(double s) const;   // ||F||_{H^s}^2
    double sobolev_norm(double s) const { return std::sqrt(sobolev_sq(s)); }
    double l2_sq() const { return sobolev_sq(0.0); }

    // Real L2 pairing <F, G>.
    double inner(const SpectralField& g) const;

    // Physical-space value (2pi)^{-3/2} sum_k b_k e^{ik.x}; imaginary part is
    // rounding noise for any field with consistent mirror coefficients.
    CVec3 evaluate(const Vec3& x) const;

    // Relative divergence residual sqrt(sum_k 2|khat.b_k|^2) / ||F||_L2.
    double div_residual() const;

    SpectralField curl() const;
    SpectralField leray_project() const;

    SpectralField operator+(const SpectralField& o) const;
    SpectralField operator-(const SpectralField& o) const;
    SpectralField operator*(double s) const;
};

// Scalar spectral companion (divergence output, test functions).
struct ScalarField {
    std::map<WaveVector, Complex> modes;  // Gamma+ keys

    Complex coeff(const WaveVector& k) const;
    void add(const WaveVector& k, Complex v);
    double sobolev_sq(double s) const;
    double inner(const ScalarField& g) const;  // real L2 pairing
};

ScalarField divergence(const SpectralField& f);

// Beltrami datum B(x) = (sin(lambda x3), cos(lambda x3), 0): curl B = lambda B.
// Carried by the mode pair k = +/- lambda e3 with ||B||_L2^2 = (2 pi)^3.
SpectralField beltrami_field(int lambda);

// Random divergence-free field: i.i.d. standard complex Gaussian coefficients
// on Gamma+ modes with |k| <= K, Leray-projected mode by mode.
SpectralField random_divfree_field(int K, std::mt19937_64& rng);

// Anisotropic heat multiplier exp(-t (mu k_H^2 + nu k3^2)), mu, nu > 0.
struct AnisotropicMultiplier {
    double mu = 0.0, nu = 0.0;
};
double semigroup_multiplier(const AnisotropicMultiplier& m, const WaveVector& k,
                            double t);

}  // namespace helix
