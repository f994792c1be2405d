// Structured transport-noise model on the shell n <= |k| <= 2n.
//
// Each wavevector k carries two complex Brownian modes with amplitudes
// theta_{k,j} and polarisations a_{k,j}; horizontal modes (k3 = 0) split into
// a helicity-bearing pair (j = 1, rotational) and a vertical-transport mode
// (j = 2), correlated through rho.  Vertical modes (k3 != 0) share a single
// isotropic amplitude.  Covariance contractions at x = 0 and the gradient of
// the cross covariance feed the Ito corrector and the mean-field constants.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "helix/lattice.hpp"

namespace helix {

enum class Regime { Helical, Perturbed2D, Isotropic };

const char* regime_name(Regime r);
Regime regime_from_string(const std::string& s);  // throws on unknown name

struct RegimeParams {
    Regime regime = Regime::Isotropic;
    double alpha = 3.0, beta = 3.0, gamma = 3.0;
    double c1h = 3.0, c2h = 3.0, cv = 3.0;
    double rho = 0.0;
    double eta = 1.0;
    int n = 1;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks the admissibility constraints of the declared regime, including the
// spectral-gap lower bounds on C1H (alpha = 2 families) and on C_V
// (isotropic family).  Violations are reported as data, never thrown.
ValidationReport validate_regime(const RegimeParams& p);

// Noise amplitude theta_{k,j}; satisfies theta_{-k,j} = conj(theta_{k,j}).
Complex theta(const RegimeParams& p, const WaveVector& k, int j);

struct NoiseEntry {
    WaveVector k;      // Gamma+ representative
    ModeFrame frame;   // a_{k,1}, a_{k,2}
    Complex theta1, theta2;
};

// All Gamma+ shell modes for params.n, in lexicographic order.
struct NoiseTable {
    RegimeParams params;
    std::vector<NoiseEntry> entries;
};

NoiseTable build_noise_table(const RegimeParams& p);

// Deterministic Gaussian stream: Box-Muller over the raw mt19937_64 output,
// independent of any library distribution implementation.
class GaussianSource {
  public:
    explicit GaussianSource(uint64_t seed) : rng_(seed) {}
    double next();

  private:
    std::mt19937_64 rng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// One complex increment pair per table entry, E|dW_j|^2 = 2 dt, with
// E[dW_1 conj(dW_2)] = 2 rho dt on horizontal modes.  Exactly four Gaussian
// draws per entry, in table order.
struct BrownianIncrement {
    Complex dw1, dw2;
};

std::vector<BrownianIncrement> sample_increments(const NoiseTable& table,
                                                 double dt, GaussianSource& g);

// Covariance contractions Q(0) = (1/t) E[W(t,x) (x) W(t,x)^*], split into the
// horizontal-mode part (qbar), the vertical-mode part (qprime), and the
// rho cross part (qrho, identically zero by the +/-k sign cancellation).
struct CovarianceAtZero {
    Mat3 qbar, qprime, qrho;
};

CovarianceAtZero covariance_at_zero(const NoiseTable& table);

// Gradient of the cross covariance at zero: R^{rs} = d_s Qrho^{3 r}(0) on the
// horizontal indices; V = -R.  a_rho = R(1,0) is the rotation coefficient.
struct GradQrho {
    Mat3 R, V;   // top-left 2x2 blocks populated
    double a_rho = 0.0;
};

GradQrho grad_qrho_at_zero(const NoiseTable& table);

// Closed-form effective diffusivities on the shell at level n.
struct EtaSet {
    double eta_T = 0.0;   // horizontal turbulent diffusivity
    double eta_R = 0.0;   // vertical-transport diffusivity
    double eta_V = 0.0;   // isotropic bulk diffusivity (vertical family)
    double eta_RV = 0.0;  // anisotropy defect qprime_11 - qprime_33
    double eta_iso = 0.0; // isotropic-regime limit diffusivity at level n
};

EtaSet eta_set(const RegimeParams& p);

// n -> infinity values of the constants entering the mean-field equation.
double eta_T_limit(const RegimeParams& p);    // zero unless alpha = 2
double eta_iso_limit(const RegimeParams& p);  // isotropic regime
double a_rho_limit(const RegimeParams& p);
double helicity_limit(const RegimeParams& p);

// Mean helicity of the noise, H^n = E<W(t), curl W(t)> / (2 t (2 pi)^3):
// closed form at level n, and an independent mode-sum over <sigma, curl sigma>
// pairings evaluated with explicit vector algebra.
double helicity(const RegimeParams& p);
double helicity_direct(const NoiseTable& table);

}  // namespace helix
