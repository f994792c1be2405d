// Noise-model implementation: regime validation, amplitudes, Brownian
// sampling, covariance contractions, and the closed-form diffusivities.
#include "helix/noise.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace helix {

namespace {

constexpr double kEqTol = 1e-9;  // tolerance for declared-parameter equalities

bool near(double a, double b) { return std::abs(a - b) <= kEqTol; }

double pow_norm(const WaveVector& k, double expo) {
    // |k|^expo via the exact integer square norm
    return std::pow(static_cast<double>(k.norm_sq()), 0.5 * expo);
}

}  // namespace

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::Helical: return "helical";
        case Regime::Perturbed2D: return "perturbed2d";
        case Regime::Isotropic: return "isotropic";
    }
    return "?";
}

Regime regime_from_string(const std::string& s) {
    if (s == "helical") return Regime::Helical;
    if (s == "perturbed2d") return Regime::Perturbed2D;
    if (s == "isotropic") return Regime::Isotropic;
    throw std::invalid_argument("unknown regime: " + s);
}

ValidationReport validate_regime(const RegimeParams& p) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    auto fail_val = [&fail](const char* what, double got, double bound) {
        std::ostringstream os;
        os << what << " (got " << got << ", bound " << bound << ")";
        fail(os.str());
    };

    if (!(p.eta > 0.0)) fail("eta must be positive");
    if (p.n < 1) fail("n must be >= 1");
    if (!(p.c1h > 0.0)) fail("c1h must be positive");
    if (!(p.c2h > 0.0)) fail("c2h must be positive");
    if (!(p.cv > 0.0)) fail("cv must be positive");
    if (std::abs(p.rho) > 1.0) fail("rho must lie in [-1, 1]");
    if (!rep.ok) return rep;  // bounds below assume sane basics

    // Spectral-gap bound on the helicity-pair amplitude when alpha = 2: the
    // horizontal turbulent diffusivity must stay below the molecular one.
    const double c1h_bound = std::sqrt(zeta_limit(2.0, ZetaKind::Horizontal) / p.eta);

    switch (p.regime) {
        case Regime::Helical:
            if (!(p.alpha >= 2.0)) fail_val("helical: alpha must be >= 2", p.alpha, 2.0);
            if (!(p.beta > 2.0)) fail_val("helical: beta must be > 2", p.beta, 2.0);
            if (!(p.gamma > 3.0)) fail_val("helical: gamma must be > 3", p.gamma, 3.0);
            if (!near(p.alpha + p.beta, 6.0))
                fail_val("helical: alpha + beta must equal 6", p.alpha + p.beta, 6.0);
            if (!(chi(p.alpha, p.beta, p.gamma) > 0.0))
                fail("helical: chi(alpha, beta, gamma) must be positive");
            if (near(p.alpha, 2.0) && !(p.c1h > c1h_bound))
                fail_val("helical: c1h must exceed sqrt(zeta_H2/eta) when alpha = 2",
                         p.c1h, c1h_bound);
            break;
        case Regime::Perturbed2D:
            if (!near(p.alpha, 2.0)) fail_val("perturbed2d: alpha must equal 2", p.alpha, 2.0);
            if (!near(p.beta, 4.0)) fail_val("perturbed2d: beta must equal 4", p.beta, 4.0);
            if (!(p.gamma >= 5.0)) fail_val("perturbed2d: gamma must be >= 5", p.gamma, 5.0);
            if (!(p.c1h > c1h_bound))
                fail_val("perturbed2d: c1h must exceed sqrt(zeta_H2/eta)", p.c1h, c1h_bound);
            break;
        case Regime::Isotropic: {
            if (!near(p.alpha, 3.0) || !near(p.beta, 3.0) || !near(p.gamma, 3.0))
                fail("isotropic: alpha, beta, gamma must all equal 3");
            if (!near(p.c1h, p.c2h) || !near(p.c2h, p.cv))
                fail("isotropic: c1h, c2h, cv must be equal");
            const double cv_bound =
                std::sqrt(2.0 * zeta_limit(3.0, ZetaKind::Solid) / (3.0 * p.eta));
            if (!(p.cv > cv_bound))
                fail_val("isotropic: cv must exceed sqrt(2 zeta_s3 / (3 eta))",
                         p.cv, cv_bound);
            break;
        }
    }
    return rep;
}

Complex theta(const RegimeParams& p, const WaveVector& k, int j) {
    if (k.is_zero()) throw std::invalid_argument("theta: k must be nonzero");
    if (j != 1 && j != 2) throw std::invalid_argument("theta: j must be 1 or 2");
    if (!in_shell(k, p.n)) return Complex{0.0, 0.0};
    if (k.k3 == 0) {
        if (j == 1) {
            double s = in_gamma_plus(k) ? 1.0 : -1.0;
            return Complex{0.0, s / (p.c1h * pow_norm(k, 0.5 * p.alpha))};
        }
        return Complex{1.0 / (p.c2h * pow_norm(k, 0.5 * p.beta)), 0.0};
    }
    return Complex{1.0 / (p.cv * pow_norm(k, 0.5 * p.gamma)), 0.0};
}

NoiseTable build_noise_table(const RegimeParams& p) {
    NoiseTable table;
    table.params = p;
    for (const WaveVector& k : shell_modes(p.n, false)) {
        if (!in_gamma_plus(k)) continue;
        NoiseEntry e;
        e.k = k;
        e.frame = mode_frame(k);
        e.theta1 = theta(p, k, 1);
        e.theta2 = theta(p, k, 2);
        table.entries.push_back(e);
    }
    return table;
}

double GaussianSource::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53
    double u1 = 1.0 - static_cast<double>(rng_() >> 11) * kInv53;  // (0, 1]
    double u2 = static_cast<double>(rng_() >> 11) * kInv53;        // [0, 1)
    double r = std::sqrt(-2.0 * std::log(u1));
    double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

std::vector<BrownianIncrement> sample_increments(const NoiseTable& table,
                                                 double dt, GaussianSource& g) {
    std::vector<BrownianIncrement> out;
    out.reserve(table.entries.size());
    const double sq = std::sqrt(dt);
    const double rho = table.params.rho;
    for (const NoiseEntry& e : table.entries) {
        double g0 = g.next(), g1 = g.next(), g2 = g.next(), g3 = g.next();
        double r = (e.k.k3 == 0) ? rho : 0.0;
        double c = std::sqrt(std::max(0.0, 1.0 - r * r));
        BrownianIncrement inc;
        inc.dw1 = Complex{sq * g0, sq * g2};
        inc.dw2 = Complex{sq * (r * g0 + c * g1), sq * (r * g2 + c * g3)};
        out.push_back(inc);
    }
    return out;
}

CovarianceAtZero covariance_at_zero(const NoiseTable& table) {
    const RegimeParams& p = table.params;
    CovarianceAtZero cov;
    for (const WaveVector& k : shell_modes(p.n, false)) {
        ModeFrame f = mode_frame(k);
        Complex t1 = theta(p, k, 1);
        Complex t2 = theta(p, k, 2);
        Mat3 m = Mat3::outer(f.a1, f.a1) * (2.0 * std::norm(t1)) +
                 Mat3::outer(f.a2, f.a2) * (2.0 * std::norm(t2));
        if (k.k3 == 0) {
            cov.qbar = cov.qbar + m;
            // Cross part 2 rho Re{ t1 conj(t2) } (a1 (x) a2 + a2 (x) a1):
            // t1 conj(t2) is purely imaginary, so this vanishes exactly.
            double cr = (t1 * std::conj(t2)).real();
            cov.qrho = cov.qrho +
                       (Mat3::outer(f.a1, f.a2) + Mat3::outer(f.a2, f.a1)) *
                           (2.0 * p.rho * cr);
        } else {
            cov.qprime = cov.qprime + m;
        }
    }
    return cov;
}

GradQrho grad_qrho_at_zero(const NoiseTable& table) {
    const RegimeParams& p = table.params;
    GradQrho out;
    for (const WaveVector& k : shell_modes(p.n, true)) {
        ModeFrame f = mode_frame(k);
        Complex c = theta(p, k, 1) * std::conj(theta(p, k, 2));
        const double a1v[3] = {f.a1.x, f.a1.y, f.a1.z};
        const double a2v[3] = {f.a2.x, f.a2.y, f.a2.z};
        const double ks[2] = {static_cast<double>(k.k1),
                              static_cast<double>(k.k2)};
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) {
                // d_s Qrho^{3 r}(0): i k_s (c a1^3 a2^r + conj(c) a2^3 a1^r)
                Complex term = Complex{0.0, ks[s]} *
                               (c * a1v[2] * a2v[r] + std::conj(c) * a2v[2] * a1v[r]);
                out.R(r, s) += 2.0 * p.rho * term.real();
            }
    }
    out.V = out.R * -1.0;
    out.a_rho = out.R(1, 0);
    return out;
}

EtaSet eta_set(const RegimeParams& p) {
    EtaSet e;
    const double n = static_cast<double>(p.n);
    e.eta_T = zeta_shell(p.n, p.alpha, ZetaKind::Horizontal) *
              std::pow(n, 2.0 - p.alpha) / (2.0 * p.c1h * p.c1h);
    e.eta_R = zeta_shell(p.n, p.beta, ZetaKind::Horizontal) *
              std::pow(n, 2.0 - p.beta) / (p.c2h * p.c2h);
    e.eta_RV = zeta_shell(p.n, p.gamma, ZetaKind::Horizontal) *
               std::pow(n, 2.0 - p.gamma) / (p.cv * p.cv);
    e.eta_V = (2.0 / 3.0) * zeta_shell(p.n, p.gamma, ZetaKind::Solid) *
              std::pow(n, 3.0 - p.gamma) / (p.cv * p.cv);
    e.eta_iso = (2.0 / 3.0) * zeta_shell(p.n, 3.0, ZetaKind::Solid) /
                (p.cv * p.cv);
    return e;
}

double eta_T_limit(const RegimeParams& p) {
    if (std::abs(p.alpha - 2.0) <= kEqTol)
        return zeta_limit(2.0, ZetaKind::Horizontal) / (2.0 * p.c1h * p.c1h);
    return 0.0;  // n^{2-alpha} -> 0 for alpha > 2
}

double eta_iso_limit(const RegimeParams& p) {
    return (2.0 / 3.0) * zeta_limit(3.0, ZetaKind::Solid) / (p.cv * p.cv);
}

double a_rho_limit(const RegimeParams& p) {
    return p.rho * zeta_limit(2.0, ZetaKind::Horizontal) / (p.c1h * p.c2h);
}

double helicity_limit(const RegimeParams& p) {
    double j = 0.5 * (p.alpha + p.beta - 2.0);
    return -2.0 * p.rho * zeta_limit(j, ZetaKind::Horizontal) / (p.c1h * p.c2h);
}

double helicity(const RegimeParams& p) {
    double j = 0.5 * (p.alpha + p.beta - 2.0);
    double n_pow = std::pow(static_cast<double>(p.n), 0.5 * (6.0 - p.alpha - p.beta));
    return -2.0 * p.rho * zeta_shell(p.n, j, ZetaKind::Horizontal) * n_pow /
           (p.c1h * p.c2h);
}

double helicity_direct(const NoiseTable& table) {
    // H = E<W(t), curl W(t)> / (2 t (2 pi)^3) as an explicit mode sum:
    // diagonal j = m terms over the whole shell plus rho cross terms on the
    // horizontal ring.  <e^{ikx} v, e^{ikx} w> = (2 pi)^3 v . conj(w) and
    // curl(theta a e^{ikx}) = i theta (k x a) e^{ikx}; the (2 pi)^3 cancels.
    const RegimeParams& p = table.params;
    const Complex mi{0.0, -1.0};
    double total = 0.0;
    for (const WaveVector& k : shell_modes(p.n, false)) {
        ModeFrame f = mode_frame(k);
        Vec3 kv = k.to_vec3();
        Complex t1 = theta(p, k, 1);
        Complex t2 = theta(p, k, 2);
        double diag = (mi * t1 * std::conj(t1) *
                       Complex{f.a1.dot(kv.cross(f.a1)), 0.0})
                          .real() +
                      (mi * t2 * std::conj(t2) *
                       Complex{f.a2.dot(kv.cross(f.a2)), 0.0})
                          .real();
        total += diag;
        if (k.k3 == 0) {
            double cross12 = (mi * t1 * std::conj(t2) *
                              Complex{f.a1.dot(kv.cross(f.a2)), 0.0})
                                 .real();
            double cross21 = (mi * t2 * std::conj(t1) *
                              Complex{f.a2.dot(kv.cross(f.a1)), 0.0})
                                 .real();
            total += p.rho * (cross12 + cross21);
        }
    }
    return total;
}

}  // namespace helix
