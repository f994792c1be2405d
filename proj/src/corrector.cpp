// Lie-derivative machinery and the Ito corrector in both forms.
#include "helix/corrector.hpp"

#include <cmath>

namespace helix {

CVec3 FullField::coeff(const WaveVector& k) const {
    auto it = modes.find(k);
    return it == modes.end() ? CVec3{} : it->second;
}

double FullField::max_conjugate_defect() const {
    double worst = 0.0;
    for (const auto& [k, v] : modes) {
        CVec3 d = v - coeff(-k).conj();
        worst = std::max(worst, std::sqrt(d.norm_sq()));
    }
    return worst;
}

FullField to_full(const SpectralField& f) {
    FullField out;
    for (const auto& [k, b] : f.modes) {
        out.modes[k] = b;
        out.modes[-k] = b.conj();
    }
    return out;
}

FullField lie_full(const WaveVector& k, const CVec3& c, const FullField& f) {
    FullField out;
    const Complex i{0.0, 1.0};
    for (const auto& [h, b] : f.modes) {
        // i [ (c.h) b - (k.b) c ]
        Complex ch = dot_bilinear(c, CVec3(h.to_vec3()));
        Complex kb = dot_bilinear(b, CVec3(k.to_vec3()));
        out.add(h + k, (b * ch - c * kb) * i);
    }
    return out;
}

SpectralField lie_pair_fused(const WaveVector& k, const CVec3& m,
                             const SpectralField& f) {
    SpectralField out;
    out.K_max = f.K_max + static_cast<int>(std::ceil(k.norm()));
    out.divergence_free = f.divergence_free;
    const Complex i{0.0, 1.0};
    const CVec3 mbar = m.conj();
    const Vec3 kv = k.to_vec3();
    for (const auto& [h, b] : f.modes) {
        Vec3 hv = h.to_vec3();
        Complex kb = dot_bilinear(b, CVec3(kv));
        // Zero-mode targets are skipped: at h = -k the coefficient
        // i [ (m.h) b - (k.b) m ] vanishes identically because m is
        // perpendicular to k and F is divergence free.
        if (h != -k)
            out.add(h + k, (b * dot_bilinear(m, CVec3(hv)) - m * kb) * i);
        if (h != k)
            out.add(h - k, (b * dot_bilinear(mbar, CVec3(hv)) + mbar * kb) * i);
    }
    out.drop_zero_modes();
    return out;
}

SpectralField cross_pair_fused(const WaveVector& k, const CVec3& m,
                               const SpectralField& f) {
    SpectralField out;
    out.K_max = f.K_max + static_cast<int>(std::ceil(k.norm()));
    out.divergence_free = false;
    const CVec3 mbar = m.conj();
    // The zero (mean) mode falls outside the mean-free state space and is
    // dropped; downstream uses take a curl, which kills constants anyway.
    for (const auto& [h, b] : f.modes) {
        if (h != -k) out.add(h + k, cross(m, b));
        if (h != k) out.add(h - k, cross(mbar, b));
    }
    out.drop_zero_modes();
    return out;
}

CorrectorMultipliers corrector_multipliers(const NoiseTable& table) {
    CovarianceAtZero cov = covariance_at_zero(table);
    GradQrho g = grad_qrho_at_zero(table);
    CorrectorMultipliers m;
    m.lam_h = 0.5 * (cov.qbar(0, 0) + cov.qprime(0, 0));
    m.lam_v = 0.5 * (cov.qbar(2, 2) + cov.qprime(2, 2));
    m.a_rho = g.a_rho;
    return m;
}

double lambda_scalar(const CorrectorMultipliers& m, const WaveVector& h) {
    return m.lam_h * static_cast<double>(h.h_norm_sq()) +
           m.lam_v * static_cast<double>(h.k3 * h.k3);
}

CVec3 corrector_apply(const CorrectorMultipliers& m, const WaveVector& h,
                      const CVec3& b) {
    CVec3 out = b * Complex{-lambda_scalar(m, h), 0.0};
    // i h x (A b), A = a_rho diag(1, 1, 0)
    CVec3 ab{b.x * m.a_rho, b.y * m.a_rho, Complex{0.0, 0.0}};
    out += cross(h.to_vec3(), ab) * Complex{0.0, 1.0};
    return out;
}

namespace {

// L_{c e^{ikx}} L_{c' e^{ik'x}} F + L_{c' e^{ik'x}} L_{c e^{ikx}} F
FullField lie_sym(const WaveVector& k, const CVec3& c, const WaveVector& kp,
                  const CVec3& cp, const FullField& f) {
    FullField out = lie_full(k, c, lie_full(kp, cp, f));
    FullField second = lie_full(kp, cp, lie_full(k, c, f));
    for (const auto& [h, v] : second.modes) out.add(h, v);
    return out;
}

// Coefficient landing at h + k when L_{c e^{ikx}} acts on the single mode
// (h, b): i [ (c.h) b - (k.b) c ].
CVec3 lie_step(const WaveVector& k, const CVec3& c, const WaveVector& h,
               const CVec3& b) {
    Complex ch = dot_bilinear(c, CVec3(h.to_vec3()));
    Complex kb = dot_bilinear(b, CVec3(k.to_vec3()));
    return (b * ch - c * kb) * Complex{0.0, 1.0};
}

// L_{co e^{i ko x}} L_{ci e^{i ki x}} applied to mode (h, b); callers always
// use ki = -ko, so the value lands back at h.
CVec3 compose2(const WaveVector& ko, const CVec3& co, const WaveVector& ki,
               const CVec3& ci, const WaveVector& h, const CVec3& b) {
    return lie_step(ko, co, h + ki, lie_step(ki, ci, h, b));
}

}  // namespace

SpectralField ito_corrector_direct(const NoiseTable& table,
                                   const SpectralField& f) {
    SpectralField out;
    out.K_max = f.K_max;
    out.divergence_free = f.divergence_free;
    const double rho = table.params.rho;
    for (const auto& [h, b] : f.modes) {
        CVec3 acc{};
        for (const NoiseEntry& e : table.entries) {
            const CVec3 s1 = CVec3(e.frame.a1) * e.theta1;
            const CVec3 s2 = CVec3(e.frame.a2) * e.theta2;
            const CVec3 s1b = s1.conj();
            const CVec3 s2b = s2.conj();
            const WaveVector k = e.k, mk = -e.k;
            acc += compose2(k, s1, mk, s1b, h, b);
            acc += compose2(mk, s1b, k, s1, h, b);
            acc += compose2(k, s2, mk, s2b, h, b);
            acc += compose2(mk, s2b, k, s2, h, b);
            if (e.k.k3 == 0 && rho != 0.0) {
                CVec3 cr = compose2(k, s1, mk, s2b, h, b);
                cr += compose2(mk, s1b, k, s2, h, b);
                cr += compose2(k, s2, mk, s1b, h, b);
                cr += compose2(mk, s2b, k, s1, h, b);
                acc += cr * Complex{rho, 0.0};
            }
        }
        out.modes[h] = acc;
    }
    return out;
}

FullField ito_corrector_nested(const NoiseTable& table, const SpectralField& f) {
    FullField ff = to_full(f);
    FullField acc;
    const double rho = table.params.rho;
    for (const NoiseEntry& e : table.entries) {
        const CVec3 s1 = CVec3(e.frame.a1) * e.theta1;
        const CVec3 s2 = CVec3(e.frame.a2) * e.theta2;
        const CVec3 s1b = s1.conj();
        const CVec3 s2b = s2.conj();
        const WaveVector k = e.k, mk = -e.k;
        // diagonal terms: L_sigma L_conj(sigma) + L_conj(sigma) L_sigma
        for (const auto& [h, v] : lie_sym(k, s1, mk, s1b, ff).modes) acc.add(h, v);
        for (const auto& [h, v] : lie_sym(k, s2, mk, s2b, ff).modes) acc.add(h, v);
        // cross terms on horizontal modes, weighted by rho
        if (e.k.k3 == 0 && rho != 0.0) {
            FullField cr = lie_sym(k, s1, mk, s2b, ff);
            for (const auto& [h, v] : lie_sym(mk, s1b, k, s2, ff).modes)
                cr.add(h, v);
            for (const auto& [h, v] : cr.modes)
                acc.add(h, v * Complex{rho, 0.0});
        }
    }
    return acc;
}

double cross_norm_sum(const NoiseTable& table, const SpectralField& f) {
    const RegimeParams& p = table.params;
    double total = 0.0;
    for (const WaveVector& k : shell_modes(p.n, false)) {
        ModeFrame fr = mode_frame(k);
        double w1 = std::norm(theta(p, k, 1));
        double w2 = std::norm(theta(p, k, 2));
        double s = 0.0;
        for (const auto& [h, b] : f.modes)
            s += 2.0 * (w1 * cross(fr.a1, b).norm_sq() +
                        w2 * cross(fr.a2, b).norm_sq());
        total += s;
    }
    return total;
}

}  // namespace helix
