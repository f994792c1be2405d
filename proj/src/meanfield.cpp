// Exact per-mode mean-field propagators and the Duhamel cross-check.
#include "helix/meanfield.hpp"

#include <cmath>
#include <stdexcept>

namespace helix {

namespace {

// phi(x) = (e^x - 1) / x, phi(0) = 1
double phi1(double x) {
    if (x == 0.0) return 1.0;
    return std::expm1(x) / x;
}

// Rotation generator in the mode frame: N2_ij = a_i . (i h x (A a_j)),
// A = a_rho diag(1, 1, 0).  Entries are purely imaginary.
CMat2 rotation_block(double a_rho, const WaveVector& h, const ModeFrame& f) {
    Vec3 hv = h.to_vec3();
    auto column = [&](const Vec3& aj) {
        Vec3 Aaj{a_rho * aj.x, a_rho * aj.y, 0.0};
        return hv.cross(Aaj);
    };
    Vec3 u1 = column(f.a1), u2 = column(f.a2);
    CMat2 n2;
    n2.a = Complex{0.0, f.a1.dot(u1)};
    n2.b = Complex{0.0, f.a1.dot(u2)};
    n2.c = Complex{0.0, f.a2.dot(u1)};
    n2.d = Complex{0.0, f.a2.dot(u2)};
    return n2;
}

}  // namespace

DriftModel spde_mean_model(const NoiseTable& table) {
    DriftModel m;
    m.eta = table.params.eta;
    m.mult = corrector_multipliers(table);
    return m;
}

DriftModel limit_model(const RegimeParams& p) {
    DriftModel m;
    m.eta = p.eta;
    switch (p.regime) {
        case Regime::Helical:
        case Regime::Perturbed2D:
            m.mult.lam_h = eta_T_limit(p);
            m.mult.lam_v = 0.0;
            break;
        case Regime::Isotropic: {
            double e = eta_iso_limit(p);
            m.mult.lam_h = e;
            m.mult.lam_v = e;
            break;
        }
    }
    m.mult.a_rho = a_rho_limit(p);
    return m;
}

double mode_decay(const DriftModel& m, const WaveVector& h) {
    return m.eta * static_cast<double>(h.norm_sq()) + lambda_scalar(m.mult, h);
}

CMat3 mode_propagator(const DriftModel& m, const WaveVector& h, double t) {
    const double d = mode_decay(m, h);
    const double scale = std::exp(-d * t);
    CMat3 p;
    if (m.mult.a_rho == 0.0) {
        for (int i = 0; i < 3; ++i) p(i, i) = Complex{scale, 0.0};
        return p;
    }
    ModeFrame f = mode_frame(h);
    CMat2 n2 = rotation_block(m.mult.a_rho, h, f);
    CMat2 e2 = CMat2{n2.a * t, n2.b * t, n2.c * t, n2.d * t}.exp();
    Vec3 hv = h.to_vec3() * (1.0 / h.norm());
    Mat3 basis[3][3];  // outer products a_i (x) a_j and hhat (x) hhat
    const Vec3 av[2] = {f.a1, f.a2};
    Complex coef[2][2] = {{e2.a, e2.b}, {e2.c, e2.d}};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) basis[i][j] = Mat3::outer(av[i], av[j]);
    Mat3 radial = Mat3::outer(hv, hv);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            Complex v{radial(r, c), 0.0};
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    v += coef[i][j] * basis[i][j](r, c);
            p(r, c) = v * scale;
        }
    return p;
}

SpectralField evolve_mean(const DriftModel& m, const SpectralField& b0,
                          double t) {
    SpectralField out = b0;
    for (auto& [h, b] : out.modes) b = mode_propagator(m, h, t).apply(b);
    return out;
}

double dominant_rate(const DriftModel& m, const WaveVector& h) {
    double d = mode_decay(m, h);
    if (m.mult.a_rho == 0.0) return d;
    CMat2 n2 = rotation_block(m.mult.a_rho, h, mode_frame(h));
    auto eig = n2.eigenvalues();
    double spread = std::max(eig[0].real(), eig[1].real());
    return d - spread;
}

double decay_rate(const DriftModel& m, const SpectralField& b0) {
    if (b0.modes.size() != 1)
        throw std::invalid_argument(
            "decay_rate: initial datum must carry exactly one mode pair");
    return dominant_rate(m, b0.modes.begin()->first);
}

Complex evolve_b3_duhamel(const DriftModel& m, const WaveVector& h,
                          const CVec3& b0, double t) {
    const double d = mode_decay(m, h);
    const double a = m.mult.a_rho;
    const double h1 = h.k1, h2 = h.k2, h3 = h.k3;
    const double decay = std::exp(-d * t);
    // Horizontal subsystem d/dt bH = -d bH + i a h3 J bH, J = [[0,-1],[1,0]],
    // diagonalised by v+/- = (1, -/+ i)/sqrt(2) with rates -d -/+ a h3.
    const Complex i{0.0, 1.0};
    const double inv_sq2 = 1.0 / std::sqrt(2.0);
    Complex cp = (b0.x + i * b0.y) * inv_sq2;   // v+ component
    Complex cm = (b0.x - i * b0.y) * inv_sq2;   // v- component
    // source i a (h1 b2(s) - h2 b1(s)) against e^{-d (t-s)}
    Complex sp = cp * Complex{-h2, -h1} * inv_sq2;  // (-i h1 - h2)/sqrt(2) c+
    Complex sm = cm * Complex{-h2, h1} * inv_sq2;   // (i h1 - h2)/sqrt(2) c-
    Complex integral = sp * phi1(-a * h3 * t) + sm * phi1(a * h3 * t);
    return decay * (b0.z + i * Complex{a * t, 0.0} * integral);
}

double b_lambda(const SpectralField& b, int lambda) {
    return b.inner(beltrami_field(lambda));
}

}  // namespace helix
