// Spectral field operations: canonical Gamma+ storage, Sobolev norms,
// curl / divergence / Leray projection, and the heat multiplier.
#include "helix/field.hpp"

#include <cmath>
#include <stdexcept>

namespace helix {

namespace {

// Map k to its Gamma+ representative, conjugating the payload when mirrored.
inline WaveVector canonical(const WaveVector& k, CVec3& v) {
    if (k.is_zero()) throw std::invalid_argument("field: zero mode not stored");
    if (in_gamma_plus(k)) return k;
    v = v.conj();
    return -k;
}

}  // namespace

CVec3 SpectralField::coeff(const WaveVector& k) const {
    if (in_gamma_plus(k)) {
        auto it = modes.find(k);
        return it == modes.end() ? CVec3{} : it->second;
    }
    auto it = modes.find(-k);
    return it == modes.end() ? CVec3{} : it->second.conj();
}

void SpectralField::set(const WaveVector& k, const CVec3& v) {
    CVec3 w = v;
    WaveVector key = canonical(k, w);
    modes[key] = w;
}

void SpectralField::add(const WaveVector& k, const CVec3& v) {
    CVec3 w = v;
    WaveVector key = canonical(k, w);
    modes[key] += w;
}

void SpectralField::drop_zero_modes(double tol) {
    for (auto it = modes.begin(); it != modes.end();) {
        if (it->second.norm_sq() <= tol * tol)
            it = modes.erase(it);
        else
            ++it;
    }
}

double SpectralField::sobolev_sq(double s) const {
    double sum = 0.0;
    for (const auto& [k, b] : modes)
        sum += b.norm_sq() * std::pow(static_cast<double>(k.norm_sq()), s);
    return 2.0 * sum;  // Gamma- mirror contributes equally
}

double SpectralField::inner(const SpectralField& g) const {
    double sum = 0.0;
    for (const auto& [k, b] : modes) {
        auto it = g.modes.find(k);
        if (it != g.modes.end()) sum += dot_herm(b, it->second).real();
    }
    return 2.0 * sum;
}

CVec3 SpectralField::evaluate(const Vec3& x) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double norm = std::pow(two_pi, -1.5);
    CVec3 acc;
    for (const auto& [k, b] : modes) {
        double phase = k.k1 * x.x + k.k2 * x.y + k.k3 * x.z;
        Complex e{std::cos(phase), std::sin(phase)};
        // b e^{ik.x} + conj(b) e^{-ik.x} = 2 Re(b e^{ik.x})
        CVec3 term = b * e;
        acc += CVec3{2.0 * term.x.real(), 2.0 * term.y.real(),
                     2.0 * term.z.real()};
    }
    return acc * Complex{norm, 0.0};
}

double SpectralField::div_residual() const {
    double num = 0.0;
    for (const auto& [k, b] : modes) {
        Vec3 khat = k.to_vec3() * (1.0 / k.norm());
        num += 2.0 * std::norm(dot_bilinear(khat, b));
    }
    double denom = l2_sq();
    if (denom <= 0.0) return 0.0;
    return std::sqrt(num / denom);
}

SpectralField SpectralField::curl() const {
    SpectralField out;
    out.K_max = K_max;
    out.divergence_free = true;
    for (const auto& [k, b] : modes) {
        // (curl F)_k = i k x b_k
        CVec3 c = cross(k.to_vec3(), b) * Complex{0.0, 1.0};
        out.modes[k] = c;
    }
    return out;
}

SpectralField SpectralField::leray_project() const {
    SpectralField out;
    out.K_max = K_max;
    out.divergence_free = true;
    for (const auto& [k, b] : modes) {
        Vec3 khat = k.to_vec3() * (1.0 / k.norm());
        Complex radial = dot_bilinear(khat, b);
        out.modes[k] = b - CVec3{khat.x * radial, khat.y * radial,
                                 khat.z * radial};
    }
    return out;
}

SpectralField SpectralField::operator+(const SpectralField& o) const {
    SpectralField out = *this;
    out.K_max = std::max(K_max, o.K_max);
    out.divergence_free = divergence_free && o.divergence_free;
    for (const auto& [k, b] : o.modes) out.modes[k] += b;
    return out;
}

SpectralField SpectralField::operator-(const SpectralField& o) const {
    SpectralField out = *this;
    out.K_max = std::max(K_max, o.K_max);
    out.divergence_free = divergence_free && o.divergence_free;
    for (const auto& [k, b] : o.modes) out.modes[k] += b * Complex{-1.0, 0.0};
    return out;
}

SpectralField SpectralField::operator*(double s) const {
    SpectralField out = *this;
    for (auto& [k, b] : out.modes) b = b * Complex{s, 0.0};
    return out;
}

Complex ScalarField::coeff(const WaveVector& k) const {
    if (in_gamma_plus(k)) {
        auto it = modes.find(k);
        return it == modes.end() ? Complex{} : it->second;
    }
    auto it = modes.find(-k);
    return it == modes.end() ? Complex{} : std::conj(it->second);
}

void ScalarField::add(const WaveVector& k, Complex v) {
    if (k.is_zero()) throw std::invalid_argument("field: zero mode not stored");
    if (in_gamma_plus(k))
        modes[k] += v;
    else
        modes[-k] += std::conj(v);
}

double ScalarField::sobolev_sq(double s) const {
    double sum = 0.0;
    for (const auto& [k, c] : modes)
        sum += std::norm(c) * std::pow(static_cast<double>(k.norm_sq()), s);
    return 2.0 * sum;
}

double ScalarField::inner(const ScalarField& g) const {
    double sum = 0.0;
    for (const auto& [k, c] : modes) {
        auto it = g.modes.find(k);
        if (it != g.modes.end()) sum += (c * std::conj(it->second)).real();
    }
    return 2.0 * sum;
}

ScalarField divergence(const SpectralField& f) {
    ScalarField out;
    for (const auto& [k, b] : f.modes) {
        Complex d = dot_bilinear(k.to_vec3(), b) * Complex{0.0, 1.0};
        out.modes[k] = d;
    }
    return out;
}

SpectralField beltrami_field(int lambda) {
    if (lambda == 0) throw std::invalid_argument("beltrami: lambda must be nonzero");
    // B = (sin(lambda x3), cos(lambda x3), 0). With the orthonormal basis the
    // stored coefficient at k = lambda e3 (Gamma+ for lambda > 0) is
    // (2pi)^{3/2} (-i/2, 1/2, 0).
    const double amp = std::pow(2.0 * std::numbers::pi, 1.5);
    SpectralField f;
    f.K_max = std::abs(lambda);
    f.divergence_free = true;
    WaveVector k{0, 0, lambda};
    CVec3 b{Complex{0.0, -0.5 * amp}, Complex{0.5 * amp, 0.0}, Complex{0.0, 0.0}};
    f.set(k, b);
    return f;
}

SpectralField random_divfree_field(int K, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f;
    f.K_max = K;
    f.divergence_free = true;
    const int64_t K_sq = static_cast<int64_t>(K) * K;
    for (int k1 = -K; k1 <= K; ++k1)
        for (int k2 = -K; k2 <= K; ++k2)
            for (int k3 = -K; k3 <= K; ++k3) {
                WaveVector k{k1, k2, k3};
                if (k.is_zero() || k.norm_sq() > K_sq) continue;
                if (!in_gamma_plus(k)) continue;
                CVec3 b{Complex{gauss(rng), gauss(rng)},
                        Complex{gauss(rng), gauss(rng)},
                        Complex{gauss(rng), gauss(rng)}};
                f.modes[k] = b;
            }
    return f.leray_project();
}

double semigroup_multiplier(const AnisotropicMultiplier& m, const WaveVector& k,
                            double t) {
    double expo = m.mu * static_cast<double>(k.h_norm_sq()) +
                  m.nu * static_cast<double>(k.k3 * k.k3);
    return std::exp(-t * expo);
}

}  // namespace helix
