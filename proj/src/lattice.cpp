#include "helix/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace helix {

double WaveVector::norm() const { return std::sqrt(double(norm_sq())); }

bool in_gamma_plus(const WaveVector& k) {
    if (k.k3 != 0) return k.k3 > 0;
    if (k.k2 != 0) return k.k2 > 0;
    return k.k1 > 0;
}

bool in_shell(const WaveVector& k, int n) {
    const std::int64_t q = k.norm_sq();
    const std::int64_t n2 = std::int64_t(n) * n;
    return q >= n2 && q <= 4 * n2 && !k.is_zero();
}

bool in_shell_h(const WaveVector& k, int n) {
    const std::int64_t q = k.h_norm_sq();
    const std::int64_t n2 = std::int64_t(n) * n;
    return q >= n2 && q <= 4 * n2;
}

std::vector<WaveVector> shell_modes(int n, bool horizontal) {
    if (n < 1) throw std::invalid_argument("shell_modes: n must be >= 1");
    std::vector<WaveVector> out;
    const int top = 2 * n;
    if (horizontal) {
        for (int k1 = -top; k1 <= top; ++k1)
            for (int k2 = -top; k2 <= top; ++k2) {
                WaveVector k{k1, k2, 0};
                if (!k.is_zero() && in_shell_h(k, n)) out.push_back(k);
            }
    } else {
        for (int k1 = -top; k1 <= top; ++k1)
            for (int k2 = -top; k2 <= top; ++k2)
                for (int k3 = -top; k3 <= top; ++k3) {
                    WaveVector k{k1, k2, k3};
                    if (in_shell(k, n)) out.push_back(k);
                }
    }
    return out;  // loop order is already lexicographic
}

double zeta_shell(int n, double j, ZetaKind kind) {
    if (n < 1) throw std::invalid_argument("zeta_shell: n must be >= 1");
    const int top = 2 * n;
    const std::int64_t n2 = std::int64_t(n) * n, m2 = 4 * n2;
    double sum = 0.0;
    if (kind == ZetaKind::Horizontal) {
        for (int k1 = -top; k1 <= top; ++k1)
            for (int k2 = -top; k2 <= top; ++k2) {
                const std::int64_t q = std::int64_t(k1) * k1 + std::int64_t(k2) * k2;
                if (q < n2 || q > m2 || q == 0) continue;
                sum += std::pow(double(q), -0.5 * j);
            }
        return std::pow(double(n), j - 2.0) * sum;
    }
    for (int k1 = -top; k1 <= top; ++k1)
        for (int k2 = -top; k2 <= top; ++k2) {
            const std::int64_t qh = std::int64_t(k1) * k1 + std::int64_t(k2) * k2;
            if (qh > m2) continue;
            for (int k3 = -top; k3 <= top; ++k3) {
                const std::int64_t q = qh + std::int64_t(k3) * k3;
                if (q < n2 || q > m2 || q == 0) continue;
                sum += std::pow(double(q), -0.5 * j);
            }
        }
    return std::pow(double(n), j - 3.0) * sum;
}

double zeta_limit(double j, ZetaKind kind) {
    using std::numbers::pi;
    const double ln2 = std::numbers::ln2;
    if (kind == ZetaKind::Solid) {
        if (j == 3.0) return 4.0 * pi * ln2;
        return 4.0 * pi * (std::pow(2.0, 3.0 - j) - 1.0) / (3.0 - j);
    }
    if (j == 2.0) return 2.0 * pi * ln2;
    return 2.0 * pi * (std::pow(2.0, 2.0 - j) - 1.0) / (2.0 - j);
}

double chi(double alpha, double beta, double gamma) {
    if (alpha == 3.0 && beta == 3.0 && gamma == 3.0) return 1.0;
    if (alpha == 2.0 && beta == 4.0 && gamma > 3.0) return std::min(gamma - 3.0, 1.0);
    if (alpha > 2.0 && beta > 2.0 && gamma > 3.0)
        return std::min({alpha - 2.0, beta - 2.0, gamma - 3.0});
    return 0.0;
}

ModeFrame mode_frame(const WaveVector& k) {
    if (k.is_zero()) throw std::invalid_argument("mode_frame: k must be nonzero");
    const WaveVector kp = in_gamma_plus(k) ? k : -k;  // a(-k,j) = a(k,j)
    const Vec3 kv = kp.to_vec3();
    const double kn = kv.norm();
    if (kp.k3 == 0) {
        return {{-kv.y / kn, kv.x / kn, 0.0}, {0.0, 0.0, 1.0}};
    }
    Vec3 a1;
    if (kp.h_norm_sq() == 0) {
        a1 = {1.0, 0.0, 0.0};
    } else {
        const Vec3 c = kv.cross({0.0, 0.0, 1.0});
        a1 = c * (1.0 / c.norm());
    }
    const Vec3 a2 = (kv * (1.0 / kn)).cross(a1);
    return {a1, a2};
}

}  // namespace helix
