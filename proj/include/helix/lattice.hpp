// Wavevector lattice on the 3-torus: the half-lattice split, dyadic shells,
// shell zeta sums with their large-n limits, the chi(alpha,beta,gamma)
// regime indicator, and the orthonormal mode frames.
#pragma once

#include <cstdint>
#include <vector>

#include "helix/geometry.hpp"

namespace helix {

struct WaveVector {
    int k1 = 0, k2 = 0, k3 = 0;

    std::int64_t norm_sq() const {
        return std::int64_t(k1) * k1 + std::int64_t(k2) * k2 + std::int64_t(k3) * k3;
    }
    std::int64_t h_norm_sq() const {
        return std::int64_t(k1) * k1 + std::int64_t(k2) * k2;
    }
    double norm() const;
    bool is_zero() const { return k1 == 0 && k2 == 0 && k3 == 0; }
    bool is_horizontal() const { return k3 == 0; }

    WaveVector operator-() const { return {-k1, -k2, -k3}; }
    WaveVector operator+(const WaveVector& o) const {
        return {k1 + o.k1, k2 + o.k2, k3 + o.k3};
    }
    WaveVector operator-(const WaveVector& o) const {
        return {k1 - o.k1, k2 - o.k2, k3 - o.k3};
    }
    bool operator==(const WaveVector& o) const {
        return k1 == o.k1 && k2 == o.k2 && k3 == o.k3;
    }
    // Lexicographic (k1, k2, k3): gives every container a deterministic order.
    bool operator<(const WaveVector& o) const {
        if (k1 != o.k1) return k1 < o.k1;
        if (k2 != o.k2) return k2 < o.k2;
        return k3 < o.k3;
    }

    Vec3 to_vec3() const { return {double(k1), double(k2), double(k3)}; }
};

// Half-lattice membership: k3 > 0, or k3 = 0 and k2 > 0, or k3 = k2 = 0 and
// k1 > 0.  Exactly one of k, -k is in the half-lattice for k != 0.
bool in_gamma_plus(const WaveVector& k);

// True when n <= |k| <= 2n (integer arithmetic: n^2 <= |k|^2 <= 4n^2).
bool in_shell(const WaveVector& k, int n);
bool in_shell_h(const WaveVector& k, int n);  // horizontal norm, any k3

// All nonzero lattice vectors with n <= |k| <= 2n, sorted lexicographically.
// horizontal = true restricts to the plane k3 = 0 with n <= |k_H| <= 2n.
std::vector<WaveVector> shell_modes(int n, bool horizontal);

enum class ZetaKind { Solid, Horizontal };

// Shell zeta sums.
//   Solid:      zeta^n_{s,j} = n^{j-3} * sum over k in Z^3 \ {0}, n <= |k| <= 2n of |k|^-j
//   Horizontal: zeta^n_{H,j} = n^{j-2} * sum over k in Z^2 \ {0}, n <= |k| <= 2n of |k|^-j
double zeta_shell(int n, double j, ZetaKind kind);

// Large-n limits:
//   Solid:      4 pi log 2            (j = 3),  4 pi (2^{3-j} - 1)/(3 - j) otherwise
//   Horizontal: 2 pi log 2            (j = 2),  2 pi (2^{2-j} - 1)/(2 - j) otherwise
double zeta_limit(double j, ZetaKind kind);

// Regime indicator chi(alpha,beta,gamma):
//   1                                  if alpha = beta = gamma = 3
//   min(gamma-3, 1)                    if alpha = 2, beta = 4, gamma > 3
//   min(alpha-2, beta-2, gamma-3)      if alpha > 2, beta > 2, gamma > 3
//   0                                  otherwise
double chi(double alpha, double beta, double gamma);

// Orthonormal frame {a1, a2} completing k/|k|; a(-k,j) = a(k,j).
//   k3 = 0 (k in Gamma+): a1 = (-k2, k1, 0)/|k|, a2 = e3.
//   k3 != 0 (k in Gamma+): a1 = normalize(k x e3) if k_H != 0 else (1,0,0);
//                          a2 = (k/|k|) x a1.
struct ModeFrame {
    Vec3 a1, a2;
};
ModeFrame mode_frame(const WaveVector& k);

}  // namespace helix
