// Small fixed-size real/complex linear algebra used throughout the spectral
// code.  Everything is a plain aggregate; no dynamic allocation.
#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace helix {

using Complex = std::complex<double>;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct CVec3 {
    Complex x{0.0, 0.0}, y{0.0, 0.0}, z{0.0, 0.0};

    CVec3() = default;
    CVec3(Complex a, Complex b, Complex c) : x(a), y(b), z(c) {}
    explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

    CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    CVec3 operator*(Complex s) const { return {x * s, y * s, z * s}; }
    CVec3 operator-() const { return {-x, -y, -z}; }
    CVec3& operator+=(const CVec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }

    CVec3 conj() const { return {std::conj(x), std::conj(y), std::conj(z)}; }
    // |v|^2 summed over components.
    double norm_sq() const { return std::norm(x) + std::norm(y) + std::norm(z); }
    bool finite() const {
        return std::isfinite(x.real()) && std::isfinite(x.imag()) &&
               std::isfinite(y.real()) && std::isfinite(y.imag()) &&
               std::isfinite(z.real()) && std::isfinite(z.imag());
    }
};

inline CVec3 operator*(Complex s, const CVec3& v) { return v * s; }

// v . w without conjugation (bilinear pairing, used for divergence k.b).
inline Complex dot_bilinear(const Vec3& v, const CVec3& w) {
    return v.x * w.x + v.y * w.y + v.z * w.z;
}
inline Complex dot_bilinear(const CVec3& v, const CVec3& w) {
    return v.x * w.x + v.y * w.y + v.z * w.z;
}
// Hermitian inner product <v, w> = sum v_i conj(w_i).
inline Complex dot_herm(const CVec3& v, const CVec3& w) {
    return v.x * std::conj(w.x) + v.y * std::conj(w.y) + v.z * std::conj(w.z);
}
inline CVec3 cross(const Vec3& v, const CVec3& w) {
    return {v.y * w.z - v.z * w.y, v.z * w.x - v.x * w.z, v.x * w.y - v.y * w.x};
}
inline CVec3 cross(const CVec3& v, const CVec3& w) {
    return {v.y * w.z - v.z * w.y, v.z * w.x - v.x * w.z, v.x * w.y - v.y * w.x};
}

struct Mat3 {
    // Row-major 3x3 real matrix.
    std::array<double, 9> m{};

    double& operator()(int r, int c) { return m[3 * r + c]; }
    double operator()(int r, int c) const { return m[3 * r + c]; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
        return r;
    }
    static Mat3 identity() {
        Mat3 r;
        r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
        return r;
    }
    static Mat3 outer(const Vec3& a, const Vec3& b) {
        Mat3 r;
        const double av[3] = {a.x, a.y, a.z}, bv[3] = {b.x, b.y, b.z};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r(i, j) = av[i] * bv[j];
        return r;
    }
    double frobenius() const {
        double s = 0.0;
        for (double v : m) s += v * v;
        return std::sqrt(s);
    }
    double max_abs() const {
        double s = 0.0;
        for (double v : m) s = std::max(s, std::abs(v));
        return s;
    }
};

struct CMat3 {
    // Row-major 3x3 complex matrix.
    std::array<Complex, 9> m{};

    Complex& operator()(int r, int c) { return m[3 * r + c]; }
    Complex operator()(int r, int c) const { return m[3 * r + c]; }

    CVec3 apply(const CVec3& v) const {
        return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
                m[3] * v.x + m[4] * v.y + m[5] * v.z,
                m[6] * v.x + m[7] * v.y + m[8] * v.z};
    }
    CMat3 operator+(const CMat3& o) const {
        CMat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }
    double max_abs_diff(const CMat3& o) const {
        double s = 0.0;
        for (int i = 0; i < 9; ++i) s = std::max(s, std::abs(m[i] - o.m[i]));
        return s;
    }
    static CMat3 from_real(const Mat3& a) {
        CMat3 r;
        for (int i = 0; i < 9; ++i) r.m[i] = a.m[i];
        return r;
    }
};

// exp(M) for a complex 2x2 matrix, by the trace/determinant closed form:
// with mu = tr(M)/2 and s^2 = mu^2 - det(M),
//   exp(M) = e^mu [ cosh(s) I + sinh(s)/s (M - mu I) ].
// The s -> 0 limit is handled by the series sinh(s)/s = 1 + s^2/6 + ...
struct CMat2 {
    Complex a{}, b{}, c{}, d{};  // [[a, b], [c, d]]

    CMat2 exp() const {
        const Complex mu = 0.5 * (a + d);
        const Complex det = a * d - b * c;
        const Complex s2 = mu * mu - det;
        const Complex s = std::sqrt(s2);
        Complex ch, shs;  // cosh(s), sinh(s)/s
        if (std::abs(s) < 1e-8) {
            ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
            shs = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
        } else {
            ch = std::cosh(s);
            shs = std::sinh(s) / s;
        }
        const Complex emu = std::exp(mu);
        CMat2 r;
        r.a = emu * (ch + shs * (a - mu));
        r.b = emu * (shs * b);
        r.c = emu * (shs * c);
        r.d = emu * (ch + shs * (d - mu));
        return r;
    }

    // Eigenvalues mu +/- s.
    std::array<Complex, 2> eigenvalues() const {
        const Complex mu = 0.5 * (a + d);
        const Complex det = a * d - b * c;
        const Complex s = std::sqrt(mu * mu - det);
        return {mu + s, mu - s};
    }
};

}  // namespace helix
