// Tests for the Ito corrector: single-mode Lie derivatives, the fused real
// pair operator, the curl-of-cross factorization, agreement between the
// multiplier form, the per-mode direct sum, and the nested composition, the
// rotation part Lambda_rho, and the cross-product norm sum.
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "helix/corrector.hpp"

using namespace helix;

namespace {

const double kPi = std::numbers::pi;

double rel_gap(const SpectralField& a, const SpectralField& b) {
    double num = 0, den = 0;
    auto scan = [&](const SpectralField& f, const SpectralField& g, bool accum_den) {
        for (const auto& [k, v] : f.modes) {
            num = std::max(num, std::sqrt((g.coeff(k) - v).norm_sq()));
            if (accum_den) den = std::max(den, std::sqrt(v.norm_sq()));
        }
    };
    scan(a, b, true);
    scan(b, a, false);
    return den > 0 ? num / den : num;
}

} // namespace

TEST_CASE("FullField: accumulation, lookup, and conjugate defect") {
    FullField f;
    CVec3 v{Complex(1, 1), Complex(0, 2), Complex(-1, 0)};
    f.add({1, 0, 0}, v);
    f.add({1, 0, 0}, v);
    CHECK(f.coeff({1, 0, 0}).x == Complex(2, 2));
    CHECK(f.coeff({0, 1, 0}).norm_sq() == 0.0);
    // Without the conjugate mirror the defect is the full mode magnitude.
    CHECK(f.max_conjugate_defect() > 1.0);
    f.add({-1, 0, 0}, (v + v).conj());
    CHECK(f.max_conjugate_defect() == 0.0);

    // to_full expands a spectral field into explicit two-sided storage.
    SpectralField s;
    s.K_max = 2;
    s.set({0, 1, 1}, {Complex(1, 2), Complex(0, 1), Complex(0, -1)});
    FullField fs = to_full(s);
    CHECK(fs.max_conjugate_defect() < 1e-15);
    CHECK(fs.coeff({0, -1, -1}).x == std::conj(fs.coeff({0, 1, 1}).x));
}

TEST_CASE("lie_full: single-mode shift rule") {
    // L_v F with v = c e^{ik.x}: mode h contributes i[(c.h) b_h - (k.b_h) c]
    // at h + k.  Take k = (1,0,0), c = (0,i,0), F carrying (0,0,1) -> (1,i,0):
    //   c.h = i*0 = 0 at h = (0,0,1)... use h with nonzero overlap instead.
    FullField f;
    CVec3 b{Complex(1, 0), Complex(0, 1), Complex(0, 0)};
    f.add({0, 1, 0}, b);
    WaveVector k{1, 0, 0};
    CVec3 c{Complex(0, 0), Complex(0, 1), Complex(0, 0)};
    FullField out = lie_full(k, c, f);
    // c.h = i (h = (0,1,0)); k.b = 1.  Contribution at (1,1,0):
    // i [ i b - 1 c ] = i (i - 0, i*i - i, 0) = (i*i, i(-1 - i), 0)
    //                 = (-1, -i + 1, 0).
    CVec3 got = out.coeff({1, 1, 0});
    CHECK(std::abs(got.x - Complex(-1, 0)) < 1e-15);
    CHECK(std::abs(got.y - Complex(1, -1)) < 1e-15);
    CHECK(std::abs(got.z) < 1e-15);
    // Nothing lands anywhere else.
    for (const auto& [h, v] : out.modes)
        if (!(h == WaveVector{1, 1, 0})) CHECK(v.norm_sq() < 1e-30);
}

TEST_CASE("lie_pair_fused: worked example and structure preservation") {
    // k = (1,0,0), m = (0,i,0), F carrying the pair (0,0,1) -> (1,i,0).
    SpectralField f;
    f.K_max = 1;
    f.set({0, 0, 1}, {Complex(1, 0), Complex(0, 1), Complex(0, 0)});
    SpectralField out = lie_pair_fused({1, 0, 0}, {Complex(0, 0), Complex(0, 1), Complex(0, 0)}, f);
    // Both shifted modes carry (0, 1, 0).
    CHECK(std::abs(out.coeff({1, 0, 1}).y - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(out.coeff({1, 0, 1}).x) < 1e-15);
    CHECK(std::abs(out.coeff({1, 0, 1}).z) < 1e-15);
    CHECK(std::abs(out.coeff({-1, 0, 1}).y - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(out.coeff({-1, 0, 1}).x) < 1e-15);

    // Real pair operators keep real fields real and divergence free.
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralField g = random_divfree_field(3, rng);
        RegimeParams p;
        p.regime = Regime::Helical;
        p.alpha = 2; p.beta = 4; p.gamma = 4;
        p.c1h = 2; p.c2h = 2; p.cv = 2; p.rho = 0.5; p.n = 1 + trial % 2;
        NoiseTable table = build_noise_table(p);
        const NoiseEntry& e = table.entries[trial % table.entries.size()];
        CVec3 m = CVec3(e.frame.a1) * e.theta1 + CVec3(e.frame.a2) * e.theta2;
        SpectralField lg = lie_pair_fused(e.k, m, g);
        CHECK(lg.div_residual() < 1e-12);
        CHECK(to_full(lg).max_conjugate_defect() < 1e-13);
    }
}

TEST_CASE("cross_pair_fused: curl factorization of the Lie derivative") {
    // For divergence-free F and sigma, curl(sigma x F) = (F.grad) sigma
    // - (sigma.grad) F, so lie_pair_fused(k, m, F) = -curl(cross_pair_fused).
    std::mt19937_64 rng(77);
    RegimeParams p;
    p.regime = Regime::Isotropic;
    p.alpha = p.beta = p.gamma = 3;
    p.c1h = p.c2h = p.cv = 3; p.rho = 0.4; p.n = 2;
    NoiseTable table = build_noise_table(p);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralField f = random_divfree_field(3, rng);
        const NoiseEntry& e = table.entries[(3 * trial) % table.entries.size()];
        CVec3 m = CVec3(e.frame.a1) * e.theta1 + CVec3(e.frame.a2) * e.theta2;
        SpectralField lie = lie_pair_fused(e.k, m, f);
        SpectralField crs = cross_pair_fused(e.k, m, f);
        CHECK(rel_gap(lie, crs.curl() * -1.0) < 1e-12);
    }
}

TEST_CASE("corrector_multipliers: identities against the covariance etas") {
    for (int n : {1, 2, 3}) {
        std::vector<RegimeParams> cases;
        RegimeParams h;
        h.regime = Regime::Helical;
        h.alpha = 2; h.beta = 4; h.gamma = 6;
        h.c1h = 3; h.c2h = 1; h.cv = 3; h.rho = 1; h.eta = 0.5; h.n = n;
        cases.push_back(h);
        RegimeParams p2;
        p2.regime = Regime::Perturbed2D;
        p2.alpha = 2; p2.beta = 4; p2.gamma = 5;
        p2.c1h = 24; p2.c2h = 6; p2.cv = 6; p2.rho = 0.7; p2.n = n;
        cases.push_back(p2);
        RegimeParams iso;
        iso.regime = Regime::Isotropic;
        iso.alpha = iso.beta = iso.gamma = 3;
        iso.c1h = iso.c2h = iso.cv = 3; iso.rho = 0.5; iso.n = n;
        cases.push_back(iso);

        for (const auto& p : cases) {
            NoiseTable table = build_noise_table(p);
            CorrectorMultipliers cm = corrector_multipliers(table);
            EtaSet es = eta_set(p);
            GradQrho gq = grad_qrho_at_zero(table);
            CHECK(cm.lam_h
                  == doctest::Approx(es.eta_T + es.eta_V - es.eta_RV / 2)
                         .epsilon(1e-12).scale(1.0));
            CHECK(cm.lam_v
                  == doctest::Approx(es.eta_R + es.eta_V - es.eta_RV)
                         .epsilon(1e-12).scale(1.0));
            CHECK(cm.a_rho == doctest::Approx(gq.a_rho).epsilon(1e-12).scale(1.0));
        }
    }

    // Spot value: n = 1, alpha = 2, c1h = 2 gives eta_T = zeta_H2 / (2 c1h^2)
    // = 7/8 both through eta_set and through the covariance contraction.
    RegimeParams p;
    p.regime = Regime::Helical;
    p.alpha = 2; p.beta = 4; p.gamma = 4;
    p.c1h = 2; p.c2h = 1; p.cv = 1; p.rho = 0; p.n = 1;
    CHECK(eta_set(p).eta_T == doctest::Approx(0.875).epsilon(1e-14));
    CovarianceAtZero cov = covariance_at_zero(build_noise_table(p));
    CHECK(cov.qbar(0, 0) / 2 == doctest::Approx(0.875).epsilon(1e-13));
}

TEST_CASE("lambda_scalar and corrector_apply: multiplier action") {
    CorrectorMultipliers m{0.25, 0.75, 2.0};
    WaveVector h{1, 2, 3};
    CHECK(lambda_scalar(m, h) == doctest::Approx(0.25 * 5 + 0.75 * 9).epsilon(1e-15));

    // corrector_apply = -lambda(h) b + i h x (A b), A = a_rho diag(1,1,0).
    CVec3 b{Complex(1, -1), Complex(2, 0), Complex(0, 3)};
    CVec3 got = corrector_apply(m, h, b);
    CVec3 ab{b.x * 2.0, b.y * 2.0, Complex(0, 0)};
    CVec3 expect = cross(Vec3{1, 2, 3}, ab) * Complex(0, 1) - b * Complex(lambda_scalar(m, h), 0);
    CHECK(std::sqrt((got - expect).norm_sq()) < 1e-14);

    // Isotropic regime at rho = 0: pure multiplier -eta_iso |h|^2 b.
    RegimeParams iso;
    iso.regime = Regime::Isotropic;
    iso.alpha = iso.beta = iso.gamma = 3;
    iso.c1h = iso.c2h = iso.cv = 3; iso.rho = 0; iso.n = 2;
    NoiseTable table = build_noise_table(iso);
    CorrectorMultipliers cm = corrector_multipliers(table);
    const double eiso = eta_set(iso).eta_iso;
    CHECK(cm.lam_h == doctest::Approx(eiso).epsilon(1e-12));
    CHECK(cm.lam_v == doctest::Approx(eiso).epsilon(1e-12));
    CHECK(cm.a_rho == doctest::Approx(0.0).epsilon(1e-15).scale(1.0));
    CVec3 vb{Complex(0, 1), Complex(1, 0), Complex(2, 2)};
    CVec3 app = corrector_apply(cm, {2, -1, 1}, vb);
    CVec3 want = vb * Complex(-eiso * 6.0, 0);
    CHECK(std::sqrt((app - want).norm_sq()) < 1e-12);
}

TEST_CASE("ito_corrector_direct agrees with the multiplier form") {
    std::mt19937_64 rng(314);
    for (int n : {1, 2, 3}) {
        std::vector<RegimeParams> cases;
        RegimeParams h;
        h.regime = Regime::Helical;
        h.alpha = 2; h.beta = 4; h.gamma = 6;
        h.c1h = 3; h.c2h = 1; h.cv = 3; h.rho = 1; h.n = n;
        cases.push_back(h);
        RegimeParams p2;
        p2.regime = Regime::Perturbed2D;
        p2.alpha = 2; p2.beta = 4; p2.gamma = 5;
        p2.c1h = 24; p2.c2h = 6; p2.cv = 6; p2.rho = 0.7; p2.n = n;
        cases.push_back(p2);
        RegimeParams iso;
        iso.regime = Regime::Isotropic;
        iso.alpha = iso.beta = iso.gamma = 3;
        iso.c1h = iso.c2h = iso.cv = 3; iso.rho = 0.5; iso.n = n;
        cases.push_back(iso);

        for (const auto& p : cases) {
            NoiseTable table = build_noise_table(p);
            CorrectorMultipliers cm = corrector_multipliers(table);
            for (int trial = 0; trial < 3; ++trial) {
                SpectralField f = random_divfree_field(4, rng);
                SpectralField direct = ito_corrector_direct(table, f);
                SpectralField mult = f;
                mult.modes.clear();
                for (const auto& [k, v] : f.modes)
                    mult.set(k, corrector_apply(cm, k, v));
                CHECK(rel_gap(direct, mult) < 1e-10);
            }
        }
    }
}

TEST_CASE("ito_corrector_nested agrees with the direct per-mode sum") {
    // The nested route materialises every intermediate Lie derivative; it is
    // O(shell^2 x modes), so keep the instance tiny.
    RegimeParams p;
    p.regime = Regime::Perturbed2D;
    p.alpha = 2; p.beta = 4; p.gamma = 5;
    p.c1h = 24; p.c2h = 6; p.cv = 6; p.rho = 0.7; p.n = 1;
    NoiseTable table = build_noise_table(p);
    std::mt19937_64 rng(99);
    SpectralField f = random_divfree_field(3, rng);
    SpectralField direct = ito_corrector_direct(table, f);
    FullField nested = ito_corrector_nested(table, f);
    CHECK(nested.max_conjugate_defect() < 1e-13);
    double worst = 0, scale = 0;
    for (const auto& [k, v] : direct.modes) {
        worst = std::max(worst, std::sqrt((nested.coeff(k) - v).norm_sq()));
        scale = std::max(scale, std::sqrt(v.norm_sq()));
    }
    // Modes of the nested result outside the support of f must vanish (the
    // composition always shifts by +k then -k).
    for (const auto& [k, v] : nested.modes) {
        if (f.coeff(k).norm_sq() == 0.0)
            CHECK(std::sqrt(v.norm_sq()) < 1e-12 * std::max(1.0, scale));
    }
    CHECK(worst < 1e-10 * scale);
}

TEST_CASE("Lambda_rho: component identities, Beltrami eigenfield, duality") {
    RegimeParams p;
    p.regime = Regime::Helical;
    p.alpha = 2; p.beta = 4; p.gamma = 6;
    p.c1h = 3; p.c2h = 1; p.cv = 3; p.rho = 1; p.n = 2;
    NoiseTable table = build_noise_table(p);
    CorrectorMultipliers cm = corrector_multipliers(table);
    const double ar = cm.a_rho;

    // Componentwise: with A = a_rho diag(1,1,0),
    //   (i h x A b)_H = i a_rho h3 (-b2, b1);  (i h x A b)_3 = i a_rho (h1 b2 - h2 b1).
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        WaveVector h{1 + trial % 3, trial % 2 ? -2 : 1, trial % 4};
        CVec3 b{Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
        CVec3 rot = corrector_apply(cm, h, b) + b * Complex(lambda_scalar(cm, h), 0);
        CHECK(std::abs(rot.x - Complex(0, 1) * double(h.k3) * ar * (-b.y)) < 1e-13);
        CHECK(std::abs(rot.y - Complex(0, 1) * double(h.k3) * ar * b.x) < 1e-13);
        CHECK(std::abs(rot.z - Complex(0, 1) * ar
                                 * (double(h.k1) * b.y - double(h.k2) * b.x)) < 1e-13);
    }

    // On the Beltrami field, Lambda_rho B = a_rho lambda B.
    for (int lambda : {1, 2}) {
        SpectralField bel = beltrami_field(lambda);
        double worst = 0;
        for (const auto& [k, v] : bel.modes) {
            CVec3 rot = corrector_apply(cm, k, v) + v * Complex(lambda_scalar(cm, k), 0);
            CVec3 want = v * Complex(ar * lambda, 0);
            worst = std::max(worst, std::sqrt((rot - want).norm_sq()));
        }
        CHECK(worst < 1e-12 * std::sqrt(8 * kPi * kPi * kPi));
    }

    // Duality: the third component of Lambda_rho B paired against a scalar
    // test function phi equals a_rho <(-B2, B1, 0), grad_H phi>.
    for (int trial = 0; trial < 10; ++trial) {
        SpectralField f = random_divfree_field(3, rng);
        ScalarField phi;
        std::mt19937_64 prng(1000 + trial);
        std::normal_distribution<double> nd;
        for (const auto& [k, v] : f.modes)
            phi.add(k, Complex(nd(prng), nd(prng)));

        double lhs = 0, rhs = 0;
        for (const auto& [k, v] : f.modes) {
            CVec3 rot = corrector_apply(cm, k, v) + v * Complex(lambda_scalar(cm, k), 0);
            lhs += 2.0 * (rot.z * std::conj(phi.coeff(k))).real();
            // grad_H phi at k has components (i k1 phi, i k2 phi).
            CVec3 perp{-v.y, v.x, Complex(0, 0)};
            CVec3 gradh{Complex(0, 1) * double(k.k1) * phi.coeff(k),
                        Complex(0, 1) * double(k.k2) * phi.coeff(k), Complex(0, 0)};
            rhs += 2.0 * ar * dot_herm(perp, gradh).real();
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("cross_norm_sum: isotropic identity and helical bound") {
    std::mt19937_64 rng(555);

    // Isotropic: sum ||sigma x F||^2 = (4 zeta_s(n,3) / (3 cv^2)) ||F||^2.
    for (int n : {1, 2, 4}) {
        RegimeParams iso;
        iso.regime = Regime::Isotropic;
        iso.alpha = iso.beta = iso.gamma = 3;
        iso.c1h = iso.c2h = iso.cv = 2.5; iso.rho = 0.3; iso.n = n;
        NoiseTable table = build_noise_table(iso);
        const double factor = 4 * zeta_shell(n, 3.0, ZetaKind::Solid) / (3 * 2.5 * 2.5);
        for (int trial = 0; trial < 3; ++trial) {
            SpectralField f = random_divfree_field(3, rng);
            CHECK(cross_norm_sum(table, f)
                  == doctest::Approx(factor * f.l2_sq()).epsilon(1e-10));
        }
        // Zero field maps to zero.
        SpectralField zero;
        zero.K_max = 3;
        CHECK(cross_norm_sum(table, zero) == 0.0);
    }

    // General regimes obey the shell bound
    //   sum ||sigma x F||^2 <= (zeta_H(n,alpha) n^{2-alpha} / c1h^2
    //                          + zeta_H(n,beta) n^{2-beta} / c2h^2
    //                          + 2 zeta_s(n,gamma) n^{3-gamma} / cv^2) ||F||^2.
    for (int n : {1, 2}) {
        RegimeParams h;
        h.regime = Regime::Helical;
        h.alpha = 2; h.beta = 4; h.gamma = 6;
        h.c1h = 3; h.c2h = 1; h.cv = 3; h.rho = 1; h.n = n;
        NoiseTable table = build_noise_table(h);
        const double cap =
            zeta_shell(n, 2.0, ZetaKind::Horizontal) * std::pow(n, 0.0) / 9.0
            + zeta_shell(n, 4.0, ZetaKind::Horizontal) * std::pow(n, -2.0) / 1.0
            + 2 * zeta_shell(n, 6.0, ZetaKind::Solid) * std::pow(n, -3.0) / 9.0;
        for (int trial = 0; trial < 50; ++trial) {
            SpectralField f = random_divfree_field(3, rng);
            CHECK(cross_norm_sum(table, f) <= cap * f.l2_sq() * (1 + 1e-12));
        }
    }
}
