// Flat-cube implementation of the exponential Euler step.
//
// State lives on [-K_ext, K_ext]^3 with K_ext = K_max + 2n, split into six
// double arrays (re/im per component), x fastest.  The transport pass is
// target-centric: noise entry branches are grouped by their (k2, k3) shift,
// and for every half-lattice target row the contributions of all groups are
// accumulated into an L1-resident row buffer,
//   buffer[t] += i [ (m.s) b_s - (k.b_s) m ],   s = t - k,
// so each source row is loaded once per group instead of once per entry and
// the cubes are streamed through memory once per step.  Target rows are
// processed in blocks of up to kRowBlock consecutive t2 so the per-branch
// setup is amortized across rows.  After the sweep each buffer row is
// truncated to the resolved ball (accounting the removed energy), and cached
// per-mode drift propagators plus a conjugate mirror finish the step.
// Semantics match simulate_path_reference up to floating-point summation
// order; both consume the Gaussian stream identically.
#include "helix/engine.hpp"

#include <array>
#include <cmath>
#include <cstring>
#include <map>
#include <vector>

#include "helix/corrector.hpp"
#include "helix/meanfield.hpp"

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

namespace helix {

namespace {

// One conjugate branch of one noise entry, attached to a (k2, k3) group;
// amp indexes the per-step fused amplitude table.
struct BranchRef {
    int k1;
    uint32_t amp;
};

// Number of consecutive target rows (t2 values at fixed t3) gathered per
// kernel call.  The block buffer must stay L1-resident: kRowBlock * 6 row
// planes of L doubles.
constexpr int kRowBlock = 4;

// One valid (source row, buffer set) pairing inside a row block.
struct RowSlot {
    size_t soff;  // cube offset of the source row center (x = 0)
    int buf;      // buffer set index within the block
    int xm;       // source row half-width: |x| <= xm
    int s2;       // source row y coordinate (s3 is shared per call)
    bool axis;    // target row is t2 = t3 = 0: keep only t1 >= 1
};

// Transport contributions of one (k2, k3) group onto a block of target rows.
// Restrict parameters make the cube and buffer streams provably independent.
// amp holds six doubles per branch (re then im of the three components of
// m).  Spans are short (tens of lanes), so the AVX-512 path is written by
// hand with masked tails: the compiler's auto-vectorized version spends a
// large share of each span in peeling and scalar epilogue.
__attribute__((noinline)) void gather_group(
    const double* __restrict cr0, const double* __restrict cr1,
    const double* __restrict cr2, const double* __restrict ci0,
    const double* __restrict ci1, const double* __restrict ci2,
    double* __restrict buf, int lrow, const RowSlot* rows, int nrows,
    const BranchRef* refs, int nrefs, const double* amp, int s3, double k2,
    double k3, int kext) {
#if defined(__AVX512F__)
    const __m512d vk2 = _mm512_set1_pd(k2);
    const __m512d vk3 = _mm512_set1_pd(k3);
    const __m512d lane = _mm512_setr_pd(0, 1, 2, 3, 4, 5, 6, 7);
#endif
    for (int r = 0; r < nrefs; ++r) {
        const double* a = amp + 6 * static_cast<size_t>(refs[r].amp);
        const double k1 = refs[r].k1;
        const int off = refs[r].k1 + kext;  // buffer index = x + off
#if defined(__AVX512F__)
        const __m512d mr0 = _mm512_set1_pd(a[0]);
        const __m512d mr1 = _mm512_set1_pd(a[1]);
        const __m512d mr2 = _mm512_set1_pd(a[2]);
        const __m512d mi0 = _mm512_set1_pd(a[3]);
        const __m512d mi1 = _mm512_set1_pd(a[4]);
        const __m512d mi2 = _mm512_set1_pd(a[5]);
        const __m512d vk1 = _mm512_set1_pd(k1);
#else
        const double mr0 = a[0], mr1 = a[1], mr2 = a[2];
        const double mi0 = a[3], mi1 = a[4], mi2 = a[5];
#endif
        for (int q = 0; q < nrows; ++q) {
            const RowSlot& row = rows[q];
            const double* __restrict sr0 = cr0 + row.soff;
            const double* __restrict sr1 = cr1 + row.soff;
            const double* __restrict sr2 = cr2 + row.soff;
            const double* __restrict si0 = ci0 + row.soff;
            const double* __restrict si1 = ci1 + row.soff;
            const double* __restrict si2 = ci2 + row.soff;
            double* __restrict base =
                buf + static_cast<size_t>(row.buf) * 6 * lrow;
            double* __restrict b0r = base;
            double* __restrict b1r = base + lrow;
            double* __restrict b2r = base + 2 * lrow;
            double* __restrict b0i = base + 3 * lrow;
            double* __restrict b1i = base + 4 * lrow;
            double* __restrict b2i = base + 5 * lrow;
            const int xm = row.xm;
            int x0 = -xm;
            if (row.axis) x0 = std::max(x0, 1 - refs[r].k1);
#if defined(__AVX512F__)
            const __m512d cyz_re = _mm512_set1_pd(a[1] * row.s2 + a[2] * s3);
            const __m512d cyz_im = _mm512_set1_pd(a[4] * row.s2 + a[5] * s3);
            __m512d xv = _mm512_add_pd(_mm512_set1_pd(x0), lane);
            const __m512d eight = _mm512_set1_pd(8.0);
            // The contribution i w with w = (m.s) b - (k.b) m is folded
            // directly into the buffer update as four-deep FMA chains per
            // target lane:
            //   re -= mh_re bi + mh_im br - kb_re mi - kb_im mr
            //   im += mh_re br - mh_im bi - kb_re mr + kb_im mi
            // which is the FP-throughput floor for this operation.
            // Masked-off lanes load as zero and are never stored back.
            auto body = [&](int x, __m512d xw, __mmask8 mask)
                __attribute__((always_inline)) {
                const __m512d br0 = _mm512_maskz_loadu_pd(mask, sr0 + x);
                const __m512d br1 = _mm512_maskz_loadu_pd(mask, sr1 + x);
                const __m512d br2 = _mm512_maskz_loadu_pd(mask, sr2 + x);
                const __m512d bi0 = _mm512_maskz_loadu_pd(mask, si0 + x);
                const __m512d bi1 = _mm512_maskz_loadu_pd(mask, si1 + x);
                const __m512d bi2 = _mm512_maskz_loadu_pd(mask, si2 + x);
                const __m512d mh_re = _mm512_fmadd_pd(mr0, xw, cyz_re);
                const __m512d mh_im = _mm512_fmadd_pd(mi0, xw, cyz_im);
                const __m512d kb_re = _mm512_fmadd_pd(
                    vk1, br0,
                    _mm512_fmadd_pd(vk2, br1, _mm512_mul_pd(vk3, br2)));
                const __m512d kb_im = _mm512_fmadd_pd(
                    vk1, bi0,
                    _mm512_fmadd_pd(vk2, bi1, _mm512_mul_pd(vk3, bi2)));
                __m512d t;
                t = _mm512_maskz_loadu_pd(mask, b0r + x + off);
                t = _mm512_fmadd_pd(kb_im, mr0, t);
                t = _mm512_fmadd_pd(kb_re, mi0, t);
                t = _mm512_fnmadd_pd(mh_im, br0, t);
                t = _mm512_fnmadd_pd(mh_re, bi0, t);
                _mm512_mask_storeu_pd(b0r + x + off, mask, t);
                t = _mm512_maskz_loadu_pd(mask, b0i + x + off);
                t = _mm512_fmadd_pd(kb_im, mi0, t);
                t = _mm512_fnmadd_pd(kb_re, mr0, t);
                t = _mm512_fnmadd_pd(mh_im, bi0, t);
                t = _mm512_fmadd_pd(mh_re, br0, t);
                _mm512_mask_storeu_pd(b0i + x + off, mask, t);
                t = _mm512_maskz_loadu_pd(mask, b1r + x + off);
                t = _mm512_fmadd_pd(kb_im, mr1, t);
                t = _mm512_fmadd_pd(kb_re, mi1, t);
                t = _mm512_fnmadd_pd(mh_im, br1, t);
                t = _mm512_fnmadd_pd(mh_re, bi1, t);
                _mm512_mask_storeu_pd(b1r + x + off, mask, t);
                t = _mm512_maskz_loadu_pd(mask, b1i + x + off);
                t = _mm512_fmadd_pd(kb_im, mi1, t);
                t = _mm512_fnmadd_pd(kb_re, mr1, t);
                t = _mm512_fnmadd_pd(mh_im, bi1, t);
                t = _mm512_fmadd_pd(mh_re, br1, t);
                _mm512_mask_storeu_pd(b1i + x + off, mask, t);
                t = _mm512_maskz_loadu_pd(mask, b2r + x + off);
                t = _mm512_fmadd_pd(kb_im, mr2, t);
                t = _mm512_fmadd_pd(kb_re, mi2, t);
                t = _mm512_fnmadd_pd(mh_im, br2, t);
                t = _mm512_fnmadd_pd(mh_re, bi2, t);
                _mm512_mask_storeu_pd(b2r + x + off, mask, t);
                t = _mm512_maskz_loadu_pd(mask, b2i + x + off);
                t = _mm512_fmadd_pd(kb_im, mi2, t);
                t = _mm512_fnmadd_pd(kb_re, mr2, t);
                t = _mm512_fnmadd_pd(mh_im, bi2, t);
                t = _mm512_fmadd_pd(mh_re, br2, t);
                _mm512_mask_storeu_pd(b2i + x + off, mask, t);
            };
            int x = x0;
            for (; x + 7 <= xm; x += 8, xv = _mm512_add_pd(xv, eight))
                body(x, xv, static_cast<__mmask8>(0xff));
            if (x <= xm)
                body(x, xv,
                     static_cast<__mmask8>((1u << (xm - x + 1)) - 1u));
#else
            const double cyz_re = mr1 * row.s2 + mr2 * s3;
            const double cyz_im = mi1 * row.s2 + mi2 * s3;
            for (int x = x0; x <= xm; ++x) {
                const double br0 = sr0[x], br1 = sr1[x], br2 = sr2[x];
                const double bi0 = si0[x], bi1 = si1[x], bi2 = si2[x];
                const double mh_re = mr0 * x + cyz_re;
                const double mh_im = mi0 * x + cyz_im;
                const double kb_re = k1 * br0 + k2 * br1 + k3 * br2;
                const double kb_im = k1 * bi0 + k2 * bi1 + k3 * bi2;
                // w = (m.s) b - (k.b) m; contribution i w
                const double wr0 =
                    mh_re * br0 - mh_im * bi0 - (kb_re * mr0 - kb_im * mi0);
                const double wi0 =
                    mh_re * bi0 + mh_im * br0 - (kb_re * mi0 + kb_im * mr0);
                const double wr1 =
                    mh_re * br1 - mh_im * bi1 - (kb_re * mr1 - kb_im * mi1);
                const double wi1 =
                    mh_re * bi1 + mh_im * br1 - (kb_re * mi1 + kb_im * mr1);
                const double wr2 =
                    mh_re * br2 - mh_im * bi2 - (kb_re * mr2 - kb_im * mi2);
                const double wi2 =
                    mh_re * bi2 + mh_im * br2 - (kb_re * mi2 + kb_im * mr2);
                b0r[x + off] -= wi0;
                b0i[x + off] += wr0;
                b1r[x + off] -= wi1;
                b1i[x + off] += wr1;
                b2r[x + off] -= wi2;
                b2i[x + off] += wr2;
            }
#endif
        }
    }
}

class DenseEngine {
  public:
    DenseEngine(const SolverConfig& cfg, const SpectralField& b0, uint64_t seed)
        : cfg_(cfg),
          table_(build_noise_table(cfg.params)),
          model_(spde_mean_model(table_)),
          gauss_(seed),
          K_(cfg.K_max),
          Kext_(cfg.K_max + 2 * cfg.params.n),
          L_(2 * Kext_ + 1) {
        const size_t total = static_cast<size_t>(L_) * L_ * L_;
        for (int c = 0; c < 3; ++c) {
            sre_[c].assign(total, 0.0);
            sim_[c].assign(total, 0.0);
            dre_[c].assign(total, 0.0);
            dim_[c].assign(total, 0.0);
        }
        buf_.assign(static_cast<size_t>(kRowBlock) * 6 * L_, 0.0);
        amp_.assign(2 * table_.entries.size(), {});
        build_lists();
        load(b0);
    }

    PathResult run(const FieldObserver* obs) {
        const int steps = static_cast<int>(std::llround(cfg_.T / cfg_.dt));
        PathResult out;
        {
            SpectralField cur = extract();
            out.records.push_back(observe(cfg_, cur, 0.0, 0.0));
            if (obs && *obs) (*obs)(0.0, cur);
        }
        StepLoss loss;
        for (int s = 1; s <= steps; ++s) {
            step(loss);
            bool record = cfg_.record_every > 0 && s % cfg_.record_every == 0;
            if (record || s == steps) {
                SpectralField cur = extract();
                out.records.push_back(observe(cfg_, cur, s * cfg_.dt, loss.l2));
                if (obs && *obs) (*obs)(s * cfg_.dt, cur);
            }
        }
        out.final_state = extract();
        out.trunc_loss_l2 = loss.l2;
        out.trunc_loss_hm1 = loss.hm1;
        return out;
    }

  private:
    struct Group {
        int dk2, dk3;
        std::vector<BranchRef> refs;
    };
    struct BallMode {
        WaveVector k;
        size_t ip, im;  // cube offsets of k and -k
    };
    // Fused amplitude of a branch: re/im of the three components of m.
    using Amp = std::array<double, 6>;

    size_t idx(int x, int y, int z) const {
        return (static_cast<size_t>(z + Kext_) * L_ + (y + Kext_)) * L_ +
               (x + Kext_);
    }

    // Largest |x| with x^2 <= cap - yz, or -1 when the row misses the ball.
    static int row_xmax(int64_t cap, int64_t yz) {
        if (yz > cap) return -1;
        int xm = static_cast<int>(std::sqrt(static_cast<double>(cap - yz)));
        while (static_cast<int64_t>(xm + 1) * (xm + 1) + yz <= cap) ++xm;
        while (static_cast<int64_t>(xm) * xm + yz > cap) --xm;
        return xm;
    }

    void build_lists() {
        const int64_t cap = static_cast<int64_t>(K_) * K_;
        src_xmax_.assign(static_cast<size_t>(2 * K_ + 1) * (2 * K_ + 1), -1);
        for (int y = -K_; y <= K_; ++y)
            for (int z = -K_; z <= K_; ++z) {
                int64_t yz = static_cast<int64_t>(y) * y +
                             static_cast<int64_t>(z) * z;
                src_xmax_[static_cast<size_t>(y + K_) * (2 * K_ + 1) +
                          (z + K_)] = row_xmax(cap, yz);
            }
        // Group the two conjugate branches of every entry by (k2, k3).
        std::map<std::pair<int, int>, std::vector<BranchRef>> grouped;
        for (size_t i = 0; i < table_.entries.size(); ++i) {
            const WaveVector& k = table_.entries[i].k;
            grouped[{k.k2, k.k3}].push_back(
                {k.k1, static_cast<uint32_t>(2 * i)});
            grouped[{-k.k2, -k.k3}].push_back(
                {-k.k1, static_cast<uint32_t>(2 * i + 1)});
        }
        for (auto& [key, refs] : grouped)
            groups_.push_back({key.first, key.second, std::move(refs)});
        // x outermost: half-lattice modes come out sorted by (k1, k2, k3),
        // matching the canonical map order, so extract() can append.
        for (int x = -K_; x <= K_; ++x)
            for (int y = -K_; y <= K_; ++y)
                for (int z = -K_; z <= K_; ++z) {
                    WaveVector k{x, y, z};
                    if (k.norm_sq() > cap || !in_gamma_plus(k)) continue;
                    ball_.push_back({k, idx(x, y, z), idx(-x, -y, -z)});
                    prop_.push_back(mode_propagator(model_, k, cfg_.dt));
                }
    }

    void load(const SpectralField& b0) {
        for (const auto& [k, b] : b0.modes) {
            size_t ip = idx(k.k1, k.k2, k.k3);
            size_t im = idx(-k.k1, -k.k2, -k.k3);
            const Complex comp[3] = {b.x, b.y, b.z};
            for (int c = 0; c < 3; ++c) {
                sre_[c][ip] = comp[c].real();
                sim_[c][ip] = comp[c].imag();
                sre_[c][im] = comp[c].real();
                sim_[c][im] = -comp[c].imag();
            }
        }
    }

    SpectralField extract() const {
        SpectralField f;
        f.K_max = K_;
        f.divergence_free = true;
        for (const BallMode& bm : ball_) {
            CVec3 v{Complex{sre_[0][bm.ip], sim_[0][bm.ip]},
                    Complex{sre_[1][bm.ip], sim_[1][bm.ip]},
                    Complex{sre_[2][bm.ip], sim_[2][bm.ip]}};
            f.modes.emplace_hint(f.modes.end(), bm.k, v);
        }
        return f;
    }

    // Accumulate every contribution landing on the target rows
    // (T2 + q, t3), q < nb with valid[q], into the block buffer.  Sources
    // are the rows (t2 - dk2, t3 - dk3) of the resolved ball.
    void gather_block(int T2, int nb, int t3, const bool* valid) {
        const double* amp = amp_[0].data();
        for (const Group& g : groups_) {
            const int s3 = t3 - g.dk3;
            if (s3 < -K_ || s3 > K_) continue;
            RowSlot rows[kRowBlock];
            int n = 0;
            for (int q = 0; q < nb; ++q) {
                if (!valid[q]) continue;
                const int s2 = T2 + q - g.dk2;
                if (s2 < -K_ || s2 > K_) continue;
                const int xm =
                    src_xmax_[static_cast<size_t>(s2 + K_) * (2 * K_ + 1) +
                              (s3 + K_)];
                if (xm < 0) continue;
                rows[n++] = {idx(0, s2, s3), q, xm, s2,
                             t3 == 0 && T2 + q == 0};
            }
            if (n == 0) continue;
            gather_group(sre_[0].data(), sre_[1].data(), sre_[2].data(),
                         sim_[0].data(), sim_[1].data(), sim_[2].data(),
                         buf_.data(), L_, rows, n, g.refs.data(),
                         static_cast<int>(g.refs.size()), amp, s3, g.dk2,
                         g.dk3, Kext_);
        }
    }

    void step(StepLoss& loss) {
        auto inc = sample_increments(table_, cfg_.dt, gauss_);
        for (size_t i = 0; i < table_.entries.size(); ++i) {
            const NoiseEntry& e = table_.entries[i];
            CVec3 m = CVec3(e.frame.a1) * (e.theta1 * inc[i].dw1) +
                      CVec3(e.frame.a2) * (e.theta2 * inc[i].dw2);
            amp_[2 * i] = {m.x.real(), m.y.real(), m.z.real(),
                           m.x.imag(), m.y.imag(), m.z.imag()};
            amp_[2 * i + 1] = {m.x.real(), m.y.real(), m.z.real(),
                               -m.x.imag(), -m.y.imag(), -m.z.imag()};
        }
        const int64_t cap = static_cast<int64_t>(K_) * K_;
        const int64_t ecap = static_cast<int64_t>(Kext_) * Kext_;
        const size_t row_bytes = static_cast<size_t>(L_) * sizeof(double);
        // Sweep the half-lattice target rows of the extended disc in blocks
        // of up to kRowBlock consecutive t2.
        for (int t3 = 0; t3 <= Kext_; ++t3) {
            const int t2lo = t3 == 0 ? 0 : -Kext_;
            for (int T2 = t2lo; T2 <= Kext_; T2 += kRowBlock) {
                const int nb = std::min(kRowBlock, Kext_ - T2 + 1);
                bool valid[kRowBlock] = {};
                bool any = false;
                for (int q = 0; q < nb; ++q) {
                    const int t2 = T2 + q;
                    const int64_t yz = static_cast<int64_t>(t2) * t2 +
                                       static_cast<int64_t>(t3) * t3;
                    if (yz > ecap) continue;
                    valid[q] = true;
                    any = true;
                    // buffer set q = current state row (the B term of
                    // B + sum L B dW)
                    const size_t rb = idx(0, t2, t3) - Kext_;
                    double* base =
                        buf_.data() + static_cast<size_t>(q) * 6 * L_;
                    for (int c = 0; c < 3; ++c) {
                        std::memcpy(base + c * L_, sre_[c].data() + rb,
                                    row_bytes);
                        std::memcpy(base + (3 + c) * L_, sim_[c].data() + rb,
                                    row_bytes);
                    }
                }
                if (!any) continue;
                gather_block(T2, nb, t3, valid);
                for (int q = 0; q < nb; ++q) {
                    if (!valid[q]) continue;
                    const int t2 = T2 + q;
                    const int64_t yz = static_cast<int64_t>(t2) * t2 +
                                       static_cast<int64_t>(t3) * t3;
                    double* base =
                        buf_.data() + static_cast<size_t>(q) * 6 * L_;
                    // truncate to the resolved ball, accounting removed
                    // energy
                    const int keep = row_xmax(cap, yz);
                    const int reach = row_xmax(ecap, yz);
                    for (int t1 = -reach; t1 <= reach; ++t1) {
                        if (std::abs(t1) <= keep) continue;
                        const int64_t nsq =
                            yz + static_cast<int64_t>(t1) * t1;
                        double e2 = 0.0;
                        for (int c = 0; c < 6; ++c) {
                            double& v = base[c * L_ + (t1 + Kext_)];
                            e2 += v * v;
                            v = 0.0;
                        }
                        if (e2 != 0.0) {
                            e2 *= 2.0;
                            loss.l2 += e2;
                            loss.hm1 += e2 / static_cast<double>(nsq);
                        }
                    }
                    const size_t rb = idx(0, t2, t3) - Kext_;
                    for (int c = 0; c < 3; ++c) {
                        std::memcpy(dre_[c].data() + rb, base + c * L_,
                                    row_bytes);
                        std::memcpy(dim_[c].data() + rb, base + (3 + c) * L_,
                                    row_bytes);
                    }
                }
            }
        }
        // exact drift propagators, mirrored onto the conjugate half
        for (size_t i = 0; i < ball_.size(); ++i) {
            const BallMode& bm = ball_[i];
            CVec3 b{Complex{dre_[0][bm.ip], dim_[0][bm.ip]},
                    Complex{dre_[1][bm.ip], dim_[1][bm.ip]},
                    Complex{dre_[2][bm.ip], dim_[2][bm.ip]}};
            CVec3 nb = prop_[i].apply(b);
            const Complex comp[3] = {nb.x, nb.y, nb.z};
            for (int c = 0; c < 3; ++c) {
                dre_[c][bm.ip] = comp[c].real();
                dim_[c][bm.ip] = comp[c].imag();
                dre_[c][bm.im] = comp[c].real();
                dim_[c][bm.im] = -comp[c].imag();
            }
        }
        for (int c = 0; c < 3; ++c) {
            sre_[c].swap(dre_[c]);
            sim_[c].swap(dim_[c]);
        }
    }

    SolverConfig cfg_;
    NoiseTable table_;
    DriftModel model_;
    GaussianSource gauss_;
    int K_, Kext_, L_;
    std::vector<double> sre_[3], sim_[3], dre_[3], dim_[3];
    std::vector<double> buf_;
    std::vector<Amp> amp_;
    std::vector<int> src_xmax_;
    std::vector<Group> groups_;
    std::vector<BallMode> ball_;
    std::vector<CMat3> prop_;
};

}  // namespace

PathResult simulate_path_engine(const SolverConfig& cfg, const SpectralField& b0,
                                uint64_t seed, const FieldObserver* observer) {
    validate_solver_config(cfg, b0);
    DenseEngine engine(cfg, b0, seed);
    return engine.run(observer);
}

}  // namespace helix
