// Reference (map-based) implementation of the exponential Euler step.
#include "helix/solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "helix/corrector.hpp"

namespace helix {

void validate_solver_config(const SolverConfig& cfg, const SpectralField& b0) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (!(cfg.T > 0.0)) throw std::invalid_argument("solver: T must be positive");
    if (cfg.T < cfg.dt)
        throw std::invalid_argument("solver: T must be >= dt (at least one step)");
    if (cfg.record_every < 0)
        throw std::invalid_argument("solver: record_every must be >= 0");
    int64_t max_sq = 0;
    for (const auto& [k, b] : b0.modes) max_sq = std::max(max_sq, k.norm_sq());
    int kb0 = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(max_sq))));
    int needed = kb0 + 2 * cfg.params.n;
    if (cfg.K_max < needed) {
        std::ostringstream os;
        os << "solver: K_max = " << cfg.K_max
           << " must be >= max |k(B0)| + 2n = " << needed;
        throw std::invalid_argument(os.str());
    }
}

uint64_t path_seed(uint64_t base_seed, uint64_t path_index) {
    uint64_t z = base_seed + 0x9e3779b97f4a7c15ULL * (path_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TrajectoryPoint observe(const SolverConfig& cfg, const SpectralField& state,
                        double t, double cumulative_loss) {
    TrajectoryPoint p;
    p.t = t;
    p.h_minus1_sq = state.sobolev_sq(-1.0);
    p.l2_sq = state.l2_sq();
    p.h_theta = state.sobolev_sq(cfg.theta_index);
    p.b_lambda = cfg.lambda != 0 ? b_lambda(state, cfg.lambda) : 0.0;
    p.div_residual = state.div_residual();
    p.trunc_loss = cumulative_loss;
    if (!std::isfinite(p.l2_sq))
        throw std::runtime_error("solver: non-finite state at t = " +
                                 std::to_string(t));
    return p;
}

SpectralField reference_step(const SolverConfig& cfg, const NoiseTable& table,
                             const DriftModel& model, const SpectralField& state,
                             const std::vector<BrownianIncrement>& inc,
                             StepLoss* loss) {
    // accumulate B + sum_e L_e B dW_e on the extended lattice
    SpectralField total = state;
    for (size_t i = 0; i < table.entries.size(); ++i) {
        const NoiseEntry& e = table.entries[i];
        CVec3 m = CVec3(e.frame.a1) * (e.theta1 * inc[i].dw1) +
                  CVec3(e.frame.a2) * (e.theta2 * inc[i].dw2);
        SpectralField contrib = lie_pair_fused(e.k, m, state);
        for (const auto& [h, b] : contrib.modes) total.modes[h] += b;
    }
    // truncate to the resolved ball, accounting the removed energy
    const int64_t cap = static_cast<int64_t>(cfg.K_max) * cfg.K_max;
    SpectralField kept;
    kept.K_max = cfg.K_max;
    kept.divergence_free = state.divergence_free;
    for (const auto& [h, b] : total.modes) {
        if (h.norm_sq() <= cap) {
            kept.modes[h] = b;
        } else if (loss != nullptr) {
            double e2 = 2.0 * b.norm_sq();
            loss->l2 += e2;
            loss->hm1 += e2 / static_cast<double>(h.norm_sq());
        }
    }
    // exact drift propagator
    for (auto& [h, b] : kept.modes) b = mode_propagator(model, h, cfg.dt).apply(b);
    return kept;
}

PathResult simulate_path_reference(const SolverConfig& cfg,
                                   const SpectralField& b0, uint64_t seed) {
    validate_solver_config(cfg, b0);
    NoiseTable table = build_noise_table(cfg.params);
    DriftModel model = spde_mean_model(table);
    GaussianSource gauss(seed);

    const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    PathResult out;
    SpectralField state = b0;
    state.K_max = cfg.K_max;
    out.records.push_back(observe(cfg, state, 0.0, 0.0));
    StepLoss loss;
    for (int s = 1; s <= steps; ++s) {
        auto inc = sample_increments(table, cfg.dt, gauss);
        state = reference_step(cfg, table, model, state, inc, &loss);
        bool record = cfg.record_every > 0 && s % cfg.record_every == 0;
        if (record || s == steps)
            out.records.push_back(observe(cfg, state, s * cfg.dt, loss.l2));
    }
    out.final_state = state;
    out.trunc_loss_l2 = loss.l2;
    out.trunc_loss_hm1 = loss.hm1;
    return out;
}

}  // namespace helix
