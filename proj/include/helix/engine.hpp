// Dense-lattice production solver.
//
// Implements exactly the same exponential Euler-Maruyama step as
// simulate_path_reference (same Gaussian stream, same truncation accounting,
// same per-mode propagators) on a flat complex cube instead of ordered maps,
// so Monte-Carlo budgets of a few hundred paths run at interactive speed.
// Results agree with the reference solver up to floating-point summation
// order.
#pragma once

#include <cstdint>
#include <functional>

#include "helix/solver.hpp"

namespace helix {

// Optional callback receiving the full state at every kept record (t = 0,
// every record_every-th step, and the final time), in step order.
using FieldObserver = std::function<void(double t, const SpectralField& state)>;

PathResult simulate_path_engine(const SolverConfig& cfg, const SpectralField& b0,
                                uint64_t seed,
                                const FieldObserver* observer = nullptr);

}  // namespace helix
