// Path simulation of the stopping policies and an independent lattice
// backward-induction oracle. Randomness comes from a Philox4x32-10
// counter-based generator keyed by (seed, path, step), so estimates are
// bit-reproducible and extending the path count leaves existing paths
// unchanged.

#ifndef PARSEARCH_MONTE_CARLO_HPP
#define PARSEARCH_MONTE_CARLO_HPP

#include <array>
#include <cstdint>
#include <span>

#include "parsearch/solver.hpp"

namespace parsearch {

// One 128-bit Philox4x32-10 block.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter_hi,
                                        std::uint64_t counter_lo);

// Two standard normals from the block keyed by (seed, path, step, slot),
// via Box-Muller.
std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                  std::uint32_t slot);

struct SimEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;     // sample std / sqrt(paths)
    double mean_stop_time = 0.0;
    long paths = 0;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double forced_stop_fraction = 0.0;  // paths force-stopped at t_cap
    bool bias_warning = false;          // forced fraction above 1%
};

// Euler simulation of the controlled diffusion under the given policy:
// PARALLEL steps every coordinate at cost c dt, SEARCH_i steps only
// coordinate i at cost cprime dt; the path stops on first entry into
// the STOP region (nearest-node lookup, clamped to the box) or at
// t_cap. Payoff is g at the stopped state minus the accrued cost.
SimEstimate simulate_stopping(std::span<const double> x0, const PolicyField& policy,
                              const Cost& cost, double dt, long paths, std::uint64_t seed,
                              double t_cap);

// Parallel-mode convenience: stop on the contact mask.
SimEstimate simulate_stopping(std::span<const double> x0, const ContactMask& mask,
                              const Cost& cost, double dt, long paths, std::uint64_t seed,
                              double t_cap);

struct OracleResult {
    double value = 0.0;
    double snap_distance = 0.0;  // |x0 - lattice start|
    double horizon = 0.0;        // steps * h^2
    double window = 0.0;         // spatial truncation half-width used
};

// Backward induction for the lattice walk where every coordinate moves
// +-h independently each period at cost c h^2; terminal value g. The
// lattice is truncated to a window around the start (value g outside),
// wide enough by default that the truncation bias is negligible.
// Increasing in `steps` for a fixed window.
OracleResult finite_horizon_oracle(std::span<const double> x0, double c, double h, long steps,
                                   double window = 0.0);

}  // namespace parsearch

#endif
