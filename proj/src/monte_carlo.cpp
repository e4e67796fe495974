#include "parsearch/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace parsearch {

namespace {

constexpr double kTwoPi = 6.2831853071795864769;

inline void philox_round(std::uint32_t& c0, std::uint32_t& c1, std::uint32_t& c2,
                         std::uint32_t& c3, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ull * c0;
    const std::uint64_t p1 = 0xCD9E8D57ull * c2;
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
}

// Deterministic pairwise reduction; independent of the one-pass order
// effects that a running sum would have.
double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double acc = 0.0;
        for (double x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter_hi,
                                        std::uint64_t counter_lo) {
    std::uint32_t c0 = static_cast<std::uint32_t>(counter_lo);
    std::uint32_t c1 = static_cast<std::uint32_t>(counter_lo >> 32);
    std::uint32_t c2 = static_cast<std::uint32_t>(counter_hi);
    std::uint32_t c3 = static_cast<std::uint32_t>(counter_hi >> 32);
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    for (int round = 0; round < 10; ++round) {
        philox_round(c0, c1, c2, c3, k0, k1);
        k0 += 0x9E3779B9u;
        k1 += 0xBB67AE85u;
    }
    return {c0, c1, c2, c3};
}

std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t path, std::uint64_t step,
                                  std::uint32_t slot) {
    const std::uint64_t hi = (static_cast<std::uint64_t>(slot) << 32) | (path >> 32);
    const auto b = philox4x32(seed, hi, (path << 32) | (step & 0xFFFFFFFFull));
    // uniforms in (0, 1]
    const double u1 =
        (static_cast<double>((static_cast<std::uint64_t>(b[0]) << 32) | b[1]) + 1.0) * 0x1p-64;
    const double u2 =
        (static_cast<double>((static_cast<std::uint64_t>(b[2]) << 32) | b[3]) + 1.0) * 0x1p-64;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

SimEstimate simulate_stopping(std::span<const double> x0, const PolicyField& policy,
                              const Cost& cost, double dt, long paths, std::uint64_t seed,
                              double t_cap) {
    const GridSpec& grid = policy.grid;
    const int d = grid.dimension();
    if (static_cast<int>(x0.size()) != d) {
        throw std::invalid_argument("simulate_stopping: start point dimension mismatch");
    }
    if (!grid.contains(x0)) {
        throw std::invalid_argument("simulate_stopping: start point outside the grid");
    }
    if (!(dt > 0.0) || !(t_cap > 0.0) || paths < 1) {
        throw std::invalid_argument("simulate_stopping: need dt > 0, t_cap > 0, paths >= 1");
    }
    bool needs_cp = false;
    for (std::int8_t a : policy.actions) {
        if (a >= 2) { needs_cp = true; break; }
    }
    validate_cost(cost, needs_cp);

    const double sqrt_dt = std::sqrt(dt);
    const long max_steps = static_cast<long>(std::ceil(t_cap / dt));

    std::vector<double> payoffs(paths);
    std::vector<double> stop_times(paths);
    long forced = 0;
    std::vector<double> x(d);
    for (long p = 0; p < paths; ++p) {
        for (int a = 0; a < d; ++a) x[a] = x0[a];
        double accrued = 0.0;
        long step = 0;
        bool stopped = false;
        while (step < max_steps) {
            const std::int8_t action = policy[grid.nearest_node(x)];
            if (action == PolicyField::kStop) {
                stopped = true;
                break;
            }
            if (action == PolicyField::kParallel) {
                for (int a = 0; a < d; a += 2) {
                    const auto z = normal_pair(seed, static_cast<std::uint64_t>(p),
                                               static_cast<std::uint64_t>(step),
                                               static_cast<std::uint32_t>(a / 2));
                    x[a] += sqrt_dt * z[0];
                    if (a + 1 < d) x[a + 1] += sqrt_dt * z[1];
                }
                accrued += cost.c * dt;
            } else {
                const int axis = PolicyField::search_axis(action);
                const auto z = normal_pair(seed, static_cast<std::uint64_t>(p),
                                           static_cast<std::uint64_t>(step), 0);
                x[axis] += sqrt_dt * z[0];
                accrued += cost.cprime * dt;
            }
            ++step;
        }
        if (!stopped) ++forced;
        payoffs[p] = obstacle_at(x) - accrued;
        stop_times[p] = step * dt;
    }

    SimEstimate est;
    est.paths = paths;
    est.seed = seed;
    est.dt = dt;
    est.mean = pairwise_sum(payoffs) / static_cast<double>(paths);
    est.mean_stop_time = pairwise_sum(stop_times) / static_cast<double>(paths);
    if (paths > 1) {
        std::vector<double> sq(paths);
        for (long p = 0; p < paths; ++p) {
            const double dev = payoffs[p] - est.mean;
            sq[p] = dev * dev;
        }
        const double var = pairwise_sum(sq) / static_cast<double>(paths - 1);
        est.stderr_ = std::sqrt(var / static_cast<double>(paths));
    }
    est.forced_stop_fraction = static_cast<double>(forced) / static_cast<double>(paths);
    est.bias_warning = est.forced_stop_fraction > 0.01;
    return est;
}

SimEstimate simulate_stopping(std::span<const double> x0, const ContactMask& mask,
                              const Cost& cost, double dt, long paths, std::uint64_t seed,
                              double t_cap) {
    PolicyField policy(mask.grid, PolicyField::kParallel);
    for (std::size_t n = 0; n < mask.grid.node_count(); ++n) {
        if (mask[n]) policy.actions[n] = PolicyField::kStop;
    }
    return simulate_stopping(x0, policy, cost, dt, paths, seed, t_cap);
}

OracleResult finite_horizon_oracle(std::span<const double> x0, double c, double h, long steps,
                                   double window) {
    validate_cost(Cost{c, 0.0});
    if (!(h > 0.0) || steps < 0) {
        throw std::invalid_argument("finite_horizon_oracle: need h > 0 and steps >= 0");
    }
    const int d = static_cast<int>(x0.size());
    if (d < 1) throw std::invalid_argument("finite_horizon_oracle: empty start point");

    const double horizon = static_cast<double>(steps) * h * h;
    if (window <= 0.0) {
        window = std::max(2.0, 1.0 / (2.0 * c) + 2.5 * std::sqrt(std::max(horizon, h * h)));
    }
    const long m = static_cast<long>(std::ceil(window / h));

    // snapped start and lattice box
    std::vector<double> start(d);
    double snap2 = 0.0;
    std::vector<int> counts(d);
    std::size_t nodes = 1;
    for (int a = 0; a < d; ++a) {
        start[a] = std::round(x0[a] / h) * h;
        snap2 += (start[a] - x0[a]) * (start[a] - x0[a]);
        counts[a] = static_cast<int>(2 * m + 1);
        if (nodes > 30'000'000u / static_cast<std::size_t>(counts[a])) {
            throw std::invalid_argument(
                "finite_horizon_oracle: lattice of " + std::to_string(2 * m + 1) + "^" +
                std::to_string(d) + " nodes exceeds the memory budget; increase h or reduce"
                " steps (the window scales with sqrt(steps) * h)");
        }
        nodes *= static_cast<std::size_t>(counts[a]);
    }

    std::vector<std::size_t> strides(d);
    std::size_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
        strides[a] = s;
        s *= static_cast<std::size_t>(counts[a]);
    }

    std::vector<double> term(nodes);
    std::vector<double> x(d);
    std::vector<int> mi(d);
    for (std::size_t n = 0; n < nodes; ++n) {
        std::size_t rem = n;
        for (int a = 0; a < d; ++a) {
            mi[a] = static_cast<int>(rem / strides[a]);
            rem %= strides[a];
            x[a] = start[a] + (mi[a] - m) * h;
        }
        term[n] = obstacle_at(x);
    }
    const std::vector<double> g = term;

    std::vector<std::uint8_t> edge(nodes, 0);
    for (std::size_t n = 0; n < nodes; ++n) {
        std::size_t rem = n;
        for (int a = 0; a < d; ++a) {
            const int i = static_cast<int>(rem / strides[a]);
            rem %= strides[a];
            if (i == 0 || i == counts[a] - 1) { edge[n] = 1; break; }
        }
    }
    const int corners = 1 << d;
    std::vector<long> offsets(corners);
    for (int cnr = 0; cnr < corners; ++cnr) {
        long off = 0;
        for (int a = 0; a < d; ++a) {
            off += ((cnr >> a) & 1) ? static_cast<long>(strides[a])
                                    : -static_cast<long>(strides[a]);
        }
        offsets[cnr] = off;
    }

    std::vector<double> v = term;
    std::vector<double> next(nodes);
    const double period_cost = c * h * h;
    const double inv_corners = 1.0 / corners;
    for (long k = 0; k < steps; ++k) {
        for (std::size_t n = 0; n < nodes; ++n) {
            if (edge[n]) {
                next[n] = g[n];  // absorbing window edge
                continue;
            }
            double acc = 0.0;
            for (int cnr = 0; cnr < corners; ++cnr) {
                acc += v[static_cast<std::size_t>(static_cast<long>(n) + offsets[cnr])];
            }
            next[n] = std::max(g[n], acc * inv_corners - period_cost);
        }
        v.swap(next);
    }

    OracleResult res;
    std::size_t center = 0;
    for (int a = 0; a < d; ++a) center += static_cast<std::size_t>(m) * strides[a];
    res.value = v[center];
    res.snap_distance = std::sqrt(snap2);
    res.horizon = horizon;
    res.window = m * h;
    return res;
}

}  // namespace parsearch
