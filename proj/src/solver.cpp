#include "parsearch/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace parsearch {

namespace {

constexpr int kProbeSweeps = 40;       // Gauss-Seidel rate probe before picking omega
constexpr int kProbeWindow = 10;
constexpr double kOmegaMin = 1.05;
constexpr double kOmegaMax = 1.98;

// Scan interior nodes in lexicographic order (forward) or exact reverse.
// The last axis is contiguous, so rows are decoded once and the inner
// loop runs on consecutive flat indices.
template <typename F>
void interior_scan(const GridSpec& g, bool forward, F&& f) {
    const int d = g.dimension();
    const int inner_len = g.count(d - 1) - 2;
    std::size_t rows = 1;
    for (int a = 0; a < d - 1; ++a) rows *= static_cast<std::size_t>(g.count(a) - 2);
    for (std::size_t rr = 0; rr < rows; ++rr) {
        const std::size_t r = forward ? rr : rows - 1 - rr;
        std::size_t base = 1;
        std::size_t rem = r;
        for (int a = d - 2; a >= 0; --a) {
            const std::size_t span = static_cast<std::size_t>(g.count(a) - 2);
            base += (1 + rem % span) * g.stride(a);
            rem /= span;
        }
        if (forward) {
            std::size_t flat = base;
            for (int i = 0; i < inner_len; ++i, ++flat) f(flat);
        } else {
            std::size_t flat = base + static_cast<std::size_t>(inner_len) - 1;
            for (int i = 0; i < inner_len; ++i, --flat) f(flat);
        }
    }
}

struct Operators {
    int d;
    double h2;
    double c;        // parallel cost
    double cp;       // single-alternative cost
    std::size_t strides[8];

    Operators(const GridSpec& g, const Cost& cost) {
        d = g.dimension();
        h2 = g.spacing() * g.spacing();
        c = cost.c;
        cp = cost.cprime;
        for (int a = 0; a < d; ++a) strides[a] = g.stride(a);
    }

    // Local Gauss-Seidel solve of the parallel row at node n.
    double parallel_target(const double* u, std::size_t n) const {
        double sum = 0.0;
        for (int a = 0; a < d; ++a) sum += u[n - strides[a]] + u[n + strides[a]];
        return sum / (2.0 * d) - c * h2 / d;
    }

    double search_target(const double* u, std::size_t n, int axis) const {
        const std::size_t s = strides[axis];
        return 0.5 * (u[n - s] + u[n + s]) - cp * h2;
    }

    // Operator residuals -1/2 lap u + c and -1/2 d^2_ii u + cp.
    double parallel_residual(const double* u, std::size_t n) const {
        double sum = 0.0;
        for (int a = 0; a < d; ++a) sum += u[n - strides[a]] + u[n + strides[a]];
        return (2.0 * d * u[n] - sum) / (2.0 * h2) + c;
    }

    double search_residual(const double* u, std::size_t n, int axis) const {
        const std::size_t s = strides[axis];
        return (2.0 * u[n] - u[n - s] - u[n + s]) / (2.0 * h2) + cp;
    }
};

double projected_sweep_parallel(ScalarField& u, const ScalarField& g, const Operators& op,
                                double omega, bool forward) {
    double* uv = u.values.data();
    const double* gv = g.values.data();
    double delta = 0.0;
    interior_scan(u.grid, forward, [&](std::size_t n) {
        const double v = op.parallel_target(uv, n);
        double un = uv[n] + omega * (v - uv[n]);
        if (un < gv[n]) un = gv[n];
        const double ch = std::fabs(un - uv[n]);
        if (ch > delta) delta = ch;
        uv[n] = un;
    });
    return delta;
}

double projected_sweep_policy(ScalarField& u, const ScalarField& g, const PolicyField& pi,
                              const Operators& op, double omega, bool forward) {
    double* uv = u.values.data();
    const double* gv = g.values.data();
    const std::int8_t* av = pi.actions.data();
    double delta = 0.0;
    interior_scan(u.grid, forward, [&](std::size_t n) {
        const std::int8_t a = av[n];
        double un;
        if (a == PolicyField::kStop) {
            un = gv[n];
        } else {
            const double v = (a == PolicyField::kParallel)
                                 ? op.parallel_target(uv, n)
                                 : op.search_target(uv, n, PolicyField::search_axis(a));
            un = uv[n] + omega * (v - uv[n]);
            if (un < gv[n]) un = gv[n];
        }
        const double ch = std::fabs(un - uv[n]);
        if (ch > delta) delta = ch;
        uv[n] = un;
    });
    return delta;
}

// Howard improvement: pick the action whose local solve value is
// largest, preferring STOP, then PARALLEL, then the lowest axis. A node
// switches away from its current action only for a strict improvement
// beyond `switch_margin`, which keeps float-level ties from flickering
// between sweeps.
long improve_policy(const ScalarField& u, const ScalarField& g, SearchMode mode,
                    const Operators& op, PolicyField& pi, double switch_margin) {
    const double* uv = u.values.data();
    const double* gv = g.values.data();
    std::int8_t* av = pi.actions.data();
    long changed = 0;
    interior_scan(u.grid, true, [&](std::size_t n) {
        double best = -std::numeric_limits<double>::infinity();
        std::int8_t best_action = PolicyField::kParallel;
        if (mode != SearchMode::Sequential) {
            best = op.parallel_target(uv, n);
        }
        if (mode != SearchMode::Parallel) {
            for (int a = 0; a < op.d; ++a) {
                const double v = op.search_target(uv, n, a);
                if (v > best) {
                    best = v;
                    best_action = PolicyField::search(a);
                }
            }
        }
        std::int8_t next = (gv[n] >= best) ? PolicyField::kStop : best_action;
        if (next != av[n]) {
            const double v_next = std::max(gv[n], best);
            double v_cur;
            if (av[n] == PolicyField::kStop) {
                v_cur = gv[n];
            } else if (av[n] == PolicyField::kParallel) {
                v_cur = op.parallel_target(uv, n);
            } else {
                v_cur = op.search_target(uv, n, PolicyField::search_axis(av[n]));
            }
            if (v_next > v_cur + switch_margin) {
                av[n] = next;
                ++changed;
            }
        }
    });
    return changed;
}

std::string node_string(const GridSpec& grid, std::size_t n) {
    std::vector<double> x(grid.dimension());
    grid.node_point(n, x);
    std::string out = "(";
    for (int a = 0; a < grid.dimension(); ++a) {
        if (a) out += ", ";
        out += std::to_string(x[a]);
    }
    return out + ")";
}

double field_scale(const ScalarField& bc) {
    double s = 1.0;
    for (double v : bc.values) s = std::max(s, std::fabs(v));
    return s;
}

void check_boundary_data(const GridSpec& grid, const ScalarField& bc, const ScalarField& g) {
    if (!(bc.grid == grid)) {
        throw std::invalid_argument("boundary data grid does not match the solve grid");
    }
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (grid.is_interior(n)) continue;
        if (!std::isfinite(bc[n]) || bc[n] < g[n] - 1e-12 * std::max(1.0, std::fabs(g[n]))) {
            throw std::invalid_argument("boundary data falls below the obstacle");
        }
    }
}

ScalarField initial_field(const GridSpec& grid, const ScalarField& g, const ScalarField& bc) {
    ScalarField u = g;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (!grid.is_interior(n)) u[n] = bc[n];
    }
    return u;
}

// Estimate the Gauss-Seidel convergence factor from the tail of the
// change history and map it to the SOR-optimal relaxation factor.
double pick_omega(const std::vector<double>& history) {
    const std::size_t k = history.size();
    if (k < kProbeWindow + 1) return 1.5;
    const double tail = history[k - 1];
    const double head = history[k - 1 - kProbeWindow];
    if (!(head > 0.0) || !(tail > 0.0) || tail >= head) return 1.5;
    const double rho_gs = std::pow(tail / head, 1.0 / kProbeWindow);
    const double mu = std::sqrt(std::min(rho_gs, 1.0 - 1e-12));
    const double omega = 2.0 / (1.0 + std::sqrt(1.0 - mu * mu));
    return std::clamp(omega, kOmegaMin, kOmegaMax);
}

struct LoopState {
    double omega = 1.0;
    bool adaptive = true;
    bool probed = false;
    long next_update = 0;
    long last_perturbation = -1000;  // sweep index of the last policy change
    double best_delta = std::numeric_limits<double>::infinity();
    int stall_count = 0;
};

// One relaxation sweep plus the adaptive-omega and divergence-guard
// bookkeeping shared by the parallel solver and the policy inner loops.
// The relaxation factor starts from a Gauss-Seidel probe and is then
// re-estimated periodically: below the optimum the dominant SOR
// eigenvalue is real and observable in the change ratio, and inverting
// lambda = (omega mu / 2 + sqrt((omega mu / 2)^2 - omega + 1))^2
// recovers the Jacobi rate mu.
template <typename SweepFn>
double guarded_sweep(SweepFn&& sweep, LoopState& st, SolveDiagnostics& diag, double scale) {
    const bool forward = (diag.sweeps % 2) == 0;
    const double delta = sweep(st.omega, forward);
    ++diag.sweeps;
    diag.change_history.push_back(delta);
    diag.final_change = delta;

    if (st.adaptive && !st.probed && diag.sweeps == kProbeSweeps) {
        st.omega = pick_omega(diag.change_history);
        st.probed = true;
        st.next_update = diag.sweeps + 4 * kProbeSweeps;
        st.best_delta = std::numeric_limits<double>::infinity();
    } else if (st.adaptive && st.probed && diag.sweeps == st.next_update) {
        if (diag.sweeps - st.last_perturbation <= kProbeWindow + 5) {
            // measurement window polluted by a policy change; retry later
            st.next_update = diag.sweeps + kProbeWindow + 5;
        } else {
            const std::size_t k = diag.change_history.size();
            const double tail = diag.change_history[k - 1];
            const double head = diag.change_history[k - 1 - kProbeWindow];
            if (tail > 0.0 && head > tail) {
                const double lambda = std::pow(tail / head, 1.0 / kProbeWindow);
                // only meaningful in the real-eigenvalue regime (omega below optimal)
                if (lambda > st.omega - 1.0 + 0.02 && lambda < 1.0) {
                    const double mu = (lambda + st.omega - 1.0) / (st.omega * std::sqrt(lambda));
                    if (mu < 1.0) {
                        const double omega_new = std::clamp(
                            2.0 / (1.0 + std::sqrt(1.0 - mu * mu)), kOmegaMin, kOmegaMax);
                        if (omega_new > st.omega + 0.002) {
                            st.omega = omega_new;
                            st.best_delta = std::numeric_limits<double>::infinity();
                        }
                    }
                }
            }
            st.next_update = diag.sweeps + 4 * kProbeSweeps;
        }
    }
    if (delta < st.best_delta) st.best_delta = delta;
    // Relax back toward Gauss-Seidel if the iteration starts diverging.
    if (st.probed && delta > 1e3 * st.best_delta && delta > 1e-13 * scale) {
        st.omega = std::max(1.0, 1.0 + 0.85 * (st.omega - 1.0));
        st.best_delta = std::numeric_limits<double>::infinity();
    }
    if (delta <= 8.0 * std::numeric_limits<double>::epsilon() * scale) {
        ++st.stall_count;
    } else {
        st.stall_count = 0;
    }
    return delta;
}

void resolve_config(SolverConfig& cfg, double scale, double c) {
    if (cfg.tol <= 0.0) cfg.tol = 1e-10 * scale;
    if (cfg.residual_tol <= 0.0) cfg.residual_tol = 1e-8 * c;
    if (cfg.omega != 0.0 && !(cfg.omega >= 1.0 && cfg.omega < 2.0)) {
        throw std::invalid_argument("omega must lie in [1, 2) (or 0 for adaptive)");
    }
    if (cfg.max_sweeps <= 0 || cfg.max_policy_iters <= 0) {
        throw std::invalid_argument("iteration limits must be positive");
    }
}

}  // namespace

std::string action_name(std::int8_t action) {
    if (action == PolicyField::kStop) return "stop";
    if (action == PolicyField::kParallel) return "parallel";
    char buf[24];
    std::snprintf(buf, sizeof(buf), "search_%d", PolicyField::search_axis(action) + 1);
    return buf;
}

double lcp_residual(const ScalarField& u, const ScalarField& obstacle, const Cost& cost,
                    SearchMode mode, std::size_t* worst_node) {
    if (!(u.grid == obstacle.grid)) {
        throw std::invalid_argument("lcp_residual: field and obstacle grids differ");
    }
    validate_cost(cost, mode != SearchMode::Parallel);
    const Operators op(u.grid, cost);
    const double* uv = u.values.data();
    const double* gv = obstacle.values.data();
    double worst = 0.0;
    std::size_t argmax = 0;
    interior_scan(u.grid, true, [&](std::size_t n) {
        double r_op = std::numeric_limits<double>::infinity();
        if (mode != SearchMode::Sequential) r_op = op.parallel_residual(uv, n);
        if (mode != SearchMode::Parallel) {
            for (int a = 0; a < op.d; ++a) {
                r_op = std::min(r_op, op.search_residual(uv, n, a));
            }
        }
        const double res = std::fabs(std::min(r_op, uv[n] - gv[n]));
        if (res > worst) {
            worst = res;
            argmax = n;
        }
    });
    if (worst_node) *worst_node = argmax;
    return worst;
}

PolicyField policy_from_contact(const ScalarField& u, const ScalarField& obstacle,
                                double eps_contact) {
    if (!(u.grid == obstacle.grid)) {
        throw std::invalid_argument("policy_from_contact: grids differ");
    }
    PolicyField pi(u.grid);
    for (std::size_t n = 0; n < u.grid.node_count(); ++n) {
        pi.actions[n] =
            (u[n] - obstacle[n] <= eps_contact) ? PolicyField::kStop : PolicyField::kParallel;
    }
    return pi;
}

SolveResult solve_obstacle(const GridSpec& grid, double c, const ScalarField& obstacle,
                           const ScalarField& bc, const SolverConfig& config) {
    const Cost cost{c, 0.0};
    validate_cost(cost);
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarField& g = obstacle;
    if (!(g.grid == grid)) {
        throw std::invalid_argument("solve_obstacle: obstacle grid does not match");
    }
    check_boundary_data(grid, bc, g);

    SolverConfig cfg = config;
    const double scale = field_scale(bc);
    resolve_config(cfg, scale, cost.c);

    SolveResult out{initial_field(grid, g, bc), {}};
    ScalarField& u = out.u;
    SolveDiagnostics& diag = out.diagnostics;
    const Operators op(grid, cost);

    LoopState st;
    if (cfg.omega > 0.0) {
        st.omega = cfg.omega;
        st.adaptive = false;
        st.probed = true;
    }
    long next_residual_check = 0;
    while (diag.sweeps < cfg.max_sweeps) {
        const double delta = guarded_sweep(
            [&](double om, bool fwd) { return projected_sweep_parallel(u, g, op, om, fwd); },
            st, diag, scale);
        if (delta < cfg.tol && diag.sweeps >= next_residual_check) {
            diag.final_residual = lcp_residual(u, g, cost, SearchMode::Parallel);
            if (diag.final_residual <= cfg.residual_tol) {
                diag.converged = true;
                break;
            }
            if (st.stall_count > 100) {
                throw ConvergenceError(
                    "projected SOR stalled at machine precision with residual " +
                        std::to_string(diag.final_residual),
                    diag.final_residual, diag.sweeps);
            }
            next_residual_check = diag.sweeps + std::max<long>(25, diag.sweeps / 8);
        }
    }
    diag.omega_used = st.omega;
    if (!diag.converged) {
        diag.final_residual = lcp_residual(u, g, cost, SearchMode::Parallel);
        if (diag.final_residual <= cfg.residual_tol) {
            diag.converged = true;  // max_sweeps hit exactly at convergence
        } else {
            throw ConvergenceError("projected SOR did not converge in " +
                                       std::to_string(diag.sweeps) + " sweeps; residual " +
                                       std::to_string(diag.final_residual),
                                   diag.final_residual, diag.sweeps);
        }
    }
    diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

SolveResult solve_parallel(const GridSpec& grid, const Cost& cost, const ScalarField& bc,
                           const SolverConfig& cfg) {
    validate_cost(cost);
    return solve_obstacle(grid, cost.c, build_obstacle(grid), bc, cfg);
}

namespace {

PolicySolveResult solve_hjb(const GridSpec& grid, const Cost& cost, const ScalarField& bc,
                            const SolverConfig& config, SearchMode mode) {
    validate_cost(cost, true);
    if (mode == SearchMode::Hybrid) validate_hybrid_cost(cost);
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarField g = build_obstacle(grid);
    check_boundary_data(grid, bc, g);

    SolverConfig cfg = config;
    const double scale = field_scale(bc);
    resolve_config(cfg, scale, mode == SearchMode::Sequential ? cost.cprime : cost.c);

    PolicySolveResult out{initial_field(grid, g, bc), PolicyField(grid), {}};
    ScalarField& u = out.u;
    PolicyField& pi = out.policy;
    SolveDiagnostics& diag = out.diagnostics;
    const Operators op(grid, cost);

    const double switch_margin = 1e-13 * scale;
    improve_policy(u, g, mode, op, pi, 0.0);
    diag.policy_iterations = 1;

    LoopState st;
    if (cfg.omega > 0.0) {
        st.omega = cfg.omega;
        st.adaptive = false;
        st.probed = true;
    }
    // Howard iteration with settled inner solves: the policy is frozen
    // until the sweeps converge (sup-change below tol), improved from the
    // settled field, and the complementarity residual gates the exit once
    // an improvement leaves the policy unchanged. Improving from settled
    // fields only is what keeps boundary labels from oscillating with the
    // over-relaxation transients.
    const bool trace = std::getenv("PARSEARCH_TRACE") != nullptr;
    bool done = false;
    long next_residual_check = 0;
    long last_changed = -1;
    while (!done && diag.sweeps < cfg.max_sweeps) {
        const double delta = guarded_sweep(
            [&](double om, bool fwd) { return projected_sweep_policy(u, g, pi, op, om, fwd); },
            st, diag, scale);
        if (trace && diag.sweeps % 1000 == 0) {
            std::fprintf(stderr,
                         "[hjb] sweeps=%ld delta=%.3e omega=%.4f improvements=%d changed=%ld\n",
                         diag.sweeps, delta, st.omega, diag.policy_iterations, last_changed);
        }
        if (delta >= cfg.tol) continue;
        const long changed = improve_policy(u, g, mode, op, pi, switch_margin);
        ++diag.policy_iterations;
        last_changed = changed;
        if (changed != 0) {
            st.stall_count = 0;
            st.best_delta = std::numeric_limits<double>::infinity();
            st.last_perturbation = diag.sweeps;
            continue;
        }
        if (diag.sweeps < next_residual_check) continue;
        diag.final_residual = lcp_residual(u, g, cost, mode);
        if (diag.final_residual <= cfg.residual_tol) {
            done = true;
            break;
        }
        if (st.stall_count > 100) {
            std::size_t bad = 0;
            lcp_residual(u, g, cost, mode, &bad);
            throw ConvergenceError("policy iteration stalled at machine precision with residual " +
                                       std::to_string(diag.final_residual) + " at node " +
                                       node_string(grid, bad) + " (policy " +
                                       action_name(pi[bad]) + ", u-g " +
                                       std::to_string(u[bad] - g[bad]) + ")",
                                   diag.final_residual, diag.sweeps);
        }
        next_residual_check = diag.sweeps + 50;
    }
    diag.omega_used = st.omega;
    if (!done) {
        diag.final_residual = lcp_residual(u, g, cost, mode);
        if (diag.final_residual > cfg.residual_tol) {
            throw ConvergenceError("policy iteration did not converge; residual " +
                                       std::to_string(diag.final_residual),
                                   diag.final_residual, diag.sweeps);
        }
    }
    diag.converged = true;

    // Final labels: STOP on the contact set, best action elsewhere.
    const double h = grid.spacing();
    const double cscale = (mode == SearchMode::Sequential) ? cost.cprime : cost.c;
    const double eps_contact = std::max(1e-8, cscale * h * h);
    improve_policy(u, g, mode, op, pi, 0.0);
    std::vector<double> x(grid.dimension());
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (u[n] - g[n] <= eps_contact) {
            pi.actions[n] = PolicyField::kStop;
        } else if (pi.actions[n] == PolicyField::kStop) {
            pi.actions[n] = PolicyField::kParallel;  // value tie resolved to contact side
        }
        if (!grid.is_interior(n) && u[n] - g[n] > eps_contact) {
            // Far-field labels for simulation lookups that clamp to the box.
            if (mode == SearchMode::Sequential) {
                grid.node_point(n, x);
                int best = 0;
                for (int a = 1; a < grid.dimension(); ++a) {
                    if (x[a] > x[best]) best = a;
                }
                pi.actions[n] = PolicyField::search(best);
            } else {
                pi.actions[n] = PolicyField::kParallel;
            }
        }
    }
    if (mode == SearchMode::Sequential) {
        for (std::size_t n = 0; n < grid.node_count(); ++n) {
            if (pi.actions[n] == PolicyField::kParallel) {
                // interior value ties: fall back to the lowest axis
                pi.actions[n] = PolicyField::search(0);
            }
        }
    }
    diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace

PolicySolveResult solve_sequential(const GridSpec& grid, const Cost& cost,
                                   const ScalarField& bc, const SolverConfig& cfg) {
    return solve_hjb(grid, cost, bc, cfg, SearchMode::Sequential);
}

PolicySolveResult solve_hybrid(const GridSpec& grid, const Cost& cost, const ScalarField& bc,
                               const SolverConfig& cfg) {
    return solve_hjb(grid, cost, bc, cfg, SearchMode::Hybrid);
}

}  // namespace parsearch
