// Discrete solvers for the search-stopping complementarity systems:
// projected SOR for the parallel-search obstacle problem, and policy
// iteration with projected SOR inner solves for the sequential and
// hybrid action sets.

#ifndef PARSEARCH_SOLVER_HPP
#define PARSEARCH_SOLVER_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "parsearch/grid.hpp"

namespace parsearch {

struct SolverConfig {
    // Absolute tolerances. Zero means "derive the default": tol becomes
    // 1e-10 times the field scale, residual_tol 1e-8 times c.
    double tol = 0.0;
    double residual_tol = 0.0;
    // Relaxation factor in [1, 2). Zero selects it adaptively from a
    // short Gauss-Seidel probe of the convergence rate.
    double omega = 0.0;
    long max_sweeps = 500000;
    int max_policy_iters = 60;
};

// Per-node action. Search actions are encoded per axis.
struct PolicyField {
    static constexpr std::int8_t kStop = 0;
    static constexpr std::int8_t kParallel = 1;
    static std::int8_t search(int axis) { return static_cast<std::int8_t>(2 + axis); }
    static int search_axis(std::int8_t a) { return a - 2; }

    GridSpec grid;
    std::vector<std::int8_t> actions;

    explicit PolicyField(const GridSpec& g, std::int8_t fill = kStop)
        : grid(g), actions(g.node_count(), fill) {}

    std::int8_t operator[](std::size_t i) const { return actions[i]; }
};

std::string action_name(std::int8_t action);

struct SolveDiagnostics {
    long sweeps = 0;
    int policy_iterations = 0;
    double omega_used = 0.0;
    double final_change = 0.0;
    double final_residual = 0.0;
    double wall_seconds = 0.0;
    bool converged = false;
    // Sup-norm change of each sweep, in order.
    std::vector<double> change_history;
};

struct SolveResult {
    ScalarField u;
    SolveDiagnostics diagnostics;
};

struct PolicySolveResult {
    ScalarField u;
    PolicyField policy;
    SolveDiagnostics diagnostics;
};

class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double residual, long sweeps)
        : std::runtime_error(what), last_residual(residual), sweeps(sweeps) {}
    double last_residual;
    long sweeps;
};

// min{ -1/2 lap u + c, u - g } = 0 with Dirichlet data `bc` on the
// truncation boundary. The solved field dominates the obstacle at every
// node and satisfies the complementarity system within residual_tol at
// interior nodes.
SolveResult solve_parallel(const GridSpec& grid, const Cost& cost, const ScalarField& bc,
                           const SolverConfig& cfg);

// Same complementarity system with a caller-supplied obstacle (used by
// the hyperplane-chart auxiliary problems).
SolveResult solve_obstacle(const GridSpec& grid, double c, const ScalarField& obstacle,
                           const ScalarField& bc, const SolverConfig& cfg);

// min{ u - g, min_i (-1/2 d^2_ii u + cprime) } = 0: one alternative
// diffuses at a time. The returned policy records a minimizing action
// at every node (STOP on the contact set).
PolicySolveResult solve_sequential(const GridSpec& grid, const Cost& cost,
                                   const ScalarField& bc, const SolverConfig& cfg);

// Action set {STOP, PARALLEL, SEARCH_i}; requires c/2 < cprime < c.
PolicySolveResult solve_hybrid(const GridSpec& grid, const Cost& cost,
                               const ScalarField& bc, const SolverConfig& cfg);

// Max over interior nodes of |min(operator residuals, u - g)| for the
// mode's action set. Zero (to tolerance) exactly at discrete solutions.
// `worst_node` (optional) receives the attaining node.
double lcp_residual(const ScalarField& u, const ScalarField& obstacle, const Cost& cost,
                    SearchMode mode, std::size_t* worst_node = nullptr);

// STOP wherever u contacts the obstacle within eps_contact, PARALLEL
// elsewhere; the policy view of a parallel-mode solution.
PolicyField policy_from_contact(const ScalarField& u, const ScalarField& obstacle,
                                double eps_contact);

}  // namespace parsearch

#endif
