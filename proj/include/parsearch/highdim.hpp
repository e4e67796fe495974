// Auxiliary no-outside-option problems on the hyperplane orthogonal to
// the diagonal direction: chart construction, the reduced solve for
// w_d, the minimal contact radius r_d with mesh brackets, and the
// cross-dimension containment checks.

#ifndef PARSEARCH_HIGHDIM_HPP
#define PARSEARCH_HIGHDIM_HPP

#include <span>
#include <vector>

#include "parsearch/solver.hpp"

namespace parsearch {

// Orthonormal basis of H = {v : v . tau_d = 0} with tau_d the unit
// diagonal, plus the obstacle in chart coordinates.
struct HyperplaneChart {
    int ambient_d = 0;
    std::vector<std::vector<double>> basis;  // (d-1) rows, each an ambient vector

    int chart_d() const { return ambient_d - 1; }
    // chart coordinates -> ambient point on H
    void embed(std::span<const double> y, std::span<double> x) const;
    // ambient point (assumed on H) -> chart coordinates
    void project(std::span<const double> x, std::span<double> y) const;
    // max ambient coordinate of the embedded point
    double rho(std::span<const double> y) const;
};

// Gram-Schmidt on e1-e2, e2-e3, ...; requires d >= 2.
HyperplaneChart build_chart(int d);

struct WdSolution {
    int d = 0;       // ambient dimension
    double c = 0.0;
    HyperplaneChart chart;  // empty basis when d == 1
    ScalarField omega;      // reduced field on the chart grid (the x-axis for d == 1)
    ScalarField rho;        // obstacle on the chart grid
    SolveDiagnostics diagnostics;
};

// Cube half-width 4 * max(r_{d-1}, d/c); pass r_prev <= 0 when unknown.
double default_chart_halfwidth(int d, double c, double r_prev);

// Solves min{-1/2 lap w + c, w - rho} = 0 reduced to the chart: the
// (d-1)-dimensional obstacle problem for omega = w_d - t/sqrt(d), with
// Dirichlet data rho on the cube boundary. d = 1 solves the
// one-alternative problem on the axis directly.
WdSolution solve_wd(int d, double c, double halfwidth, double h, const SolverConfig& cfg);

// w_d at an ambient point, reconstructed as omega + t/sqrt(d); the
// chart coordinates must fall inside the solved box.
double wd_value(const WdSolution& wd, std::span<const double> x);

struct RdEstimate {
    int d = 0;
    double r = 0.0;
    double r_lo = 0.0;
    double r_hi = 0.0;  // r -+ half the cell diagonal
    double h = 0.0;
};

// Smallest chart norm over contact nodes within the trusted radius
// (default: half the chart half-width). Errors when no contact node is
// found there (domain too small).
RdEstimate estimate_rd(const WdSolution& wd, double eps_contact, double trusted_radius = 0.0);

struct RdPairCheck {
    int d = 0;          // upper dimension of the pair
    bool monotone = false;
    bool inequality = true;  // (d-2-1/d) r_d^2 >= (d-2) r_{d-1}^2, d >= 3 only
    double lhs = 0.0;
    double rhs = 0.0;
};

struct RdReport {
    std::vector<RdPairCheck> pairs;
    bool trivial = false;  // fewer than two estimates
    bool pass = true;
};

// One-sided checks with mesh brackets: the lower bracket of r_d against
// the upper bracket of r_{d-1}. Estimates must have consecutive d.
RdReport rd_inequality_check(const std::vector<RdEstimate>& estimates);

struct RegionCheck {
    double gamma = 0.0;  // K * d / c
    long sampled = 0;
    long contacts = 0;
    double fraction = 0.0;
};

// Fraction of grid nodes in N(K d/c) = {x_i >= 0, |x_i - x_j| >= K d/c}
// that are in contact. Errors when the region misses the grid.
RegionCheck upper_region_check(const ScalarField& u, const ScalarField& g, double c, double K,
                               double eps_contact);

struct MonotonicityReport {
    long compared = 0;
    double worst_gap = 0.0;  // min over samples of w_d - w_{d-1}
    bool pass = false;
};

// w_d >= w_{d-1} at chart points of the lower problem embedded with the
// extra coordinate at 0 and deeply negative. For d-1 == 1 the deep
// embedding is compared against the stopped payoff (the one-alternative
// problem with an outside option degenerates there).
MonotonicityReport wd_monotonicity_check(const WdSolution& hi, const WdSolution& lo,
                                         double tolerance);

}  // namespace parsearch

#endif
