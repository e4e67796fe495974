// Closed-form reference solutions and bounds for the search-stopping
// problem. These are exact formulas used as far-field boundary data,
// test oracles, and sandwich bounds for the numerical solvers.

#ifndef PARSEARCH_ANALYTIC_HPP
#define PARSEARCH_ANALYTIC_HPP

namespace parsearch {

// Search costs per unit time. `c` is the cost of searching all
// alternatives in parallel; `cprime` the cost of searching a single
// alternative. cprime is ignored by the parallel-only code paths.
struct Cost {
    double c = 1.0;
    double cprime = 0.0;
};

// Requires c > 0 (and cprime > 0 when `need_cprime`).
void validate_cost(const Cost& cost, bool need_cprime = false);

// Requires c/2 < cprime < c, the regime in which mixing parallel and
// single-alternative search is non-trivial.
void validate_hybrid_cost(const Cost& cost);

// Coordinates rotated 45 degrees: t along the diagonal x1 = x2, s across
// it. t = (x1+x2)/sqrt(2), s = (x1-x2)/sqrt(2).
struct RotatedPoint {
    double t = 0.0;
    double s = 0.0;
};

RotatedPoint to_rotated(double x1, double x2);
void from_rotated(const RotatedPoint& p, double& x1, double& x2);

// One-alternative value function with outside option 0:
//   0                      x <= -1/(4c)
//   c*(x + 1/(4c))^2       |x| < 1/(4c)
//   x                      x >= 1/(4c)
// C1 at both junctions (smooth pasting at +-1/(4c)).
double psi_value(double x, double c);

// Diagonal-channel profile in rotated coordinates:
//   t/sqrt(2) + theta*s^2 + 1/(8*theta)   |s| <= 1/(2*sqrt(2)*theta)
//   (t + |s|)/sqrt(2)                     otherwise
// C1 across the junction. With theta = c this is the asymptote of the
// parallel-search value near the diagonal and a global lower bound.
double eta_value(const RotatedPoint& p, double theta);

// Upper envelope (1/(4c))*h(alpha*t) + eta_{c-eps}(t,s) with
// h(z) = max(1-z, 0)^2 and alpha = 2*sqrt(c*eps). Dominates the value
// function on the half-plane t >= 0 for any eps in (0, c). eps = c is
// rejected: eta_{c-eps} degenerates there.
double phi_upper(const RotatedPoint& p, double c, double eps);

// Leading term 1/(8*sqrt(2)*c^3*T^2) of the bound on the distance
// between the free boundary restricted to t >= T and its asymptote
// {|x1-x2| = 1/(2c)}. Valid up to O(1/(c^5 T^4)); requires T >= 1/(2c).
double dfb_upper_bound(double T, double c);

// Global two-dimensional upper bound max{x1,0} + max{x2,0} + 1/(4c).
double value_upper_bound_2d(double x1, double x2, double c);

}  // namespace parsearch

#endif
