// Contact-set extraction and the geometric diagnostics of the stopping
// boundary: axis band widths, the diagonal half-width profile s*(t) and
// its distance to the asymptote, star-shapedness sampling, and
// continuation-region inclusion tests.

#ifndef PARSEARCH_FREE_BOUNDARY_HPP
#define PARSEARCH_FREE_BOUNDARY_HPP

#include <cstddef>
#include <vector>

#include "parsearch/grid.hpp"

namespace parsearch {

// The discrete solution contacts the obstacle only to scheme accuracy;
// h^2 matches the stencil truncation error.
double default_eps_contact(double c, double h);

// Node marked contact iff u - g <= eps_contact.
ContactMask contact_set(const ScalarField& u, const ScalarField& g, double eps_contact);

// Nodes with at least one axis neighbor of the opposite classification
// (both sides of the interface).
std::vector<std::size_t> boundary_nodes(const ContactMask& mask);

struct StarShapedViolation {
    std::vector<double> origin_point;
    double tau = 0.0;
    double excess = 0.0;  // u(tau x) - g(tau x) beyond the allowance
};

struct StarShapedReport {
    long sampled = 0;
    long rays_checked = 0;
    double allowance = 0.0;
    std::vector<StarShapedViolation> violations;
    bool pass() const { return violations.empty(); }
};

// For sampled contact nodes x and each tau in {1.1, 1.5, 2.0} with
// tau*x still inside the box, checks that the scaled point is also in
// contact (up to eps_contact plus an interpolation allowance). Samples
// are contact nodes in the middle 60% of the domain, capped at
// `max_samples` by a deterministic stride. An empty sample set passes
// trivially (sampled == 0).
StarShapedReport star_shaped_check(const ContactMask& mask, const ScalarField& u,
                                   const ScalarField& g, long max_samples,
                                   double eps_contact, double allowance = -1.0);

struct AxisBand {
    double x2 = 0.0;     // probe row
    double left = 0.0;   // band edges in x1 around x1 = 0
    double right = 0.0;
};

// Scans the mask row nearest each probe x2 for the non-contact band
// around x1 = 0; edges at the midpoints between the last continuation
// node and the first contact node. d = 2 only.
std::vector<AxisBand> axis_distance(const ContactMask& mask, double c,
                                    const std::vector<double>& probe_x2);

struct SliceHalfWidth {
    double t = 0.0;  // rotated slice coordinate
    double s = 0.0;  // smallest s > 0 in contact on the slice
};

struct BoundaryProfile {
    double c = 0.0;
    double h = 0.0;
    std::vector<std::size_t> gamma_nodes;
    std::vector<SliceHalfWidth> s_star;  // slices with t >= 0, ascending t
    long skipped_slices = 0;             // slices with no contact cell (truncation)
};

// Anti-diagonal scan of a d = 2 mask; s resolution is sqrt(2) h per
// slice. Slices without a contact cell are excluded and counted.
BoundaryProfile diagonal_profile(const ContactMask& mask, double c);

// sup over slices t >= T of the distance from the boundary sample to
// the asymptote |s| = 1/(2 sqrt(2) c).
double dfb_distance(const BoundaryProfile& profile, double T, double c);

struct InclusionReport {
    bool included = true;
    std::vector<std::size_t> violations;  // continuation(inner) nodes stopped in outer
};

// continuation(inner) subset of continuation(outer)?
InclusionReport region_inclusion(const ContactMask& inner, const ContactMask& outer);

}  // namespace parsearch

#endif
