#include "parsearch/free_boundary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace parsearch {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kStarTaus[] = {1.1, 1.5, 2.0};
}

double default_eps_contact(double c, double h) {
    return std::max(1e-8, c * h * h);
}

ContactMask contact_set(const ScalarField& u, const ScalarField& g, double eps_contact) {
    if (!(u.grid == g.grid)) {
        throw std::invalid_argument("contact_set: field grids differ");
    }
    if (!(eps_contact > 0.0)) {
        throw std::invalid_argument("contact_set: eps_contact must be positive");
    }
    ContactMask mask(u.grid);
    for (std::size_t n = 0; n < u.grid.node_count(); ++n) {
        mask.stopped[n] = (u[n] - g[n] <= eps_contact) ? 1 : 0;
    }
    return mask;
}

std::vector<std::size_t> boundary_nodes(const ContactMask& mask) {
    const GridSpec& g = mask.grid;
    const int d = g.dimension();
    std::vector<std::size_t> out;
    std::vector<int> mi(d);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        g.multi_index(n, mi);
        const bool self = mask[n];
        bool interface = false;
        for (int a = 0; a < d && !interface; ++a) {
            if (mi[a] > 0 && mask[n - g.stride(a)] != self) interface = true;
            if (mi[a] + 1 < g.count(a) && mask[n + g.stride(a)] != self) interface = true;
        }
        if (interface) out.push_back(n);
    }
    return out;
}

StarShapedReport star_shaped_check(const ContactMask& mask, const ScalarField& u,
                                   const ScalarField& g, long max_samples,
                                   double eps_contact, double allowance) {
    if (!(u.grid == mask.grid) || !(g.grid == mask.grid)) {
        throw std::invalid_argument("star_shaped_check: grids differ");
    }
    const GridSpec& grid = mask.grid;
    const int d = grid.dimension();
    const double h = grid.spacing();

    StarShapedReport report;
    if (allowance < 0.0) {
        // eps scales by tau^2 <= 4 along the ray; the rest covers
        // interpolation error and the sub-cell offset of the true
        // contact point near the sampled node.
        double cscale = eps_contact / (h * h);  // ~c for the default eps
        report.allowance = 4.0 * eps_contact + 10.0 * cscale * h * h * d;
    } else {
        report.allowance = allowance;
    }

    // Contact nodes in the middle 60% of the box, deterministic stride cap.
    std::vector<std::size_t> samples;
    std::vector<double> x(d);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (!mask[n]) continue;
        grid.node_point(n, x);
        bool inside = true;
        for (int a = 0; a < d; ++a) {
            const double margin = 0.2 * (grid.upper(a) - grid.lower(a));
            if (x[a] < grid.lower(a) + margin || x[a] > grid.upper(a) - margin) {
                inside = false;
                break;
            }
        }
        if (inside) samples.push_back(n);
    }
    if (max_samples > 0 && static_cast<long>(samples.size()) > max_samples) {
        const std::size_t stride = (samples.size() + max_samples - 1) / max_samples;
        std::vector<std::size_t> thinned;
        for (std::size_t i = 0; i < samples.size(); i += stride) thinned.push_back(samples[i]);
        samples.swap(thinned);
    }
    report.sampled = static_cast<long>(samples.size());

    std::vector<double> y(d);
    for (std::size_t n : samples) {
        grid.node_point(n, x);
        for (double tau : kStarTaus) {
            for (int a = 0; a < d; ++a) y[a] = tau * x[a];
            if (!grid.contains(y)) continue;
            ++report.rays_checked;
            const double gap = interpolate(u, y) - obstacle_at(y);
            if (gap > eps_contact + report.allowance) {
                report.violations.push_back({x, tau, gap - eps_contact - report.allowance});
            }
        }
    }
    return report;
}

std::vector<AxisBand> axis_distance(const ContactMask& mask, double c,
                                    const std::vector<double>& probe_x2) {
    validate_cost(Cost{c, 0.0});
    const GridSpec& grid = mask.grid;
    if (grid.dimension() != 2) {
        throw std::invalid_argument("axis_distance: requires a 2-d mask");
    }
    const double h = grid.spacing();
    std::vector<AxisBand> out;
    for (double probe : probe_x2) {
        int j = static_cast<int>(std::lround((probe - grid.lower(1)) / h));
        if (j < 0 || j >= grid.count(1)) {
            throw std::invalid_argument("axis_distance: probe row outside the grid");
        }
        int i0 = static_cast<int>(std::lround((0.0 - grid.lower(0)) / h));
        i0 = std::clamp(i0, 0, grid.count(0) - 1);
        const auto at = [&](int i) {
            int mi[2] = {i, j};
            return mask[grid.flat_index(mi)];
        };
        if (at(i0)) {
            bool any_open = false;
            for (int i = 0; i < grid.count(0); ++i) {
                if (!at(i)) { any_open = true; break; }
            }
            throw std::invalid_argument(
                any_open ? "axis_distance: no continuation band around x1 = 0 at probe row"
                         : "axis_distance: probe row entirely in contact; domain too small");
        }
        int ir = i0;
        while (ir + 1 < grid.count(0) && !at(ir + 1)) ++ir;
        int il = i0;
        while (il - 1 >= 0 && !at(il - 1)) --il;
        if (ir + 1 >= grid.count(0) || il - 1 < 0) {
            throw std::invalid_argument("axis_distance: band reaches the domain boundary");
        }
        AxisBand band;
        band.x2 = grid.coordinate(1, j);
        band.left = grid.coordinate(0, il) - 0.5 * h;
        band.right = grid.coordinate(0, ir) + 0.5 * h;
        out.push_back(band);
    }
    return out;
}

BoundaryProfile diagonal_profile(const ContactMask& mask, double c) {
    validate_cost(Cost{c, 0.0});
    const GridSpec& grid = mask.grid;
    if (grid.dimension() != 2) {
        throw std::invalid_argument("diagonal_profile: requires a 2-d mask");
    }
    const double h = grid.spacing();
    BoundaryProfile profile;
    profile.c = c;
    profile.h = h;
    profile.gamma_nodes = boundary_nodes(mask);

    const int n1 = grid.count(0);
    const int n2 = grid.count(1);
    const double base = grid.lower(0) + grid.lower(1);
    for (int k = 0; k <= (n1 - 1) + (n2 - 1); ++k) {
        const double t = (base + k * h) / kSqrt2;
        if (t < 0.0) continue;
        // walk the anti-diagonal i + j = k upward in s = (x1-x2)/sqrt(2)
        const int ilo = std::max(0, k - (n2 - 1));
        const int ihi = std::min(n1 - 1, k);
        const double off = (grid.lower(1) - grid.lower(0)) / h;
        const int istart = std::max(ilo, static_cast<int>(std::floor((k + off) / 2.0)) + 1);
        bool found = false;
        for (int i = istart; i <= ihi; ++i) {
            const double s = ((2 * i - k) * h + grid.lower(0) - grid.lower(1)) / kSqrt2;
            if (s <= 0.0) continue;
            int mi[2] = {i, k - i};
            if (mask[grid.flat_index(mi)]) {
                profile.s_star.push_back({t, s});
                found = true;
                break;
            }
        }
        if (!found) ++profile.skipped_slices;
    }
    return profile;
}

double dfb_distance(const BoundaryProfile& profile, double T, double c) {
    const double target = 1.0 / (2.0 * kSqrt2 * c);
    double worst = -1.0;
    for (const auto& sw : profile.s_star) {
        if (sw.t < T) continue;
        worst = std::max(worst, std::fabs(sw.s - target));
    }
    if (worst < 0.0) {
        throw std::invalid_argument("dfb_distance: no boundary slices with t >= " +
                                    std::to_string(T));
    }
    return worst;
}

InclusionReport region_inclusion(const ContactMask& inner, const ContactMask& outer) {
    if (!(inner.grid == outer.grid)) {
        throw std::invalid_argument("region_inclusion: masks live on different grids");
    }
    InclusionReport report;
    for (std::size_t n = 0; n < inner.grid.node_count(); ++n) {
        if (!inner[n] && outer[n]) {
            report.included = false;
            report.violations.push_back(n);
        }
    }
    return report;
}

}  // namespace parsearch
