#include "parsearch/highdim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "parsearch/free_boundary.hpp"

namespace parsearch {

void HyperplaneChart::embed(std::span<const double> y, std::span<double> x) const {
    for (int i = 0; i < ambient_d; ++i) x[i] = 0.0;
    for (int j = 0; j < chart_d(); ++j) {
        for (int i = 0; i < ambient_d; ++i) x[i] += y[j] * basis[j][i];
    }
}

void HyperplaneChart::project(std::span<const double> x, std::span<double> y) const {
    for (int j = 0; j < chart_d(); ++j) {
        double dot = 0.0;
        for (int i = 0; i < ambient_d; ++i) dot += x[i] * basis[j][i];
        y[j] = dot;
    }
}

double HyperplaneChart::rho(std::span<const double> y) const {
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < ambient_d; ++i) {
        double xi = 0.0;
        for (int j = 0; j < chart_d(); ++j) xi += y[j] * basis[j][i];
        m = std::max(m, xi);
    }
    return m;
}

HyperplaneChart build_chart(int d) {
    if (d < 2) throw std::invalid_argument("build_chart: requires d >= 2");
    HyperplaneChart chart;
    chart.ambient_d = d;
    for (int j = 0; j + 1 < d; ++j) {
        std::vector<double> v(d, 0.0);
        v[j] = 1.0;
        v[j + 1] = -1.0;
        for (const auto& b : chart.basis) {
            double dot = 0.0;
            for (int i = 0; i < d; ++i) dot += v[i] * b[i];
            for (int i = 0; i < d; ++i) v[i] -= dot * b[i];
        }
        double norm = 0.0;
        for (double vi : v) norm += vi * vi;
        norm = std::sqrt(norm);
        for (double& vi : v) vi /= norm;
        chart.basis.push_back(std::move(v));
    }
    return chart;
}

double default_chart_halfwidth(int d, double c, double r_prev) {
    validate_cost(Cost{c, 0.0});
    return 4.0 * std::max(r_prev > 0.0 ? r_prev : 0.0, static_cast<double>(std::max(d, 1)) / c);
}

WdSolution solve_wd(int d, double c, double halfwidth, double h, const SolverConfig& cfg) {
    validate_cost(Cost{c, 0.0});
    if (d < 1) throw std::invalid_argument("solve_wd: d must be >= 1");
    if (!(halfwidth > 0.0) || !(h > 0.0)) {
        throw std::invalid_argument("solve_wd: need positive half-width and spacing");
    }
    // snap the half-width to the grid
    halfwidth = std::ceil(halfwidth / h) * h;

    WdSolution out{d, c, {}, ScalarField(GridSpec({-halfwidth}, {halfwidth}, h)),
                   ScalarField(GridSpec({-halfwidth}, {halfwidth}, h)), {}};
    if (d == 1) {
        // One alternative against the outside option; the solution pastes
        // onto 0 at -1/(4c) and onto x at 1/(4c).
        const GridSpec grid({-halfwidth}, {halfwidth}, h);
        const ScalarField bc = truncation_boundary_values(grid, Cost{c, 0.0}, SearchMode::Parallel);
        auto solved = solve_obstacle(grid, c, build_obstacle(grid), bc, cfg);
        out.omega = std::move(solved.u);
        out.rho = build_obstacle(grid);
        out.diagnostics = std::move(solved.diagnostics);
        return out;
    }

    out.chart = build_chart(d);
    const int cd = d - 1;
    const GridSpec grid(std::vector<double>(cd, -halfwidth), std::vector<double>(cd, halfwidth), h);
    ScalarField rho(grid);
    std::vector<double> y(cd);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        grid.node_point(n, y);
        rho[n] = out.chart.rho(y);
    }
    // Dirichlet data = obstacle: the far boundary is deep contact except
    // where the ridge channels cross it, and the induced defect decays
    // inside the channels well before the trusted region.
    auto solved = solve_obstacle(grid, c, rho, rho, cfg);
    out.omega = std::move(solved.u);
    out.rho = std::move(rho);
    out.diagnostics = std::move(solved.diagnostics);
    return out;
}

double wd_value(const WdSolution& wd, std::span<const double> x) {
    if (static_cast<int>(x.size()) != wd.d) {
        throw std::invalid_argument("wd_value: point dimension mismatch");
    }
    if (wd.d == 1) {
        return interpolate(wd.omega, x);
    }
    const int d = wd.d;
    double t_sum = 0.0;
    for (double xi : x) t_sum += xi;
    std::vector<double> on_h(d);
    for (int i = 0; i < d; ++i) on_h[i] = x[i] - t_sum / d;
    std::vector<double> y(d - 1);
    wd.chart.project(on_h, y);
    // w_d = omega + t/sqrt(d) with t = sum(x)/sqrt(d)
    return interpolate(wd.omega, y) + t_sum / d;
}

RdEstimate estimate_rd(const WdSolution& wd, double eps_contact, double trusted_radius) {
    const GridSpec& grid = wd.omega.grid;
    const int cd = grid.dimension();
    if (trusted_radius <= 0.0) trusted_radius = 0.5 * grid.upper(0);
    RdEstimate est;
    est.d = wd.d;
    est.h = grid.spacing();
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> y(cd);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (wd.omega[n] - wd.rho[n] > eps_contact) continue;
        grid.node_point(n, y);
        double r2 = 0.0;
        for (double yi : y) r2 += yi * yi;
        const double r = std::sqrt(r2);
        if (r <= trusted_radius && r < best) best = r;
    }
    if (!std::isfinite(best)) {
        throw std::invalid_argument(
            "estimate_rd: no contact nodes inside the trusted region; enlarge the chart domain");
    }
    const double bracket = 0.5 * est.h * std::sqrt(static_cast<double>(std::max(wd.d - 1, 1)));
    est.r = best;
    est.r_lo = std::max(0.0, best - bracket);
    est.r_hi = best + bracket;
    return est;
}

RdReport rd_inequality_check(const std::vector<RdEstimate>& estimates) {
    RdReport report;
    if (estimates.size() < 2) {
        report.trivial = true;
        return report;
    }
    for (std::size_t i = 1; i < estimates.size(); ++i) {
        if (estimates[i].d != estimates[i - 1].d + 1) {
            throw std::invalid_argument("rd_inequality_check: estimates must have consecutive d");
        }
        RdPairCheck pair;
        pair.d = estimates[i].d;
        pair.monotone = estimates[i].r_lo > estimates[i - 1].r_hi;
        if (pair.d >= 3) {
            const double dd = pair.d;
            pair.lhs = (dd - 2.0 - 1.0 / dd) * estimates[i].r_lo * estimates[i].r_lo;
            pair.rhs = (dd - 2.0) * estimates[i - 1].r_hi * estimates[i - 1].r_hi;
            pair.inequality = pair.lhs >= pair.rhs;
        }
        report.pass = report.pass && pair.monotone && pair.inequality;
        report.pairs.push_back(pair);
    }
    return report;
}

RegionCheck upper_region_check(const ScalarField& u, const ScalarField& g, double c, double K,
                               double eps_contact) {
    if (!(u.grid == g.grid)) {
        throw std::invalid_argument("upper_region_check: grids differ");
    }
    validate_cost(Cost{c, 0.0});
    if (!(K > 0.0)) throw std::invalid_argument("upper_region_check: K must be positive");
    const GridSpec& grid = u.grid;
    const int d = grid.dimension();
    RegionCheck check;
    check.gamma = K * d / c;
    std::vector<double> x(d);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        grid.node_point(n, x);
        bool in_region = true;
        for (int i = 0; i < d && in_region; ++i) {
            if (x[i] < 0.0) in_region = false;
            for (int j = i + 1; j < d && in_region; ++j) {
                if (std::fabs(x[i] - x[j]) < check.gamma) in_region = false;
            }
        }
        if (!in_region) continue;
        ++check.sampled;
        if (u[n] - g[n] <= eps_contact) ++check.contacts;
    }
    if (check.sampled == 0) {
        throw std::invalid_argument(
            "upper_region_check: N(" + std::to_string(check.gamma) +
            ") does not intersect the grid; enlarge the domain or reduce K");
    }
    check.fraction = static_cast<double>(check.contacts) / static_cast<double>(check.sampled);
    return check;
}

MonotonicityReport wd_monotonicity_check(const WdSolution& hi, const WdSolution& lo,
                                         double tolerance) {
    if (hi.d != lo.d + 1) {
        throw std::invalid_argument("wd_monotonicity_check: dimensions must be consecutive");
    }
    if (hi.c != lo.c) {
        throw std::invalid_argument("wd_monotonicity_check: mismatched cost");
    }
    const GridSpec& lo_grid = lo.omega.grid;
    const int lo_cd = lo_grid.dimension();
    const double trusted = 0.5 * lo_grid.upper(0);
    const double deep = std::min(3.0 / hi.c, 0.25 * hi.omega.grid.upper(0) * std::sqrt(2.0));

    MonotonicityReport report;
    report.worst_gap = std::numeric_limits<double>::infinity();
    std::vector<double> y(lo_cd);
    std::vector<double> xl(std::max(lo.d, 1));
    std::vector<double> xh(hi.d);
    // subsample the lower chart to keep the check cheap
    const std::size_t stride = std::max<std::size_t>(1, lo_grid.node_count() / 20000);
    for (std::size_t n = 0; n < lo_grid.node_count(); n += stride) {
        lo_grid.node_point(n, y);
        double r2 = 0.0;
        for (double yi : y) r2 += yi * yi;
        if (std::sqrt(r2) > trusted) continue;
        if (lo.d == 1) {
            xl[0] = y[0];
        } else {
            lo.chart.embed(y, xl);
        }
        for (int which = 0; which < 2; ++which) {
            const double extra = (which == 0) ? 0.0 : -deep;
            for (int i = 0; i < lo.d; ++i) xh[i] = xl[i];
            xh[lo.d] = extra;
            // the lower value: solved node value, except the degenerate
            // deep embedding of the one-alternative problem, where the
            // comparison value is the stopped payoff itself
            double lo_value;
            if (lo.d == 1 && which == 1) {
                lo_value = xl[0];
            } else {
                lo_value = lo.omega[n];
            }
            double hi_value;
            try {
                hi_value = wd_value(hi, xh);
            } catch (const std::invalid_argument&) {
                continue;  // embedded point left the solved chart box
            }
            ++report.compared;
            report.worst_gap = std::min(report.worst_gap, hi_value - lo_value);
        }
    }
    if (report.compared == 0) {
        throw std::invalid_argument("wd_monotonicity_check: no comparable sample points");
    }
    report.pass = report.worst_gap >= -tolerance;
    return report;
}

}  // namespace parsearch
