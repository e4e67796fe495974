#include "parsearch/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace parsearch {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

std::string cache_key(const char* tag, const Cost& cost, const std::vector<double>& lo,
                      const std::vector<double>& hi, double h) {
    std::ostringstream key;
    key << tag << "|c=" << format_double(cost.c) << "|cp=" << format_double(cost.cprime);
    for (double v : lo) key << "|" << format_double(v);
    for (double v : hi) key << "|" << format_double(v);
    key << "|h=" << format_double(h);
    return key.str();
}

std::string describe(bool pass, const std::string& text) {
    return (pass ? "" : "FAILED: ") + text;
}

}  // namespace

json check_result_to_json(const CheckResult& result) {
    json j;
    j["name"] = result.name;
    j["pass"] = result.pass;
    j["detail"] = result.detail;
    j["data"] = result.data;
    return j;
}

VerificationSuite::VerificationSuite() : VerificationSuite(Options{}) {}

VerificationSuite::VerificationSuite(Options opts) : opts_(opts) {
    if (!(opts_.allowance_scale >= 0.0) || !(opts_.resolution_scale > 0.0)) {
        throw std::invalid_argument("VerificationSuite: bad scale options");
    }
}

const std::vector<std::string>& VerificationSuite::check_names() {
    static const std::vector<std::string> names = {
        "smooth_pasting_1d",    "axis_distance",     "diagonal_lower_bound",
        "dfb_rate",             "sandwich",          "star_shaped",
        "sequential_inclusion", "sequential_policy", "hybrid_regime",
        "rd_values",            "mc_cross_validation", "property_suite",
    };
    return names;
}

const SolveResult& VerificationSuite::parallel_solve(double c, std::vector<double> lo,
                                                     std::vector<double> hi, double h) {
    const Cost cost{c, 0.0};
    const std::string key = cache_key("par", cost, lo, hi, h);
    auto it = parallel_cache_.find(key);
    if (it == parallel_cache_.end()) {
        const GridSpec grid(lo, hi, h);
        const ScalarField bc = truncation_boundary_values(grid, cost, SearchMode::Parallel);
        auto solved = std::make_shared<SolveResult>(solve_parallel(grid, cost, bc, {}));
        it = parallel_cache_.emplace(key, std::move(solved)).first;
    }
    return *it->second;
}

const PolicySolveResult& VerificationSuite::policy_solve(SearchMode mode, const Cost& cost,
                                                         std::vector<double> lo,
                                                         std::vector<double> hi, double h) {
    const std::string key = cache_key(mode_name(mode), cost, lo, hi, h);
    auto it = policy_cache_.find(key);
    if (it == policy_cache_.end()) {
        const GridSpec grid(lo, hi, h);
        const ScalarField bc = truncation_boundary_values(grid, cost, mode);
        auto solved = std::make_shared<PolicySolveResult>(
            mode == SearchMode::Sequential ? solve_sequential(grid, cost, bc, {})
                                           : solve_hybrid(grid, cost, bc, {}));
        it = policy_cache_.emplace(key, std::move(solved)).first;
    }
    return *it->second;
}

const WdSolution& VerificationSuite::wd_solve(int d, double c, double halfwidth, double h) {
    const std::string key =
        cache_key("wd", Cost{c, 0.0}, {static_cast<double>(d)}, {halfwidth}, h);
    auto it = wd_cache_.find(key);
    if (it == wd_cache_.end()) {
        auto solved = std::make_shared<WdSolution>(solve_wd(d, c, halfwidth, h, {}));
        it = wd_cache_.emplace(key, std::move(solved)).first;
    }
    return *it->second;
}

CheckResult VerificationSuite::run(const std::string& name) {
    if (name == "smooth_pasting_1d") return check_smooth_pasting_1d();
    if (name == "axis_distance") return check_axis_distance();
    if (name == "diagonal_lower_bound") return check_diagonal_lower_bound();
    if (name == "dfb_rate") return check_dfb_rate();
    if (name == "sandwich") return check_sandwich();
    if (name == "star_shaped") return check_star_shaped();
    if (name == "sequential_inclusion") return check_sequential_inclusion();
    if (name == "sequential_policy") return check_sequential_policy();
    if (name == "hybrid_regime") return check_hybrid_regime();
    if (name == "rd_values") return check_rd_values();
    if (name == "mc_cross_validation") return check_mc_cross_validation();
    if (name == "property_suite") return check_property_suite();
    throw std::invalid_argument("unknown check: " + name);
}

std::vector<CheckResult> VerificationSuite::run_all(const std::vector<std::string>& only) {
    std::vector<std::string> names = only.empty() ? check_names() : only;
    std::vector<CheckResult> results;
    for (const auto& name : names) results.push_back(run(name));
    return results;
}

CheckResult VerificationSuite::check_smooth_pasting_1d() {
    CheckResult res{"smooth_pasting_1d", false, "", {}};
    const double h = opts_.resolution_scale / 400.0;
    const auto& solved = parallel_solve(1.0, {-2.0}, {2.0}, h);
    const GridSpec& grid = solved.u.grid;
    const ScalarField g = build_obstacle(grid);
    const ContactMask mask = contact_set(solved.u, g, default_eps_contact(1.0, h));

    const int i0 = static_cast<int>(std::lround((0.0 - grid.lower(0)) / h));
    int il = i0;
    while (il - 1 >= 0 && !mask[static_cast<std::size_t>(il - 1)]) --il;
    int ir = i0;
    while (ir + 1 < grid.count(0) && !mask[static_cast<std::size_t>(ir + 1)]) ++ir;
    const double left = grid.coordinate(0, il) - 0.5 * h;
    const double right = grid.coordinate(0, ir) + 0.5 * h;
    const double u0 = solved.u[static_cast<std::size_t>(i0)];

    const double edge_err = std::max(std::fabs(left + 0.25), std::fabs(right - 0.25));
    const double value_err = std::fabs(u0 - 0.0625);
    res.pass = edge_err <= tol(2.0 * h) && value_err <= tol(1e-3);
    res.data = {{"left", left}, {"right", right}, {"u0", u0},
                {"edge_tol", tol(2.0 * h)}, {"value_tol", tol(1e-3)}};
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "d=1 boundaries at [%.5f, %.5f] (target +-0.25 +- %.5f), u(0)=%.6f",
                  left, right, tol(2.0 * h), u0);
    res.detail = describe(res.pass, buf);
    return res;
}

CheckResult VerificationSuite::check_axis_distance() {
    CheckResult res{"axis_distance", true, "", json::array()};
    for (double c : {0.5, 1.0, 2.0}) {
        const double h = grid_h(c);
        const auto& solved = parallel_solve(c, {-4.0 / c, -4.0 / c}, {8.0 / c, 8.0 / c}, h);
        const ScalarField g = build_obstacle(solved.u.grid);
        const ContactMask mask = contact_set(solved.u, g, default_eps_contact(c, h));
        const auto bands = axis_distance(mask, c, {-3.0 / c});
        const double target = 1.0 / (4.0 * c);
        const double err =
            std::max(std::fabs(bands[0].left + target), std::fabs(bands[0].right - target));
        const bool ok = err <= tol(2.0 * h);
        res.pass = res.pass && ok;
        res.data.push_back({{"c", c}, {"left", bands[0].left}, {"right", bands[0].right},
                            {"target", target}, {"tol", tol(2.0 * h)}, {"pass", ok}});
    }
    res.detail = describe(res.pass, "axis band half-width vs 1/(4c) at x2=-3/c, c in {0.5,1,2}");
    return res;
}

CheckResult VerificationSuite::check_diagonal_lower_bound() {
    CheckResult res{"diagonal_lower_bound", true, "", json::array()};
    for (double c : {0.5, 1.0, 2.0}) {
        const double h = grid_h(c);
        const auto& solved = parallel_solve(c, {-4.0 / c, -4.0 / c}, {8.0 / c, 8.0 / c}, h);
        const GridSpec& grid = solved.u.grid;
        const ScalarField g = build_obstacle(grid);
        const ContactMask mask = contact_set(solved.u, g, default_eps_contact(c, h));
        double worst = std::numeric_limits<double>::infinity();
        std::vector<double> x(2);
        for (std::size_t n : boundary_nodes(mask)) {
            grid.node_point(n, x);
            if (x[0] + x[1] < 0.0) continue;
            worst = std::min(worst, std::fabs(x[0] - x[1]));
        }
        const double floor_value = 1.0 / (2.0 * c) - tol(2.0 * h);
        const bool ok = worst >= floor_value;
        res.pass = res.pass && ok;
        res.data.push_back({{"c", c}, {"min_gap", worst}, {"floor", floor_value}, {"pass", ok}});
    }
    res.detail =
        describe(res.pass, "free-boundary nodes with t >= 0 keep |x1-x2| >= 1/(2c) - 2h");
    return res;
}

CheckResult VerificationSuite::check_dfb_rate() {
    CheckResult res{"dfb_rate", true, "", json::array()};
    const double c = 1.0;
    const double h = grid_h(c);
    const auto& solved = parallel_solve(c, {-4.0, -4.0}, {8.0, 8.0}, h);
    const ScalarField g = build_obstacle(solved.u.grid);
    const ContactMask mask = contact_set(solved.u, g, default_eps_contact(c, h));
    const BoundaryProfile profile = diagonal_profile(mask, c);
    for (double T : {1.0, 2.0}) {
        const double measured = dfb_distance(profile, T, c);
        const double bound = dfb_upper_bound(T, c) + tol(2.0 * h + 1.0 / (T * T * T * T));
        const bool ok = measured <= bound;
        res.pass = res.pass && ok;
        res.data.push_back({{"T", T}, {"d_fb", measured}, {"bound", bound}, {"pass", ok}});
    }
    res.detail = describe(res.pass, "d_FB(T) within the asymptotic rate bound at T in {1,2}");
    return res;
}

CheckResult VerificationSuite::check_sandwich() {
    CheckResult res{"sandwich", true, "", {}};
    const double c = 1.0;
    const double h = grid_h(c);
    const auto& solved = parallel_solve(c, {-4.0, -4.0}, {8.0, 8.0}, h);
    const GridSpec& grid = solved.u.grid;
    const double allowance = tol(5.0 * h);
    long samples = 0;
    double worst_low = std::numeric_limits<double>::infinity();
    double worst_high = std::numeric_limits<double>::infinity();
    const double margin = 2.0 * h;
    std::vector<double> pt(2);
    for (double t = 1.0; t <= 8.0; t += 0.25) {
        for (double s = -2.5; s <= 2.5 + 1e-12; s += 2.0 * h) {
            const RotatedPoint rp{t, s};
            from_rotated(rp, pt[0], pt[1]);
            if (pt[0] < grid.lower(0) + margin || pt[0] > grid.upper(0) - margin ||
                pt[1] < grid.lower(1) + margin || pt[1] > grid.upper(1) - margin) {
                continue;
            }
            const double u_tilde = interpolate(solved.u, pt);
            const double lower = eta_value(rp, c) - allowance;
            const double eps = 1.0 / (4.0 * c * t * t);
            const double upper = phi_upper(rp, c, eps) + allowance;
            worst_low = std::min(worst_low, u_tilde - lower);
            worst_high = std::min(worst_high, upper - u_tilde);
            ++samples;
        }
    }
    res.pass = samples > 0 && worst_low >= 0.0 && worst_high >= 0.0;
    res.data = {{"samples", samples}, {"lower_margin", worst_low},
                {"upper_margin", worst_high}, {"allowance", allowance}};
    res.detail = describe(res.pass, "eta_c - 5h <= u~ <= phi_eps + 5h on rotated samples t >= 1");
    return res;
}

CheckResult VerificationSuite::check_star_shaped() {
    CheckResult res{"star_shaped", true, "", json::array()};
    for (double c : {0.5, 1.0, 2.0}) {
        const double h = grid_h(c);
        const auto& solved = parallel_solve(c, {-4.0 / c, -4.0 / c}, {8.0 / c, 8.0 / c}, h);
        const ScalarField g = build_obstacle(solved.u.grid);
        const double eps = default_eps_contact(c, h);
        const ContactMask mask = contact_set(solved.u, g, eps);
        const double allowance = tol(4.0 * eps + 10.0 * c * h * h * 2);
        const auto report =
            star_shaped_check(mask, solved.u, g, opts_.star_samples, eps, allowance);
        const bool ok = report.pass();
        res.pass = res.pass && ok;
        res.data.push_back({{"c", c}, {"sampled", report.sampled},
                            {"rays", report.rays_checked},
                            {"violations", static_cast<long>(report.violations.size())},
                            {"pass", ok}});
    }
    res.detail = describe(res.pass, "no star-shapedness violations across c in {0.5,1,2}");
    return res;
}

CheckResult VerificationSuite::check_sequential_inclusion() {
    CheckResult res{"sequential_inclusion", false, "", {}};
    const double h = grid_h(1.0);
    const std::vector<double> lo{-4.0, -4.0}, hi{8.0, 8.0};
    const auto& par = parallel_solve(1.0, lo, hi, h);
    const auto& seq = policy_solve(SearchMode::Sequential, Cost{1.0, 0.5}, lo, hi, h);
    const ScalarField g = build_obstacle(par.u.grid);
    const ContactMask par_mask = contact_set(par.u, g, default_eps_contact(1.0, h));
    const ContactMask seq_mask = contact_set(seq.u, g, default_eps_contact(0.5, h));
    const auto inclusion = region_inclusion(par_mask, seq_mask);
    long strict = 0;
    for (std::size_t n = 0; n < par_mask.grid.node_count(); ++n) {
        if (par_mask[n] && !seq_mask[n]) ++strict;
    }
    res.pass = inclusion.included && strict > 0;
    res.data = {{"included", inclusion.included},
                {"violations", static_cast<long>(inclusion.violations.size())},
                {"strict_nodes", strict}};
    res.detail = describe(res.pass,
                          "continuation(parallel c=1) strictly inside continuation(seq c'=0.5)");
    return res;
}

CheckResult VerificationSuite::check_sequential_policy() {
    CheckResult res{"sequential_policy", false, "", {}};
    const double cp = 0.5;
    const double h = grid_h(1.0);
    const auto& seq =
        policy_solve(SearchMode::Sequential, Cost{1.0, cp}, {-4.0, -4.0}, {8.0, 8.0}, h);
    const GridSpec& grid = seq.u.grid;
    long checked = 0, matched = 0;
    std::vector<double> x(2);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (!grid.is_interior(n)) continue;
        if (seq.policy[n] == PolicyField::kStop) continue;
        grid.node_point(n, x);
        if (std::fabs(x[0] - x[1]) <= 0.5 * h) continue;  // on the diagonal
        ++checked;
        const int leader = x[0] >= x[1] ? 0 : 1;
        if (seq.policy[n] == PolicyField::search(leader)) ++matched;
    }
    const double fraction = checked > 0 ? static_cast<double>(matched) / checked : 0.0;

    const ScalarField g = build_obstacle(grid);
    const ContactMask mask = contact_set(seq.u, g, default_eps_contact(cp, h));
    const BoundaryProfile profile = diagonal_profile(mask, cp);
    double s_at_6 = std::numeric_limits<double>::quiet_NaN();
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& sw : profile.s_star) {
        const double gap = std::fabs(sw.t - 6.0);
        if (gap < best_gap) {
            best_gap = gap;
            s_at_6 = sw.s;
        }
    }
    const double target = 1.0 / (4.0 * kSqrt2 * cp);
    const bool policy_ok = fraction >= 1.0 - tol(0.01);
    const bool width_ok = std::fabs(s_at_6 - target) <= tol(3.0 * h);
    res.pass = policy_ok && width_ok;
    res.data = {{"fraction_leader", fraction}, {"checked", checked},
                {"s_star_at_6", s_at_6}, {"target", target}, {"width_tol", tol(3.0 * h)}};
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "leader-search fraction %.5f, s*(6)=%.5f vs 1/(4 sqrt2 c')=%.5f",
                  fraction, s_at_6, target);
    res.detail = describe(res.pass, buf);
    return res;
}

CheckResult VerificationSuite::check_hybrid_regime() {
    CheckResult res{"hybrid_regime", false, "", {}};
    const Cost cost{1.0, 2.0 / 3.0};
    const double h = grid_h(1.0);
    const std::vector<double> lo{-4.0, -4.0}, hi{8.0, 8.0};
    const auto& hyb = policy_solve(SearchMode::Hybrid, cost, lo, hi, h);
    const auto& par = parallel_solve(1.0, lo, hi, h);
    const auto& seq = policy_solve(SearchMode::Sequential, cost, lo, hi, h);

    const GridSpec& grid = hyb.u.grid;
    long band_nodes = 0, parallel_nodes = 0;
    std::vector<double> x(2);
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        if (!grid.is_interior(n)) continue;
        if (hyb.policy[n] == PolicyField::kStop) continue;
        grid.node_point(n, x);
        if (x[0] < 4.0 || x[1] < 4.0 || std::fabs(x[0] - x[1]) > 0.3) continue;
        ++band_nodes;
        if (hyb.policy[n] == PolicyField::kParallel) ++parallel_nodes;
    }

    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        worst = std::min(worst, hyb.u[n] - std::max(par.u[n], seq.u[n]));
    }
    const bool band_ok = band_nodes > 0 && parallel_nodes == band_nodes;
    const bool dominance_ok = worst >= -tol(1e-8);
    res.pass = band_ok && dominance_ok;
    res.data = {{"band_nodes", band_nodes}, {"parallel_nodes", parallel_nodes},
                {"dominance_margin", worst}};
    res.detail = describe(
        res.pass, "hybrid picks PARALLEL on the high diagonal band and dominates both modes");
    return res;
}

CheckResult VerificationSuite::check_rd_values() {
    CheckResult res{"rd_values", false, "", {}};
    const double c = 1.0;
    const double h = grid_h(c);

    const auto& w1 = wd_solve(1, c, default_chart_halfwidth(1, c, 0.0), h);
    const auto r1 = estimate_rd(w1, default_eps_contact(c, h));
    const auto& w2 = wd_solve(2, c, default_chart_halfwidth(2, c, r1.r), h);
    const auto r2 = estimate_rd(w2, default_eps_contact(c, h));
    const auto& w3 = wd_solve(3, c, default_chart_halfwidth(3, c, r2.r), h);
    const auto r3 = estimate_rd(w3, default_eps_contact(c, h));

    const auto report = rd_inequality_check({r1, r2, r3});
    const double target2 = 1.0 / (2.0 * kSqrt2 * c);
    const bool r1_ok = std::fabs(r1.r - 0.25) <= tol(2.0 * h);
    const bool r2_ok = std::fabs(r2.r - target2) <= tol(2.0 * h);
    res.pass = r1_ok && r2_ok && report.pass;
    res.data = {{"r1", r1.r}, {"r2", r2.r}, {"r3", r3.r},
                {"r3_bracket", {r3.r_lo, r3.r_hi}},
                {"pairs", json::array()}};
    for (const auto& pair : report.pairs) {
        res.data["pairs"].push_back({{"d", pair.d}, {"monotone", pair.monotone},
                                     {"inequality", pair.inequality},
                                     {"lhs", pair.lhs}, {"rhs", pair.rhs}});
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf), "r1=%.5f r2=%.5f r3=%.5f (brackets enforce Prop-style order)",
                  r1.r, r2.r, r3.r);
    res.detail = describe(res.pass, buf);
    return res;
}

CheckResult VerificationSuite::check_mc_cross_validation() {
    CheckResult res{"mc_cross_validation", true, "", json::array()};
    const double c = 1.0;
    const double h = grid_h(c);
    const auto& solved = parallel_solve(c, {-4.0, -4.0}, {8.0, 8.0}, h);
    const ScalarField g = build_obstacle(solved.u.grid);
    const ContactMask mask = contact_set(solved.u, g, default_eps_contact(c, h));

    const std::vector<std::vector<double>> probes = {{0.0, 0.0}, {0.5, 0.0}, {1.0, 1.0}};
    for (const auto& probe : probes) {
        const SimEstimate est = simulate_stopping(probe, mask, Cost{c, 0.0}, opts_.mc_dt,
                                                  opts_.mc_paths, opts_.mc_seed, 50.0 / c);
        const double u_probe = interpolate(solved.u, probe);
        const double gap = std::fabs(est.mean - u_probe);
        const double budget = 3.0 * est.stderr_ + tol(0.02);
        const bool ok = gap <= budget && !est.bias_warning;
        res.pass = res.pass && ok;
        res.data.push_back({{"probe", probe}, {"mc_mean", est.mean}, {"stderr", est.stderr_},
                            {"solver_u", u_probe}, {"gap", gap}, {"budget", budget},
                            {"mean_tau", est.mean_stop_time}, {"pass", ok}});
    }

    for (double x : {-0.1, 0.0, 0.1}) {
        const auto oracle = finite_horizon_oracle(std::vector<double>{x}, c, 0.01, 10000);
        const double target = psi_value(x, c);
        const double gap = std::fabs(oracle.value - target);
        const bool ok = gap <= tol(1e-2);
        res.pass = res.pass && ok;
        res.data.push_back({{"oracle_x", x}, {"oracle_value", oracle.value},
                            {"psi", target}, {"gap", gap}, {"pass", ok}});
    }
    res.detail = describe(res.pass, "Monte Carlo and lattice oracle agree with the solver");
    return res;
}

CheckResult VerificationSuite::check_property_suite() {
    CheckResult res{"property_suite", true, "", {}};
    const double h = grid_h(1.0);
    const std::vector<double> lo{-4.0, -4.0}, hi{8.0, 8.0};

    // obstacle dominance on the main solves
    {
        const auto& par = parallel_solve(1.0, lo, hi, h);
        const ScalarField g = build_obstacle(par.u.grid);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < g.grid.node_count(); ++n) {
            worst = std::min(worst, par.u[n] - g[n]);
        }
        const bool ok = worst >= -1e-12;
        res.pass = res.pass && ok;
        res.data["obstacle_dominance_margin"] = worst;
    }

    // cost monotonicity on a shared grid
    {
        const auto& u05 = parallel_solve(0.5, lo, hi, h);
        const auto& u10 = parallel_solve(1.0, lo, hi, h);
        const auto& u20 = parallel_solve(2.0, lo, hi, h);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t n = 0; n < u10.u.grid.node_count(); ++n) {
            worst = std::min(worst, u05.u[n] - u10.u[n]);
            worst = std::min(worst, u10.u[n] - u20.u[n]);
        }
        const bool ok = worst >= -tol(1e-9);
        res.pass = res.pass && ok;
        res.data["cost_monotonicity_margin"] = worst;
    }

    // exchange symmetry of the c=1 solve
    {
        const auto& par = parallel_solve(1.0, lo, hi, h);
        const GridSpec& grid = par.u.grid;
        double worst = 0.0;
        for (int i = 0; i < grid.count(0); ++i) {
            for (int j = 0; j < i; ++j) {
                int a[2] = {i, j}, b[2] = {j, i};
                worst = std::max(worst, std::fabs(par.u[grid.flat_index(a)] -
                                                  par.u[grid.flat_index(b)]));
            }
        }
        const bool ok = worst <= tol(1e-7);
        res.pass = res.pass && ok;
        res.data["exchange_asymmetry"] = worst;
    }

    // refinement consistency at probe points
    {
        const std::vector<std::vector<double>> probes = {{0.0, 0.0}, {1.0, 1.0}, {0.3, -0.5}};
        const double h0 = opts_.resolution_scale / 20.0;
        const auto& ua = parallel_solve(1.0, lo, hi, h0);
        const auto& ub = parallel_solve(1.0, lo, hi, h0 / 2.0);
        const auto& uc = parallel_solve(1.0, lo, hi, h0 / 4.0);
        double inc_coarse = 0.0, inc_fine = 0.0;
        for (const auto& p : probes) {
            inc_coarse += std::pow(interpolate(ub.u, p) - interpolate(ua.u, p), 2);
            inc_fine += std::pow(interpolate(uc.u, p) - interpolate(ub.u, p), 2);
        }
        inc_coarse = std::sqrt(inc_coarse);
        inc_fine = std::sqrt(inc_fine);
        const bool ok = inc_coarse >= 2.0 * inc_fine - tol(1e-12);
        res.pass = res.pass && ok;
        res.data["refinement_increments"] = {inc_coarse, inc_fine};
    }

    // deterministic reproducibility: bitwise identical re-solve and re-simulation
    {
        const GridSpec grid({-2.0, -2.0}, {4.0, 4.0}, 1.0 / 40.0);
        const ScalarField bc = truncation_boundary_values(grid, Cost{1.0, 0.0},
                                                          SearchMode::Parallel);
        const auto a = solve_parallel(grid, Cost{1.0, 0.0}, bc, {});
        const auto b = solve_parallel(grid, Cost{1.0, 0.0}, bc, {});
        bool identical = a.u.values == b.u.values;
        const ScalarField g = build_obstacle(grid);
        const ContactMask mask = contact_set(a.u, g, default_eps_contact(1.0, grid.spacing()));
        const std::vector<double> probe{0.0, 0.0};
        const SimEstimate s1 =
            simulate_stopping(probe, mask, Cost{1.0, 0.0}, 1e-3, 2000, opts_.mc_seed, 50.0);
        const SimEstimate s2 =
            simulate_stopping(probe, mask, Cost{1.0, 0.0}, 1e-3, 2000, opts_.mc_seed, 50.0);
        identical = identical && s1.mean == s2.mean && s1.stderr_ == s2.stderr_ &&
                    s1.mean_stop_time == s2.mean_stop_time;
        res.pass = res.pass && identical;
        res.data["reproducible"] = identical;
    }

    res.detail = describe(res.pass,
                          "dominance, cost monotonicity, symmetry, refinement, reproducibility");
    return res;
}

}  // namespace parsearch
