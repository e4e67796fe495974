#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "parsearch/free_boundary.hpp"
#include "parsearch/highdim.hpp"

using namespace parsearch;

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
}

TEST_CASE("chart bases are orthonormal and orthogonal to the diagonal") {
    for (int d : {2, 3, 4}) {
        const HyperplaneChart chart = build_chart(d);
        REQUIRE(chart.chart_d() == d - 1);
        for (int i = 0; i < d - 1; ++i) {
            double diag_dot = 0.0;
            for (int k = 0; k < d; ++k) diag_dot += chart.basis[i][k];
            CHECK(std::fabs(diag_dot) < 1e-12);
            for (int j = 0; j <= i; ++j) {
                double dot = 0.0;
                for (int k = 0; k < d; ++k) dot += chart.basis[i][k] * chart.basis[j][k];
                CHECK(dot == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(build_chart(1), std::invalid_argument);
}

TEST_CASE("d=2 chart reduces to the rotated s axis") {
    const HyperplaneChart chart = build_chart(2);
    CHECK(chart.basis[0][0] == doctest::Approx(1.0 / kSqrt2));
    CHECK(chart.basis[0][1] == doctest::Approx(-1.0 / kSqrt2));
    for (double s : {-1.0, -0.3, 0.0, 0.7, 2.0}) {
        const std::vector<double> y{s};
        CHECK(chart.rho(y) == doctest::Approx(std::fabs(s) / kSqrt2));
    }
}

TEST_CASE("d=3 chart obstacle at named points") {
    const HyperplaneChart chart = build_chart(3);
    const std::vector<double> origin{0.0, 0.0};
    CHECK(chart.rho(origin) == doctest::Approx(0.0));

    // x = (a, -a/2, -a/2) lies on the hyperplane with max coordinate a
    const double a = 0.8;
    std::vector<double> x{a, -a / 2.0, -a / 2.0};
    std::vector<double> y(2);
    chart.project(x, y);
    CHECK(chart.rho(y) == doctest::Approx(a).epsilon(1e-12));
    std::vector<double> back(3);
    chart.embed(y, back);
    for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-12));
}

TEST_CASE("the d=2 auxiliary solve reproduces the channel profile") {
    const double h = 1.0 / 80.0;
    const auto wd = solve_wd(2, 1.0, 4.0, h, {});
    const GridSpec& grid = wd.omega.grid;
    // omega(0) = 1/(8c)
    const std::vector<double> origin{0.0};
    CHECK(interpolate(wd.omega, origin) == doctest::Approx(0.125).epsilon(2e-3));
    // contact exactly outside |s| = 1/(2 sqrt2 c)
    const ContactMask mask = contact_set(wd.omega, wd.rho, default_eps_contact(1.0, h));
    for (int i = 0; i < grid.count(0); ++i) {
        const double s = grid.coordinate(0, i);
        if (std::fabs(s) > 0.3536 + 2.0 * h) CHECK(mask[static_cast<std::size_t>(i)]);
        if (std::fabs(s) < 0.3536 - 2.0 * h) CHECK(!mask[static_cast<std::size_t>(i)]);
    }
    // the solved profile matches eta pointwise
    for (double s : {-0.5, -0.2, 0.0, 0.1, 0.45}) {
        const std::vector<double> y{s};
        CHECK(interpolate(wd.omega, y) ==
              doctest::Approx(eta_value({0.0, s}, 1.0)).epsilon(5e-3));
    }
}

TEST_CASE("the d=1 auxiliary solve reproduces psi") {
    const double h = 1.0 / 80.0;
    const auto wd = solve_wd(1, 1.0, 4.0, h, {});
    for (double x : {-0.5, -0.2, 0.0, 0.2, 0.5}) {
        const std::vector<double> p{x};
        CHECK(interpolate(wd.omega, p) == doctest::Approx(psi_value(x, 1.0)).epsilon(5e-3));
    }
}

TEST_CASE("the d=3 chart solve dominates its obstacle and is symmetric") {
    const double h = 1.0 / 20.0;
    const auto wd = solve_wd(3, 1.0, 6.0, h, {});
    const GridSpec& grid = wd.omega.grid;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        CHECK(wd.omega[n] >= wd.rho[n] - 1e-12);
    }
    // coordinate permutations act as the dihedral group on the chart
    const HyperplaneChart& chart = wd.chart;
    std::vector<double> y(2), x(3), px(3), py(2);
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (double y0 : {-0.4, 0.0, 0.6}) {
        for (double y1 : {-0.5, 0.2, 0.5}) {
            y = {y0, y1};
            chart.embed(y, x);
            const double base = interpolate(wd.omega, y);
            for (const auto& perm : perms) {
                for (int i = 0; i < 3; ++i) px[i] = x[perm[i]];
                chart.project(px, py);
                CHECK(interpolate(wd.omega, py) == doctest::Approx(base).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("r_d estimates match the closed-form radii") {
    const double h = 1.0 / 80.0;
    const auto w1 = solve_wd(1, 1.0, 4.0, h, {});
    const auto r1 = estimate_rd(w1, default_eps_contact(1.0, h));
    CHECK(std::fabs(r1.r - 0.25) <= 2.0 * h);
    CHECK(r1.r_hi - r1.r_lo <= 2.0 * h);

    const auto w2 = solve_wd(2, 1.0, 8.0, h, {});
    const auto r2 = estimate_rd(w2, default_eps_contact(1.0, h));
    CHECK(std::fabs(r2.r - 1.0 / (2.0 * kSqrt2)) <= 2.0 * h);

    CHECK(r2.r_lo > r1.r_hi);  // increasing radii, bracket-rigorous
}

TEST_CASE("rd inequality report") {
    RdEstimate r1{1, 0.25, 0.24, 0.26, 0.01};
    RdEstimate r2{2, 0.35, 0.34, 0.36, 0.01};
    RdEstimate r3{3, 0.48, 0.47, 0.49, 0.01};
    const auto report = rd_inequality_check({r1, r2, r3});
    CHECK(report.pass);
    REQUIRE(report.pairs.size() == 2);
    CHECK(report.pairs[0].monotone);
    CHECK(report.pairs[1].monotone);
    CHECK(report.pairs[1].inequality);
    CHECK(report.pairs[1].lhs == doctest::Approx((3.0 - 2.0 - 1.0 / 3.0) * 0.47 * 0.47));

    const auto trivial = rd_inequality_check({r1});
    CHECK(trivial.trivial);
    CHECK(trivial.pass);

    CHECK_THROWS_AS(rd_inequality_check({r1, r3}), std::invalid_argument);

    RdEstimate bad{3, 0.30, 0.29, 0.31, 0.01};
    CHECK(!rd_inequality_check({r2, bad}).pass);
}

TEST_CASE("estimate_rd errors when nothing contacts inside the trusted region") {
    const double h = 1.0 / 40.0;
    const auto wd = solve_wd(2, 1.0, 4.0, h, {});
    WdSolution open = wd;
    open.omega.values.assign(open.omega.values.size(), 100.0);  // artificially non-contact
    CHECK_THROWS_AS(estimate_rd(open, 1e-8), std::invalid_argument);
}

TEST_CASE("upper region containment") {
    const double h = 1.0 / 20.0;
    const GridSpec grid({-4.0, -4.0}, {8.0, 8.0}, h);
    const Cost cost{1.0, 0.0};
    const auto solved =
        solve_parallel(grid, cost, truncation_boundary_values(grid, cost, SearchMode::Parallel), {});
    const ScalarField g = build_obstacle(grid);
    const double eps = default_eps_contact(1.0, h);

    const auto far = upper_region_check(solved.u, g, 1.0, 2.0, eps);
    CHECK(far.gamma == doctest::Approx(4.0));
    CHECK(far.sampled > 0);
    CHECK(far.fraction == doctest::Approx(1.0));

    const auto near = upper_region_check(solved.u, g, 1.0, 0.2, eps);
    CHECK(near.fraction < 1.0);

    CHECK_THROWS_AS(upper_region_check(solved.u, g, 1.0, 100.0, eps), std::invalid_argument);
}

TEST_CASE("w_d grows with the number of alternatives") {
    const double h = 1.0 / 40.0;
    const auto w1 = solve_wd(1, 1.0, 4.0, h, {});
    const auto w2 = solve_wd(2, 1.0, 6.0, h, {});
    const auto rep21 = wd_monotonicity_check(w2, w1, 1e-3);
    CHECK(rep21.compared > 100);
    CHECK(rep21.pass);

    const auto w3 = solve_wd(3, 1.0, 6.0, 1.0 / 20.0, {});
    const auto w2c = solve_wd(2, 1.0, 6.0, 1.0 / 20.0, {});
    const auto rep32 = wd_monotonicity_check(w3, w2c, 2e-3);
    CHECK(rep32.compared > 100);
    CHECK(rep32.pass);

    CHECK_THROWS_AS(wd_monotonicity_check(w3, w1, 1e-3), std::invalid_argument);
    auto wrong_c = w1;
    wrong_c.c = 2.0;
    CHECK_THROWS_AS(wd_monotonicity_check(w2, wrong_c, 1e-3), std::invalid_argument);
}

TEST_CASE("closed-form containment of the d=2 channel in the d=1 profile on the axis") {
    // embedding the one-alternative problem at x2 = 0: eta_c >= psi_c there
    for (double x1 = -2.0; x1 <= 2.0; x1 += 0.01) {
        const RotatedPoint p = to_rotated(x1, 0.0);
        CHECK(eta_value(p, 1.0) >= psi_value(x1, 1.0) - 1e-12);
    }
}

TEST_CASE("wd_value reconstructs the full field from the chart") {
    const double h = 1.0 / 40.0;
    const auto w2 = solve_wd(2, 1.0, 6.0, h, {});
    // along the diagonal the reduced field shifts linearly
    for (double a : {-0.5, 0.0, 1.0, 2.0}) {
        const std::vector<double> x{a, a};
        CHECK(wd_value(w2, x) == doctest::Approx(a + 0.125).epsilon(5e-3));
    }
    // off-diagonal matches eta
    const std::vector<double> x{1.2, 0.4};
    const RotatedPoint p = to_rotated(1.2, 0.4);
    CHECK(wd_value(w2, x) == doctest::Approx(eta_value(p, 1.0)).epsilon(5e-3));
}

TEST_CASE("lemma-7 style decay: the full boundary approaches the channel boundary") {
    const double h = 1.0 / 20.0;
    const GridSpec grid({-4.0, -4.0}, {8.0, 8.0}, h);
    const Cost cost{1.0, 0.0};
    const auto solved =
        solve_parallel(grid, cost, truncation_boundary_values(grid, cost, SearchMode::Parallel), {});
    const ScalarField g = build_obstacle(grid);
    const ContactMask mask = contact_set(solved.u, g, default_eps_contact(1.0, h));
    const BoundaryProfile profile = diagonal_profile(mask, 1.0);
    const double d2 = dfb_distance(profile, 2.0, 1.0);
    const double d4 = dfb_distance(profile, 4.0, 1.0);
    CHECK(d4 <= d2 + kSqrt2 * h);
}
