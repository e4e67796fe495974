#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "parsearch/free_boundary.hpp"
#include "parsearch/solver.hpp"

using namespace parsearch;

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

struct Solved {
    GridSpec grid;
    ScalarField u;
    ScalarField g;
    ContactMask mask;
};

// one shared coarse solve for the geometry tests
const Solved& solved_c1() {
    static const Solved s = [] {
        const double h = 1.0 / 20.0;
        const GridSpec grid({-4.0, -4.0}, {8.0, 8.0}, h);
        const Cost cost{1.0, 0.0};
        auto res =
            solve_parallel(grid, cost, truncation_boundary_values(grid, cost, SearchMode::Parallel), {});
        ScalarField g = build_obstacle(grid);
        ContactMask mask = contact_set(res.u, g, default_eps_contact(1.0, h));
        return Solved{grid, std::move(res.u), std::move(g), std::move(mask)};
    }();
    return s;
}

}  // namespace

TEST_CASE("contact classification") {
    const auto& s = solved_c1();
    const std::vector<double> deep{-3.5, -3.5};
    CHECK(s.mask[s.grid.nearest_node(deep)]);
    const std::vector<double> origin{0.0, 0.0};
    CHECK(!s.mask[s.grid.nearest_node(origin)]);

    // u == g exactly marks everything
    const ContactMask all = contact_set(s.g, s.g, 1e-12);
    for (std::size_t n = 0; n < s.grid.node_count(); ++n) CHECK(all[n]);

    const GridSpec other({0.0, 0.0}, {1.0, 1.0}, 0.5);
    CHECK_THROWS_AS(contact_set(s.u, ScalarField(other), 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(contact_set(s.u, s.g, 0.0), std::invalid_argument);
}

TEST_CASE("interface nodes have both phases next to them") {
    const auto& s = solved_c1();
    const auto nodes = boundary_nodes(s.mask);
    CHECK(nodes.size() > 50);
    std::vector<int> mi(2);
    for (std::size_t n : nodes) {
        s.grid.multi_index(n, mi);
        bool has_contact = s.mask[n];
        bool has_open = !s.mask[n];
        for (int a = 0; a < 2; ++a) {
            if (mi[a] > 0) {
                const bool v = s.mask[n - s.grid.stride(a)];
                has_contact = has_contact || v;
                has_open = has_open || !v;
            }
            if (mi[a] + 1 < s.grid.count(a)) {
                const bool v = s.mask[n + s.grid.stride(a)];
                has_contact = has_contact || v;
                has_open = has_open || !v;
            }
        }
        CHECK(has_contact);
        CHECK(has_open);
    }
}

TEST_CASE("axis band widths approach 1/(4c) and widen toward the origin") {
    const auto& s = solved_c1();
    const double h = s.grid.spacing();
    const auto bands = axis_distance(s.mask, 1.0, {-3.0, -1.0});
    CHECK(std::fabs(bands[0].right - 0.25) <= 2.0 * h);
    CHECK(std::fabs(bands[0].left + 0.25) <= 2.0 * h);
    // the band at -1 is at least as wide as at -3
    CHECK(bands[1].right - bands[1].left >= bands[0].right - bands[0].left - 1e-12);

    CHECK_THROWS_AS(axis_distance(s.mask, 1.0, {100.0}), std::invalid_argument);
    ContactMask full(s.grid, true);
    CHECK_THROWS_AS(axis_distance(full, 1.0, {-3.0}), std::invalid_argument);
}

TEST_CASE("axis band scales with the search cost") {
    const double c = 2.0;
    const double h = 1.0 / (20.0 * c);
    const GridSpec grid({-4.0 / c, -4.0 / c}, {8.0 / c, 8.0 / c}, h);
    const Cost cost{c, 0.0};
    const auto res =
        solve_parallel(grid, cost, truncation_boundary_values(grid, cost, SearchMode::Parallel), {});
    const ScalarField g = build_obstacle(grid);
    const ContactMask mask = contact_set(res.u, g, default_eps_contact(c, h));
    const auto bands = axis_distance(mask, c, {-3.0 / c});
    CHECK(std::fabs(bands[0].right - 1.0 / (4.0 * c)) <= 2.0 * h);
}

TEST_CASE("diagonal profile stays outside the channel and tightens downstream") {
    const auto& s = solved_c1();
    const double h = s.grid.spacing();
    const BoundaryProfile profile = diagonal_profile(s.mask, 1.0);
    REQUIRE(!profile.s_star.empty());
    const double target = 1.0 / (2.0 * kSqrt2);
    double prev_s = std::numeric_limits<double>::infinity();
    for (const auto& sw : profile.s_star) {
        CHECK(sw.s >= target - 2.0 * h);
        if (sw.t >= 0.5) {
            CHECK(sw.s <= prev_s + kSqrt2 * h + 1e-12);
            prev_s = std::min(prev_s, sw.s);
        }
    }
    // d_FB is non-increasing in T
    const double d1 = dfb_distance(profile, 1.0, 1.0);
    const double d2 = dfb_distance(profile, 2.0, 1.0);
    const double d4 = dfb_distance(profile, 4.0, 1.0);
    CHECK(d2 <= d1 + 1e-12);
    CHECK(d4 <= d2 + 1e-12);
    CHECK_THROWS_AS(dfb_distance(profile, 100.0, 1.0), std::invalid_argument);
}

TEST_CASE("gamma nodes respect the diagonal lower bound for t >= 0") {
    const auto& s = solved_c1();
    const double h = s.grid.spacing();
    std::vector<double> x(2);
    for (std::size_t n : boundary_nodes(s.mask)) {
        s.grid.node_point(n, x);
        if (x[0] + x[1] < 0.0) continue;
        CHECK(std::fabs(x[0] - x[1]) >= 0.5 - 2.0 * h);
    }
}

TEST_CASE("star-shapedness holds for solved fields") {
    const auto& s = solved_c1();
    const auto report =
        star_shaped_check(s.mask, s.u, s.g, 10000, default_eps_contact(1.0, s.grid.spacing()));
    CHECK(report.sampled > 100);
    CHECK(report.rays_checked > 100);
    CHECK(report.violations.empty());
}

TEST_CASE("deep stopping rays stay stopped under scaling") {
    const auto& s = solved_c1();
    const std::vector<double> x{-3.0, -3.0};
    CHECK(s.mask[s.grid.nearest_node(x)]);
    const std::vector<double> y{-3.3, -3.3};  // 1.1 x
    CHECK(s.mask[s.grid.nearest_node(y)]);
}

TEST_CASE("star-shape checker flags a constructed hole") {
    const GridSpec grid({-2.0, -2.0}, {2.0, 2.0}, 0.05);
    ScalarField g(grid, 0.0);
    ScalarField u(grid, 0.0);
    std::vector<double> x(2);
    // contact blob near the origin, an open ring outside it
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        grid.node_point(n, x);
        const double r = std::hypot(x[0], x[1]);
        u[n] = (r > 0.8 && r < 1.4) ? 0.5 : 0.0;
    }
    const ContactMask mask = contact_set(u, g, 1e-8);
    const auto report = star_shaped_check(mask, u, g, 10000, 1e-8);
    CHECK(!report.violations.empty());
}

TEST_CASE("empty sample set passes trivially") {
    const GridSpec grid({-2.0, -2.0}, {2.0, 2.0}, 0.25);
    const ScalarField g(grid, 0.0);
    ScalarField u(grid, 1.0);  // nowhere in contact
    const ContactMask mask = contact_set(u, g, 1e-8);
    const auto report = star_shaped_check(mask, u, g, 10000, 1e-8);
    CHECK(report.sampled == 0);
    CHECK(report.violations.empty());
}

TEST_CASE("region inclusion is reflexive and detects violations") {
    const auto& s = solved_c1();
    const auto self = region_inclusion(s.mask, s.mask);
    CHECK(self.included);
    CHECK(self.violations.empty());

    ContactMask bigger = s.mask;  // stop more aggressively somewhere open
    const std::vector<double> origin{0.0, 0.0};
    bigger.set(s.grid.nearest_node(origin), true);
    const auto rep = region_inclusion(s.mask, bigger);
    CHECK(!rep.included);
    CHECK(rep.violations.size() == 1);

    const GridSpec other({0.0, 0.0}, {1.0, 1.0}, 0.5);
    CHECK_THROWS_AS(region_inclusion(s.mask, ContactMask(other)), std::invalid_argument);
}

TEST_CASE("default contact tolerance scales with the stencil error") {
    CHECK(default_eps_contact(1.0, 0.1) == doctest::Approx(0.01));
    CHECK(default_eps_contact(2.0, 1e-3) == doctest::Approx(2e-6));
    CHECK(default_eps_contact(1.0, 1e-6) == doctest::Approx(1e-8));
}
