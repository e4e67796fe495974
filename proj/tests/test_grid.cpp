#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "parsearch/grid.hpp"

using namespace parsearch;

TEST_CASE("grid construction validates its inputs") {
    CHECK_THROWS_AS((GridSpec({0.0}, {1.0}, -0.1)), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec({0.0}, {1.0}, 0.3)), std::invalid_argument);  // non-multiple
    CHECK_THROWS_AS((GridSpec({0.0}, {0.1}, 0.1)), std::invalid_argument);  // 2 nodes
    CHECK_THROWS_AS((GridSpec({1.0}, {0.0}, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec({0.0, 0.0}, {1.0}, 0.1)), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec({0.0, 0.0}, {10000.0, 10000.0}, 1e-3)), std::invalid_argument);

    const GridSpec g({-1.0, -2.0}, {1.0, 2.0}, 0.5);
    CHECK(g.dimension() == 2);
    CHECK(g.count(0) == 5);
    CHECK(g.count(1) == 9);
    CHECK(g.node_count() == 45);
}

TEST_CASE("index helpers round-trip and expose interiors") {
    const GridSpec g({-1.0, 0.0, 2.0}, {1.0, 1.0, 3.0}, 0.25);
    std::vector<int> mi(3);
    std::vector<double> x(3);
    for (std::size_t n = 0; n < g.node_count(); n += 7) {
        g.multi_index(n, mi);
        CHECK(g.flat_index(mi) == n);
        g.node_point(n, x);
        for (int a = 0; a < 3; ++a) {
            CHECK(x[a] == doctest::Approx(g.lower(a) + mi[a] * g.spacing()));
        }
        bool interior = true;
        for (int a = 0; a < 3; ++a) {
            interior = interior && mi[a] > 0 && mi[a] < g.count(a) - 1;
        }
        CHECK(g.is_interior(n) == interior);
    }
}

TEST_CASE("nearest node clamps to the box") {
    const GridSpec g({0.0, 0.0}, {1.0, 1.0}, 0.5);
    const std::vector<double> inside{0.6, 0.2};
    std::vector<int> mi(2);
    g.multi_index(g.nearest_node(inside), mi);
    CHECK(mi[0] == 1);
    CHECK(mi[1] == 0);
    const std::vector<double> outside{9.0, -9.0};
    g.multi_index(g.nearest_node(outside), mi);
    CHECK(mi[0] == 2);
    CHECK(mi[1] == 0);
}

TEST_CASE("obstacle is the componentwise max against zero") {
    const GridSpec g({-2.0, -2.0}, {2.0, 2.0}, 0.5);
    const ScalarField f = build_obstacle(g);
    auto at = [&](double a, double b) {
        const std::vector<double> p{a, b};
        return f[g.nearest_node(p)];
    };
    CHECK(at(1.0, -2.0) == doctest::Approx(1.0));
    CHECK(at(-1.0, -2.0) == doctest::Approx(0.0));
    CHECK(at(0.5, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("obstacle is symmetric under coordinate permutation") {
    const GridSpec g({-1.0, -1.0}, {1.5, 1.5}, 0.25);
    const ScalarField f = build_obstacle(g);
    for (int i = 0; i < g.count(0); ++i) {
        for (int j = 0; j < g.count(1); ++j) {
            int a[2] = {i, j}, b[2] = {j, i};
            CHECK(f[g.flat_index(a)] == f[g.flat_index(b)]);
        }
    }
}

TEST_CASE("discrete laplacian is exact on quadratics and kills affine fields") {
    const GridSpec g({-1.0, -1.0}, {1.0, 1.0}, 0.125);
    ScalarField quad(g), affine(g);
    std::vector<double> x(2);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        g.node_point(n, x);
        quad[n] = x[0] * x[0];
        affine[n] = 3.0 * x[0] - 2.0 * x[1] + 0.7;
    }
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        if (!g.is_interior(n)) continue;
        CHECK(discrete_laplacian(quad, n) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(discrete_laplacian(affine, n) == doctest::Approx(0.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(discrete_laplacian(quad, 0), std::invalid_argument);
}

TEST_CASE("discrete laplacian is linear in the field") {
    const GridSpec g({0.0, 0.0}, {1.0, 1.0}, 0.25);
    std::mt19937 rng(3);
    ScalarField f1(g), f2(g), combo(g);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        f1[n] = std::generate_canonical<double, 53>(rng);
        f2[n] = std::generate_canonical<double, 53>(rng);
        combo[n] = 2.5 * f1[n] - 0.75 * f2[n];
    }
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        if (!g.is_interior(n)) continue;
        CHECK(discrete_laplacian(combo, n) ==
              doctest::Approx(2.5 * discrete_laplacian(f1, n) - 0.75 * discrete_laplacian(f2, n))
                  .epsilon(1e-9));
    }
}

TEST_CASE("laplacian of the rotated channel profile matches its curvature") {
    // sample eta_c on a (t, s) grid; the second derivative is 2c in the
    // parabolic strip and 0 outside, exactly, except within one cell of
    // the junction
    const double c = 1.0;
    const double h = 0.01;
    const GridSpec g({-1.0, -1.0}, {1.0, 1.0}, h);
    ScalarField f(g);
    std::vector<double> x(2);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        g.node_point(n, x);
        f[n] = eta_value({x[0], x[1]}, c);
    }
    const double junction = 1.0 / (2.0 * std::sqrt(2.0) * c);
    for (std::size_t n = 0; n < g.node_count(); n += 3) {
        if (!g.is_interior(n)) continue;
        g.node_point(n, x);
        const double dist = std::fabs(std::fabs(x[1]) - junction);
        const double lap = discrete_laplacian(f, n);
        if (std::fabs(x[1]) < junction && dist > h) {
            CHECK(lap == doctest::Approx(2.0 * c).epsilon(1e-9));
        } else if (dist > h) {
            CHECK(lap == doctest::Approx(0.0).epsilon(1e-9));
        } else {
            CHECK(lap >= -1e-9);
            CHECK(lap <= 2.0 * c + 1e-9);
        }
    }
}

TEST_CASE("boundary data hits the far-field profiles") {
    SUBCASE("d=1 deep stopping face") {
        const GridSpec g({-2.0}, {2.0}, 0.125);
        const ScalarField bc = truncation_boundary_values(g, Cost{1.0, 0.0},
                                                          SearchMode::Parallel);
        CHECK(bc[g.node_count() - 1] == doctest::Approx(2.0));
        CHECK(bc[0] == doctest::Approx(0.0));
    }
    SUBCASE("d=2 diagonal and deep faces") {
        const GridSpec g({-5.0, -5.0}, {5.0, 5.0}, 0.25);
        const ScalarField bc = truncation_boundary_values(g, Cost{1.0, 0.0},
                                                          SearchMode::Parallel);
        const std::vector<double> corner{5.0, 5.0};
        CHECK(bc[g.nearest_node(corner)] == doctest::Approx(5.125));
        const std::vector<double> low{-5.0, -5.0};
        CHECK(bc[g.nearest_node(low)] == doctest::Approx(0.0));
        const std::vector<double> axis{0.0, -5.0};
        CHECK(bc[g.nearest_node(axis)] == doctest::Approx(0.0625));
    }
}

TEST_CASE("boundary data never falls below the obstacle") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        const double c = 0.5 + 1.5 * std::generate_canonical<double, 53>(rng);
        const GridSpec g({-6.0 / c, -6.0 / c}, {6.0 / c, 6.0 / c}, 0.5 / c);
        for (SearchMode mode :
             {SearchMode::Parallel, SearchMode::Sequential, SearchMode::Hybrid}) {
            const Cost cost{c, mode == SearchMode::Hybrid ? 0.75 * c : 0.5 * c};
            const ScalarField bc = truncation_boundary_values(g, cost, mode);
            const ScalarField obs = build_obstacle(g);
            for (std::size_t n = 0; n < g.node_count(); ++n) {
                if (g.is_interior(n)) continue;
                CHECK(bc[n] >= obs[n] - 1e-12);
            }
        }
    }
}

TEST_CASE("boundary data rejects domains the channels escape") {
    const GridSpec tiny({-0.125, -0.125}, {0.125, 0.125}, 0.0625);
    CHECK_THROWS_AS((truncation_boundary_values(tiny, Cost{1.0, 0.0}, SearchMode::Parallel)),
                    std::invalid_argument);
}

TEST_CASE("interpolation reproduces multilinear fields") {
    const GridSpec g({0.0, 0.0}, {1.0, 1.0}, 0.25);
    ScalarField f(g);
    std::vector<double> x(2);
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        g.node_point(n, x);
        f[n] = 2.0 * x[0] - 3.0 * x[1] + x[0] * x[1];
    }
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        const std::vector<double> p{std::generate_canonical<double, 53>(rng),
                                    std::generate_canonical<double, 53>(rng)};
        CHECK(interpolate(f, p) ==
              doctest::Approx(2.0 * p[0] - 3.0 * p[1] + p[0] * p[1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS((interpolate(f, std::vector<double>{2.0, 0.0})), std::invalid_argument);
}
