#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include <diffagg/analysis.hpp>
#include <diffagg/errors.hpp>
#include <diffagg/grid.hpp>
#include <diffagg/rng.hpp>

#include "oracles.hpp"

using namespace diffagg;

namespace {

GridDensity make_density(const Grid& g, std::vector<double> values, double time = 0.0) {
    GridDensity u;
    u.grid = g;
    u.values = std::move(values);
    u.time = time;
    return u;
}

} // namespace

TEST_CASE("histogram puts concentrated samples in one cell") {
    Grid g{0.0, 0.25, 8};
    // all samples inside cell 5 = [1.25, 1.5)
    std::vector<double> pos(120, 1.3);
    const HistogramResult h = density_histogram(pos, g, 40, 3);
    CHECK(h.dropped == 0);
    for (std::size_t i = 0; i < 8; ++i) {
        if (i == 5)
            CHECK(h.density.values[i] == 4.0);  // 1/dx exactly
        else
            CHECK(h.density.values[i] == 0.0);
    }
    CHECK(mass(h.density) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("histogram bins are half-open at cell boundaries") {
    Grid g{0.0, 0.25, 4};
    // 0.25 is the left edge of cell 1; 0.5 the left edge of cell 2
    const std::vector<double> pos = {0.25, 0.4999999, 0.5};
    const HistogramResult h = density_histogram(pos, g, 3, 1);
    CHECK(h.density.values[0] == 0.0);
    CHECK(h.density.values[1] == doctest::Approx(2.0 / (3.0 * 0.25)).epsilon(1e-15));
    CHECK(h.density.values[2] == doctest::Approx(1.0 / (3.0 * 0.25)).epsilon(1e-15));
}

TEST_CASE("histogram reports out-of-range samples") {
    Grid g{0.0, 0.5, 4};
    const std::vector<double> pos = {-0.1, 0.1, 1.0, 2.0, 2.5};  // 2.0 is x_max
    const HistogramResult h = density_histogram(pos, g, 5, 1);
    CHECK(h.dropped == 3);
    // mass accounts only for binned samples
    CHECK(mass(h.density) == doctest::Approx(2.0 / 5.0).epsilon(1e-13));
}

TEST_CASE("histogram of uniform samples approximates the flat density") {
    Grid g{0.0, 0.1, 10};
    RngStream rng = RngStream::from_seed(8);
    const std::size_t n = 1000000;
    std::vector<double> pos(n);
    for (auto& x : pos) x = rng.next_uniform();
    const HistogramResult h = density_histogram(pos, g, n, 1);
    CHECK(h.dropped == 0);
    // each cell count is Binomial(n, 0.1): 3 sigma on the density scale
    const double sigma = std::sqrt(0.1 * 0.9 / static_cast<double>(n)) / 0.1;
    for (double v : h.density.values) CHECK(std::abs(v - 1.0) <= 3.5 * sigma);
    CHECK(mass(h.density) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("error norms on hand data") {
    Grid g{0.0, 0.25, 4};
    const auto u = make_density(g, {1.0, 2.0, 3.0, 4.0}, 1.0);
    const auto v = make_density(g, {1.0, 2.5, 3.0, 4.0}, 1.0);
    // single snapshot, single differing cell |e| = 0.5
    const std::vector<GridDensity> su = {u}, sv = {v};
    CHECK(error_norm(su, sv, 1.0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(error_norm(su, sv, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(0.5).epsilon(1e-15));
    CHECK(error_norm(su, sv, 2.0) ==
          doctest::Approx(std::sqrt(0.25 * 0.25)).epsilon(1e-15));

    // p = 2 with e = (3, 4) and dx = 1 gives sqrt(9 + 16) = 5
    Grid g2{0.0, 1.0, 3};
    const auto a = make_density(g2, {3.0, 0.0, 4.0});
    const auto z = make_density(g2, {0.0, 0.0, 0.0});
    CHECK(error_norm({a}, {z}, 2.0) == doctest::Approx(5.0).epsilon(1e-15));

    // identical series give zero
    CHECK(error_norm(su, su, 1.0) == 0.0);

    // max over snapshots: a second pair with larger error dominates
    const auto u2 = make_density(g, {0.0, 0.0, 0.0, 0.0}, 2.0);
    const auto v2 = make_density(g, {0.0, 4.0, 0.0, 0.0}, 2.0);
    CHECK(error_norm({u, u2}, {v, v2}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("error norm input validation") {
    Grid g{0.0, 0.25, 4};
    Grid other{0.0, 0.5, 4};
    const auto u = make_density(g, {1.0, 2.0, 3.0, 4.0}, 1.0);
    const auto w = make_density(other, {1.0, 2.0, 3.0, 4.0}, 1.0);
    CHECK_THROWS_AS(error_norm({u}, {w}, 1.0), std::invalid_argument);
    const auto shifted = make_density(g, {1.0, 2.0, 3.0, 4.0}, 2.0);
    CHECK_THROWS_AS(error_norm({u}, {shifted}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(error_norm({u}, {u, u}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(error_norm({}, {}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(error_norm({u}, {u}, 0.5), std::domain_error);
}

TEST_CASE("eoc identities") {
    // halving errors give order 1, quartering gives order 2
    const std::vector<double> halves = {8.0, 4.0, 2.0, 1.0};
    for (double q : eoc(halves)) CHECK(q == 1.0);
    const std::vector<double> quarters = {16.0, 4.0, 1.0};
    for (double q : eoc(quarters)) CHECK(q == 2.0);
    // geometric ratio r gives log2(r) exactly up to rounding
    const std::vector<double> geo = {1.0, 1.0 / 3.0, 1.0 / 9.0};
    for (double q : eoc(geo)) CHECK(q == doctest::Approx(std::log2(3.0)).epsilon(1e-14));
    // reference-table spot check
    const std::vector<double> pub = {23.745e-3, 12.298e-3};
    CHECK(eoc(pub)[0] == doctest::Approx(0.949).epsilon(5e-4));

    CHECK_THROWS_AS(eoc(std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(eoc(std::vector<double>{1.0, -2.0}), std::domain_error);
}

TEST_CASE("running supremum is the cumulative max") {
    Grid g{0.0, 1.0, 3};
    const std::vector<GridDensity> series = {
        make_density(g, {0.0, 2.0, 0.0}, 0.0),
        make_density(g, {0.5, 1.0, 0.5}, 1.0),
        make_density(g, {0.0, 3.0, 0.0}, 2.0),
        make_density(g, {0.0, 2.5, 0.0}, 3.0),
    };
    const std::vector<double> sup = running_supremum(series);
    REQUIRE(sup.size() == 4);
    CHECK(sup[0] == 2.0);
    CHECK(sup[1] == 2.0);
    CHECK(sup[2] == 3.0);
    CHECK(sup[3] == 3.0);
    CHECK_THROWS_AS(running_supremum({}), std::invalid_argument);
}

TEST_CASE("restriction block-averages and preserves mass") {
    Grid fine{0.0, 0.25, 12};
    Grid coarse{0.0, 1.0, 3};
    const auto f = make_density(
        fine, {1.0, 3.0, 5.0, 7.0, 2.0, 2.0, 4.0, 4.0, 0.0, 8.0, 0.0, 8.0}, 1.5);
    const GridDensity c = restrict_to(f, coarse);
    CHECK(c.values[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(c.values[1] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(c.values[2] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(c.time == 1.5);
    CHECK(mass(c) == doctest::Approx(mass(f)).epsilon(1e-14));

    // 2:1 restriction of adjacent pairs: (1,3) -> 2, (2,6) -> 4
    Grid f3{0.0, 0.5, 6};
    Grid c3{0.0, 1.0, 3};
    const auto fd = make_density(f3, {1.0, 3.0, 0.0, 0.0, 2.0, 6.0});
    const GridDensity cd = restrict_to(fd, c3);
    CHECK(cd.values[0] == 2.0);
    CHECK(cd.values[1] == 0.0);
    CHECK(cd.values[2] == 4.0);

    // constants restrict to the same constant
    const auto fc = make_density(fine, std::vector<double>(12, 2.5));
    const GridDensity cc = restrict_to(fc, coarse);
    for (double v : cc.values) CHECK(v == 2.5);
}

TEST_CASE("restriction rejects misaligned grids") {
    Grid fine{0.0, 0.25, 8};
    const auto f = make_density(fine, std::vector<double>(8, 1.0));
    // spacing not an integer multiple
    CHECK_THROWS_AS(restrict_to(f, Grid{0.0, 0.3, 6}), std::invalid_argument);
    // right ratio but the cell counts do not tile
    CHECK_THROWS_AS(restrict_to(f, Grid{0.0, 1.0, 3}), std::invalid_argument);
    // shifted origin
    Grid fine12{0.0, 0.25, 12};
    const auto f12 = make_density(fine12, std::vector<double>(12, 1.0));
    CHECK_THROWS_AS(restrict_to(f12, Grid{0.1, 1.0, 3}), std::invalid_argument);
}

TEST_CASE("norm ordering on a fixed grid") {
    Grid g{0.0, 0.5, 16};
    const double length = 0.5 * 16.0;
    RngStream rng = RngStream::from_seed(55);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> a(16), b(16);
        for (auto& x : a) x = rng.next_uniform();
        for (auto& x : b) x = rng.next_uniform();
        const auto u = make_density(g, a), v = make_density(g, b);
        const double e1 = error_norm({u}, {v}, 1.0);
        const double e2 = error_norm({u}, {v}, 2.0);
        const double einf = error_norm({u}, {v}, std::numeric_limits<double>::infinity());
        CHECK(e1 <= length * einf * (1.0 + 1e-14));
        CHECK(e2 <= std::sqrt(length) * einf * (1.0 + 1e-14));
        CHECK(e1 <= std::sqrt(length) * e2 * (1.0 + 1e-14));  // Cauchy-Schwarz
    }
}

TEST_CASE("estimate series pools replicas per recorded time") {
    ParticleTrajectory traj;
    traj.times = {0.0, 1.0};
    ParticleEnsemble e00{{0.1, 0.1}, 0.0, 0};
    ParticleEnsemble e01{{0.6, 0.6}, 1.0, 5};
    ParticleEnsemble e10{{0.1, 0.6}, 0.0, 0};
    ParticleEnsemble e11{{0.6, 0.1}, 1.0, 5};
    traj.replicas = {{e00, e01}, {e10, e11}};

    Grid g{0.0, 0.5, 2};
    // grids need >= 3 cells
    Grid g3{0.0, 0.5, 3};
    const auto series = estimate_series(traj, g3);
    REQUIRE(series.size() == 2);
    CHECK(series[0].density.time == 0.0);
    CHECK(series[1].density.time == 1.0);
    // t = 0: three samples at 0.1 (cell 0), one at 0.6 (cell 1); M*N = 4
    CHECK(series[0].density.values[0] == doctest::Approx(3.0 / (4.0 * 0.5)).epsilon(1e-15));
    CHECK(series[0].density.values[1] == doctest::Approx(1.0 / (4.0 * 0.5)).epsilon(1e-15));
    // t = 1: symmetric split
    CHECK(series[1].density.values[0] == doctest::Approx(1.0 / (4.0 * 0.5)).epsilon(1e-15));
    CHECK(series[1].density.values[1] == doctest::Approx(3.0 / (4.0 * 0.5)).epsilon(1e-15));
    (void)g;
}
