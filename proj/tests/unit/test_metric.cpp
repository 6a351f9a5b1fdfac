#include <cmath>

#include <doctest.h>

#include "hbargeo/cell_pde.hpp"
#include "hbargeo/metric.hpp"
#include "hbargeo/potential.hpp"

using namespace hbargeo;

namespace {
PotentialSpec constant_potential(double v) {
    PotentialSpec spec;
    spec.offset = v;  // no terms: V == v everywhere
    return spec;
}
}  // namespace

TEST_CASE("constant-weight geometry: stencil directions are exact, others within 2.4%") {
    // V == -1 at level 0 gives weight sqrt(2) |dx|: lengths are sqrt(2) times
    // Euclidean. Resolution 80 puts the probe points on grid nodes exactly.
    PotentialSpec spec = constant_potential(-1.0);
    MetricGrid grid = build_metric_grid(spec, 0.0, 80, 1);
    const double s2 = std::sqrt(2.0);

    CHECK(geodesic_distance(grid, {0, 0}, {0.5, 0.0}) == doctest::Approx(0.5 * s2).epsilon(1e-12));
    CHECK(geodesic_distance(grid, {0, 0}, {0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-12));
    // (1,2) knight direction is in the stencil too
    CHECK(geodesic_distance(grid, {0, 0}, {0.2, 0.4}) ==
          doctest::Approx(std::sqrt(0.2 * 0.2 + 0.4 * 0.4) * s2).epsilon(1e-12));
    // (3,1) is not; best decomposition (2,1)+(1,0) gives ratio (sqrt5+1)/sqrt10
    double d = geodesic_distance(grid, {0, 0}, {0.3, 0.1});
    double euclid = std::sqrt(0.1) * s2;
    CHECK(d >= euclid - 1e-12);
    CHECK(d <= euclid * 1.024);
}

TEST_CASE("metric grid argument validation") {
    PotentialSpec spec = constant_potential(-1.0);
    CHECK_THROWS_AS(build_metric_grid(spec, -0.1, 64, 1), ConfigError);
    CHECK_THROWS_AS(build_metric_grid(spec, 0.0, 4, 1), ConfigError);
    CHECK_THROWS_AS(build_metric_grid(spec, 0.0, 64, 0), ConfigError);
    MetricGrid grid = build_metric_grid(spec, 0.0, 32, 1);
    CHECK_THROWS_AS(geodesic_distance(grid, {0, 0}, {5.0, 0.0}), SolverError);
}

TEST_CASE("support_value argument validation") {
    PotentialSpec sep = make_template("separable");
    CHECK_THROWS_AS(support_value(sep, 0, 0, 48, 2), ConfigError);
    CHECK_THROWS_AS(support_value(sep, 3, 0, 48, 2), ConfigError);  // window must exceed |w|
}

TEST_CASE("separable support values: sigma(1,0) near 4/pi, symmetry and subadditivity") {
    PotentialSpec sep = make_template("separable");
    SupportTable table = build_support_table(sep, 2, 48);
    const double L = 4.0 / kPi;

    double s10 = table.lookup(1, 0);
    double s01 = table.lookup(0, 1);
    double s11 = table.lookup(1, 1);
    REQUIRE(s10 > 0);
    REQUIRE(s01 > 0);
    REQUIRE(s11 > 0);

    // true value 4/pi; grid quadrature + stencil anisotropy keep it within
    // [-5e-3, +3.5%].
    CHECK(s10 >= L - 5e-3);
    CHECK(s10 <= L * 1.035);
    // x<->y symmetry of the potential
    CHECK(s10 == doctest::Approx(s01).epsilon(1e-12));
    // +-w symmetry is canonicalized into one entry
    CHECK(table.lookup(-1, 0) == s10);
    // triangle inequality; separable geodesics concatenate through (1,0)
    CHECK(s11 <= s10 + s01 + 1e-9);
    CHECK(s11 >= s10 + s01 - 2 * std::max(1e-9, table.eps_grid));

    // absent classes report -1
    CHECK(table.lookup(5, 5) == -1.0);
    CHECK(table.eps_grid >= 0.0);
    CHECK(table.resolution == 48);
    CHECK(table.window == 2);

    SUBCASE("entries are primitive and canonical") {
        for (const auto& e : table.entries) {
            CHECK((e.m > 0 || (e.m == 0 && e.n > 0)));
            CHECK(std::max(std::abs(e.m), std::abs(e.n)) <= 2);
            CHECK(e.sigma > 0.0);
        }
    }
}

TEST_CASE("sigma additivity along a lattice direction (integer multiples)") {
    // sigma(2,0) for the separable well equals 2 sigma(1,0) (geodesic repeats
    // through the intermediate lattice point); table stores primitives only,
    // so measure it directly.
    PotentialSpec sep = make_template("separable");
    double s10 = support_value(sep, 1, 0, 48, 3);
    double s20 = support_value(sep, 2, 0, 48, 3);
    CHECK(s20 == doctest::Approx(2.0 * s10).epsilon(1e-9));
}

TEST_CASE("min_gap_omega is positive and monotone in delta") {
    PotentialSpec sep = make_template("separable");
    double w2 = min_gap_omega(sep, 0.2, 48);
    double w3 = min_gap_omega(sep, 0.3, 48);
    CHECK(w2 > 0.0);
    CHECK(w3 >= w2 - 1e-12);
    CHECK_THROWS_AS(min_gap_omega(sep, 0.0, 48), ConfigError);
    CHECK_THROWS_AS(min_gap_omega(sep, 0.6, 48), ConfigError);
}

TEST_CASE("corrector satisfies the subsolution inequality h(x,y) >= p.(y-x) + v(y) - v(x)") {
    PotentialSpec sep = make_template("separable");
    CorrectorField f = solve_cell(sep, {0.5, 0.0}, 64, 1e-5);
    SubsolutionReport rep = subsolution_inequality_check(sep, {0.5, 0.0}, f, 200, 42u, 64);
    CHECK(rep.samples == 200);
    CHECK(rep.violations == 0);
    CHECK(rep.worst_margin >= -rep.slack);
}

TEST_CASE("level c > 0 distances exceed level 0 distances") {
    PotentialSpec sep = make_template("separable");
    MetricGrid g0 = build_metric_grid(sep, 0.0, 48, 1);
    MetricGrid g1 = build_metric_grid(sep, 0.5, 48, 1);
    // weight sqrt(2(c - V)) grows with c, so every path is longer
    double d0 = geodesic_distance(g0, {0, 0}, {1.0, 0.0});
    double d1 = geodesic_distance(g1, {0, 0}, {1.0, 0.0});
    CHECK(d1 > d0);
    // at c = 0 the weight vanishes at lattice points only
    CHECK(g0.near_zero_off_lattice == 0);
}
