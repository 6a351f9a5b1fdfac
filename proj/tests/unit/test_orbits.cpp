#include <cmath>

#include <doctest.h>

#include "hbargeo/orbits.hpp"
#include "hbargeo/potential.hpp"

using namespace hbargeo;

TEST_CASE("quadratic saddle model integrates the exact exponential solution") {
    // xi'' = (a^2 x1, b^2 x2); x0 = (1,0), v0 = (-a, 0) rides the stable ray
    // x1(t) = e^{-a t}. Forest-Ruth at dt = 1e-3 holds it to ~1e-12.
    Orbit orb = integrate_quadratic_model(1.0, 2.0, {1.0, 0.0}, {-1.0, 0.0}, 3.0, 1e-3);
    REQUIRE(orb.size() > 2);
    std::size_t last = orb.size() - 1;
    CHECK(orb.times[last] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(orb.positions[last].x == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
    CHECK(std::fabs(orb.positions[last].y) < 1e-14);
    CHECK(orb.velocities[last].x == doctest::Approx(-std::exp(-3.0)).epsilon(1e-9));
}

TEST_CASE("blow-up guard fires on the unstable ray") {
    CHECK_THROWS_AS(integrate_quadratic_model(1.0, 2.0, {1.0, 0.0}, {1.0, 0.0}, 8.0, 1e-3, false, 64.0),
                    SolverError);
}

TEST_CASE("integrator argument validation") {
    PotentialSpec sep = make_template("separable");
    CHECK_THROWS_AS(integrate_characteristic(sep, {0, 0}, {1, 0}, 1.0, 0.5), ConfigError);
    CHECK_THROWS_AS(integrate_characteristic(sep, {0, 0}, {1, 0}, -1.0, 1e-3), ConfigError);
}

TEST_CASE("symplectic energy drift stays tiny without projection") {
    PotentialSpec sep = make_template("separable");
    Orbit orb = integrate_characteristic(sep, {0.25, 0.1}, {0.3, -0.2}, 10.0, 2e-4, false);
    double e0 = orb.energy;
    double drift = 0.0;
    for (std::size_t i = 0; i < orb.size(); i += 37)
        drift = std::max(drift, std::fabs(orb.energy_at(i, sep) - e0));
    drift = std::max(drift, std::fabs(orb.energy_at(orb.size() - 1, sep) - e0));
    CHECK(drift <= 1e-9);
}

TEST_CASE("energy projection pins the shell exactly") {
    PotentialSpec sep = make_template("separable");
    Vec2 x0{0.25, 0.1};
    double v0 = std::sqrt(-2.0 * eval_potential(sep, x0));  // zero-energy launch
    Orbit orb = integrate_characteristic(sep, x0, {v0, 0.0}, 5.0, 1e-3, true);
    for (std::size_t i = 0; i < orb.size(); i += 101)
        CHECK(std::fabs(orb.energy_at(i, sep)) <= 1e-12);
}

TEST_CASE("shoot_homoclinic argument gates") {
    PotentialSpec sep = make_template("separable");
    CHECK_THROWS_AS(shoot_homoclinic(sep, 0, 0), ConfigError);
    CHECK_THROWS_AS(shoot_homoclinic(sep, 2, 2), ConfigError);   // not primitive
    CHECK_THROWS_AS(shoot_homoclinic(sep, 1, 0, 0.5), ConfigError);  // r0 out of range
    CHECK_THROWS_AS(shoot_homoclinic(sep, 1, 0, 1e-3, 1e-8, 0.5), ConfigError);  // dt too large
}

TEST_CASE("Lyapunov-Perron demo problem converges to the closed-form orbit") {
    // F1 = alpha x2^2, F2 = 0: the fixed point is exactly
    //   x2 = theta e^{-bt},  x1 = -(alpha theta^2 / (2b - a)) e^{-2bt}.
    double a = 1.0, b = 2.0, alpha = 3.0, theta = 0.01;
    LPResult res = lyapunov_perron_orbit(lp_demo_problem(a, b, alpha, theta));
    double sup = 0.0;
    for (std::size_t i = 0; i < res.times.size(); ++i) {
        double t = res.times[i];
        double x1 = -(alpha * theta * theta / (2 * b - a)) * std::exp(-2 * b * t);
        double x2 = theta * std::exp(-b * t);
        sup = std::max(sup, std::fabs(res.values[i].x - x1));
        sup = std::max(sup, std::fabs(res.values[i].y - x2));
    }
    CHECK(sup <= 1e-8);
    CHECK(res.contraction_factor <= 0.5);
    CHECK(res.iterate_bound_factor <= 3.0);
    CHECK(res.final_gap <= 1e-12);
    CHECK(res.theta_window > 0.0);
    CHECK(res.iterations >= 1);
}

TEST_CASE("Lyapunov-Perron gates and contraction failure") {
    LPProblem bad = lp_demo_problem(1.0, 2.0, 3.0, 0.1);
    bad.lambda0 = 3.0;  // outside (a, min(b, 2a))
    CHECK_THROWS_AS(lyapunov_perron_orbit(bad), ConfigError);

    LPProblem order = lp_demo_problem(2.0, 1.0, 3.0, 0.1);  // a > b
    CHECK_THROWS_AS(lyapunov_perron_orbit(order), ConfigError);

    LPProblem strong;  // huge quadratic coupling at theta = 1: no contraction
    strong.a = 1.0;
    strong.b = 2.0;
    strong.q1 = {0.0, 0.0, 10.0};
    strong.q2 = {0.0, 10.0, 0.0};
    strong.theta = 1.0;
    strong.lambda0 = 1.5;
    CHECK_THROWS_AS(lyapunov_perron_orbit(strong), SolverError);
}

TEST_CASE("near-origin two-ray action: frozen closed-form value") {
    // (1/2)[a(s1^2+s2^2) + b(beta1^2 s1^2 + beta2^2 s2^2)]
    //   = (1/2)[1*2 + 2*(0.04 + 0.04)] = 1.08 exactly.
    CHECK(near_origin_action(1.0, 2.0, -1.0, 1.0, 0.2, 0.2) == doctest::Approx(1.08).epsilon(1e-15));
    CHECK(near_origin_action_raw(1.0, 2.0, -1.0, 1.0, 0.2, 0.2) ==
          doctest::Approx(1.08).epsilon(1e-15));
    // the raw form skips the admissibility gate
    CHECK(near_origin_action_raw(1.0, 2.0, -1.0, 1.0, 0.5, 0.5) > 0.0);
}

TEST_CASE("near-origin action admissibility gates") {
    CHECK_THROWS_AS(near_origin_action(1.0, 2.0, 1.0, -1.0, 0.2, 0.2), ConfigError);  // s1 > 0 > s2
    CHECK_THROWS_AS(near_origin_action(1.0, 2.0, -1.0, 1.0, 0.3, 0.2), ConfigError);  // beta > lambda
    CHECK_THROWS_AS(near_origin_action(2.0, 1.0, -1.0, 1.0, 0.1, 0.1), ConfigError);  // a >= b
    // beta exactly at lambda_proof is admissible
    double lam = lambda_proof(1.0, 2.0);
    CHECK(near_origin_action(1.0, 2.0, -1.0, 1.0, lam, lam) > 0.0);
}

TEST_CASE("decay_check accepts an inward zero-energy arc of the separable well") {
    PotentialSpec sep = make_template("separable");
    Vec2 x0{0.25, 0.0};
    double v0 = std::sqrt(-2.0 * eval_potential(sep, x0));
    Orbit orb = integrate_characteristic(sep, x0, {-v0, 0.0}, 1.5, 1e-3, true);
    DecayReport rep = decay_check(orb, sep, 0.0, 1e-6);
    CHECK(rep.dominance_ok);
    CHECK(rep.c > 0.0);
    CHECK(rep.worst_margin <= 1e-6);
    CHECK(rep.fit_lambda > 0.0);
}

TEST_CASE("dominance constant approaches 2a near the maximum") {
    // On the axis toward the origin the quadratic-dominance ratio tends to
    // (2a)^2 with a = 2 pi; an arc confined to |x| <= 0.05 measures c close
    // to the limit.
    PotentialSpec sep = make_template("separable");
    Vec2 x0{0.05, 0.0};
    double v0 = std::sqrt(-2.0 * eval_potential(sep, x0));
    Orbit orb = integrate_characteristic(sep, x0, {-v0, 0.0}, 0.5, 1e-3, true);
    double c = dominance_constant(orb, sep);
    CHECK(c > 0.8 * 2.0 * kPi);
    CHECK(c <= 2.0 * 2.0 * kPi);
}

TEST_CASE("limiting_direction snaps an axis-decaying orbit to the generic eigenvector") {
    PotentialSpec spec = make_separable(1.0, 2.0);  // a = 2pi (x-axis), b = 2pi sqrt2
    CriticalData cd = critical_data(spec);
    Vec2 x0{0.2, 0.0};
    double v0 = std::sqrt(-2.0 * eval_potential(spec, x0));
    Orbit orb = integrate_characteristic(spec, x0, {-v0, 0.0}, 2.0, 1e-3, true);
    LimitingDirection ld = limiting_direction(orb, cd);
    CHECK(std::fabs(std::fabs(ld.dir.dot(cd.v_a)) - 1.0) < 1e-9);
    CHECK(ld.tag == "a-generic");
    CHECK(ld.angular_residual < 1e-6);
}

TEST_CASE("direction overlap probe flags coincident limiting directions") {
    HomoclinicRecord r1, r2;
    r1.dir_forward = Vec2{1.0, 0.0};
    r2.dir_backward = Vec2{1.0, 1e-5}.unit();
    DirectionOverlapReport rep = direction_overlap_probe(r1, r2);
    CHECK(rep.forbidden);
    CHECK(rep.angle < 1e-3);

    r2.dir_backward = Vec2{0.0, 1.0};
    rep = direction_overlap_probe(r1, r2);
    CHECK_FALSE(rep.forbidden);
    CHECK(rep.angle == doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("orbit_action matches the hand value on a force-free segment") {
    // V == 0: action = Int (1/2)|v|^2 dt exactly.
    PotentialSpec zero;
    Orbit orb = integrate_characteristic(zero, {0.0, 0.0}, {0.6, 0.8}, 2.0, 1e-3, false);
    CHECK(orbit_action(orb, zero) == doctest::Approx(0.5 * 1.0 * 2.0).epsilon(1e-10));
}
