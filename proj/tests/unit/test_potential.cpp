#include <cmath>

#include <doctest.h>

#include "hbargeo/potential.hpp"

using namespace hbargeo;

TEST_CASE("templates are normalized: max V = 0, V <= 0 on a fine grid") {
    for (const char* name : {"separable", "perturbed-separable", "annulus-barrier"}) {
        PotentialSpec spec = make_template(name);
        CAPTURE(name);
        double mx = -1e300;
        for (int i = 0; i < 257; ++i)
            for (int j = 0; j < 257; ++j)
                mx = std::max(mx, eval_potential(spec, {i / 257.0, j / 257.0}));
        CHECK(mx <= 1e-12);
        CHECK(mx >= -5e-2);  // the maximum is actually attained near 0
    }
    PotentialSpec sep = make_template("separable");
    CHECK(eval_potential(sep, {0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(eval_potential(sep, {0.5, 0.5}) == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("make_template rejects unknown names") {
    CHECK_THROWS_AS(make_template("nope"), ConfigError);
}

TEST_CASE("make_separable validates amplitudes") {
    CHECK_THROWS_AS(make_separable(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(make_separable(1.0, -2.0), ConfigError);
}

TEST_CASE("eval_derivatives matches finite differences") {
    PotentialSpec spec = make_template("perturbed-separable");
    const double h = 1e-5;
    for (Vec2 x : {Vec2{0.13, 0.77}, Vec2{0.5, 0.25}, Vec2{-0.4, 1.9}}) {
        Vec2 grad;
        Sym2 hess;
        eval_derivatives(spec, x, grad, hess);

        double vpx = eval_potential(spec, {x.x + h, x.y});
        double vmx = eval_potential(spec, {x.x - h, x.y});
        double vpy = eval_potential(spec, {x.x, x.y + h});
        double vmy = eval_potential(spec, {x.x, x.y - h});
        double v0 = eval_potential(spec, x);
        CHECK(grad.x == doctest::Approx((vpx - vmx) / (2 * h)).epsilon(1e-6));
        CHECK(grad.y == doctest::Approx((vpy - vmy) / (2 * h)).epsilon(1e-6));
        CHECK(hess.xx == doctest::Approx((vpx - 2 * v0 + vmx) / (h * h)).epsilon(1e-4));
        CHECK(hess.yy == doctest::Approx((vpy - 2 * v0 + vmy) / (h * h)).epsilon(1e-4));
        double vpp = eval_potential(spec, {x.x + h, x.y + h});
        double vpm = eval_potential(spec, {x.x + h, x.y - h});
        double vmp = eval_potential(spec, {x.x - h, x.y + h});
        double vmm = eval_potential(spec, {x.x - h, x.y - h});
        CHECK(hess.xy == doctest::Approx((vpp - vpm - vmp + vmm) / (4 * h * h)).epsilon(1e-4));
        CHECK(eval_gradient(spec, x).x == grad.x);
        CHECK(eval_gradient(spec, x).y == grad.y);
    }
}

TEST_CASE("evaluation is exactly periodic (fract reduction)") {
    // Dyadic coordinates so the integer shifts themselves are exact in
    // binary floating point; fract then recovers the identical reduced point
    // and the evaluation is bitwise reproducible across the lattice.
    PotentialSpec spec = make_template("annulus-barrier");
    Vec2 x{0.375, 0.84375};
    double v = eval_potential(spec, x);
    CHECK(eval_potential(spec, {x.x + 3.0, x.y - 7.0}) == v);
    CHECK(eval_potential(spec, {x.x - 1.0, x.y + 1.0}) == v);
    CHECK(eval_potential(spec, {x.x + 64.0, x.y + 1024.0}) == v);
}

TEST_CASE("lambda constants: frozen values at (a, b) = (1, 2)") {
    // lambda_statement = (a/b) sqrt((b-a)/(b+a)) = (1/2) sqrt(1/3)
    CHECK(lambda_statement(1.0, 2.0) == doctest::Approx(0.28867513459481287).epsilon(1e-15));
    // lambda_proof = sqrt(a^2 (b-a) / (b^2 (b+4a))) = sqrt(1/24)
    CHECK(lambda_proof(1.0, 2.0) == doctest::Approx(0.20412414523193151).epsilon(1e-15));
    // proof constant is the smaller of the two for every 0 < a < b
    for (double a : {0.3, 1.0, 1.7})
        for (double mult : {1.2, 2.0, 5.0}) CHECK(lambda_proof(a, a * mult) < lambda_statement(a, a * mult));
}

TEST_CASE("critical_data on the perturbed template: located maximum, ordered eigenvalues") {
    PotentialSpec spec = make_template("perturbed-separable");
    CriticalData cd = critical_data(spec);
    // Hessian at the maximizer is -4*pi^2 [[1.3, 0.3], [0.3, 1.3]]:
    // eigenvalues -4*pi^2 and -4*pi^2*1.6, so a = 2*pi, b = 2*pi*sqrt(1.6).
    CHECK(cd.a == doctest::Approx(2 * kPi).epsilon(1e-7));
    CHECK(cd.b == doctest::Approx(2 * kPi * std::sqrt(1.6)).epsilon(1e-7));
    CHECK(cd.a < cd.b);
    CHECK(std::fabs(cd.maximizer.x) + std::fabs(cd.maximizer.y) < 1e-8);
    // eigenvectors are the diagonals (+-1,1)/sqrt(2) up to sign
    CHECK(std::fabs(std::fabs(cd.v_a.dot(Vec2{1, -1}.unit())) - 1.0) < 1e-7);
    CHECK(std::fabs(std::fabs(cd.v_b.dot(Vec2{1, 1}.unit())) - 1.0) < 1e-7);
    CHECK(std::fabs(cd.v_a.dot(cd.v_b)) < 1e-10);
    CHECK(cd.lambda_statement == doctest::Approx(lambda_statement(cd.a, cd.b)));
    CHECK(cd.lambda_proof == doctest::Approx(lambda_proof(cd.a, cd.b)));
}

TEST_CASE("critical_data rejects the equal-amplitude separable template (equal eigenvalues)") {
    CHECK_THROWS_AS(critical_data(make_template("separable")), SolverError);
}

TEST_CASE("check_assumption_m: perturbed passes, separable fails on the eigenvalue gap") {
    AssumptionMReport ok = check_assumption_m(make_template("perturbed-separable"));
    CHECK(ok.unique_maximum);
    CHECK(ok.distinct_eigenvalues);
    CHECK(ok.negative_definite);
    CHECK(ok.min_neg_away > 0.0);
    CHECK(ok.pass());

    AssumptionMReport deg = check_assumption_m(make_template("separable"));
    CHECK_FALSE(deg.distinct_eigenvalues);
    CHECK_FALSE(deg.pass());
    CHECK(deg.eig_gap < 1e-8);
}

TEST_CASE("unequal separable amplitudes pass assumption (M)") {
    PotentialSpec spec = make_separable(1.0, 2.0);
    AssumptionMReport rep = check_assumption_m(spec);
    CHECK(rep.pass());
    CriticalData cd = critical_data(spec);
    CHECK(cd.a == doctest::Approx(2 * kPi).epsilon(1e-7));
    CHECK(cd.b == doctest::Approx(2 * kPi * std::sqrt(2.0)).epsilon(1e-7));
}
