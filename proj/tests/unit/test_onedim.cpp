#include <cmath>

#include <doctest.h>

#include "hbargeo/onedim.hpp"
#include "hbargeo/quadrature.hpp"

using namespace hbargeo;

TEST_CASE("critical momentum of the unit cosine well is 4/pi") {
    OneDimPotential h = cosine_well(1.0);
    // L = Int_0^1 sqrt(2(1 - cos 2 pi x)) = Int_0^1 2|sin pi x| = 4/pi
    CHECK(critical_momentum(h) == doctest::Approx(4.0 / kPi).epsilon(1e-12));
    // amplitude scales as sqrt: L(amp) = sqrt(amp) * 4/pi
    CHECK(critical_momentum(cosine_well(2.25)) == doctest::Approx(1.5 * 4.0 / kPi).epsilon(1e-12));
}

TEST_CASE("hbar_1d vanishes on [-L, L] and only there") {
    OneDimPotential h = cosine_well(1.0);
    const double L = 4.0 / kPi;
    CHECK(hbar_1d(h, 0.0) == 0.0);
    CHECK(hbar_1d(h, 0.5) == 0.0);
    CHECK(hbar_1d(h, -L) == 0.0);
    CHECK(hbar_1d(h, L * 0.999999) == 0.0);
    CHECK(hbar_1d(h, L * 1.000001) > 0.0);
    CHECK(hbar_1d(h, 2.0) > 0.0);
}

TEST_CASE("hbar_1d inverts the momentum integral (self-consistency via independent quadrature)") {
    OneDimPotential h = cosine_well(1.0);
    // For hb > 0 the defining relation is p(hb) = Int_0^1 sqrt(2(hb - h(x))) dx.
    for (double hb : {0.1, 0.7, 2.0}) {
        double p = integrate_adaptive([&](double x) { return std::sqrt(2.0 * (hb - eval_h(h, x))); },
                                      0.0, 1.0, 1e-12, 2048);
        CHECK(hbar_1d(h, p) == doctest::Approx(hb).epsilon(1e-8));
        // evenness
        CHECK(hbar_1d(h, -p) == doctest::Approx(hbar_1d(h, p)).epsilon(1e-14));
    }
}

TEST_CASE("hbar_1d respects the global bounds p^2/2 + min h <= hbar <= p^2/2") {
    OneDimPotential h = cosine_well(1.0);
    for (double p : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0}) {
        double hb = hbar_1d(h, p);
        CHECK(hb <= 0.5 * p * p + 1e-12);
        CHECK(hb >= 0.5 * p * p - 2.0 - 1e-12);  // min h = -2 amp
    }
}

TEST_CASE("large momentum asymptotics: hbar -> p^2/2 + mean(h)") {
    OneDimPotential h = cosine_well(1.0);
    // mean of cos2pix - 1 is -1; for large p, hbar = p^2/2 - 1 + O(1/p^2).
    double p = 40.0;
    CHECK(hbar_1d(h, p) == doctest::Approx(0.5 * p * p - 1.0).epsilon(1e-4));
}

TEST_CASE("hbar_separable sums componentwise") {
    OneDimPotential h1 = cosine_well(1.0), h2 = cosine_well(0.25);
    Vec2 p{1.9, 0.8};
    CHECK(hbar_separable(h1, h2, p) ==
          doctest::Approx(hbar_1d(h1, p.x) + hbar_1d(h2, p.y)).epsilon(1e-14));
    // flat rectangle: [-L1, L1] x [-L2, L2]
    CHECK(hbar_separable(h1, h2, {4.0 / kPi * 0.99, 0.5 * 4.0 / kPi * 0.99}) == 0.0);
    CHECK(hbar_separable(h1, h2, {4.0 / kPi * 1.01, 0.0}) > 0.0);
}

TEST_CASE("zeros_of_h finds the lattice maxima") {
    OneDimPotential h = cosine_well(1.0);
    auto zs = zeros_of_h(h);
    REQUIRE(zs.size() >= 1);
    bool has_zero = false;
    for (double z : zs)
        if (std::fabs(z) < 1e-10 || std::fabs(z - 1.0) < 1e-10) has_zero = true;
    CHECK(has_zero);
}

TEST_CASE("cosine_well rejects non-positive amplitude") {
    CHECK_THROWS_AS(cosine_well(0.0), ConfigError);
    CHECK_THROWS_AS(cosine_well(-1.0), ConfigError);
}
