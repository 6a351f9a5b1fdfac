#include "hbargeo/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hbargeo/quadrature.hpp"

namespace hbargeo {

namespace {

double eval_h_second(const OneDimPotential& h, double x) {
    double xr = fract(x);
    double acc = 0.0;
    for (const auto& t : h.terms)
        acc -= t.amp * kTwoPi * kTwoPi * t.k * t.k * std::cos(kTwoPi * t.k * xr + t.phase);
    return acc;
}

bool is_flat_zero(const OneDimPotential& h) {
    for (const auto& t : h.terms)
        if (std::fabs(t.amp) > 1e-14) return false;
    return std::fabs(h.offset) <= 1e-14;
}

// Integrates f over [0,1] splitting at the points where the integrand loses
// smoothness (the zeros of h), adaptive panel doubling inside each piece.
double integrate_unit_period(const OneDimPotential& h, const std::function<double(double)>& f) {
    std::vector<double> cuts = zeros_of_h(h);
    if (cuts.empty()) return integrate_adaptive(f, 0.0, 1.0, 1e-12);
    double acc = 0.0;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        double a = cuts[i];
        double b = (i + 1 < cuts.size()) ? cuts[i + 1] : cuts[0] + 1.0;
        acc += integrate_adaptive(f, a, b, 1e-12 / static_cast<double>(cuts.size()));
    }
    return acc;
}

}  // namespace

OneDimPotential cosine_well(double amp) {
    if (!(amp > 0.0)) throw ConfigError("BadConfig", "cosine well amplitude must be > 0");
    OneDimPotential h;
    h.terms = {{amp, 1, 0.0}};
    h.offset = -amp;
    return h;
}

double eval_h(const OneDimPotential& h, double x) {
    double xr = fract(x);
    double acc = h.offset;
    for (const auto& t : h.terms) acc += t.amp * std::cos(kTwoPi * t.k * xr + t.phase);
    return acc;
}

double eval_h_prime(const OneDimPotential& h, double x) {
    double xr = fract(x);
    double acc = 0.0;
    for (const auto& t : h.terms)
        acc -= t.amp * kTwoPi * t.k * std::sin(kTwoPi * t.k * xr + t.phase);
    return acc;
}

void normalize(OneDimPotential& h) {
    const int n = 4096;
    double best = -std::numeric_limits<double>::infinity();
    double bx = 0.0;
    for (int i = 0; i < n; ++i) {
        double v = eval_h(h, i / static_cast<double>(n));
        if (v > best) { best = v; bx = i / static_cast<double>(n); }
    }
    // Newton polish on h' (maxima have h'' < 0).
    double x = bx;
    for (int it = 0; it < 50; ++it) {
        double d1 = eval_h_prime(h, x), d2 = eval_h_second(h, x);
        if (std::fabs(d2) < 1e-14) break;
        double step = d1 / d2;
        if (std::fabs(step) > 1.0 / n) step = std::copysign(1.0 / n, step);
        x -= step;
        if (std::fabs(step) < 1e-16) break;
    }
    h.offset -= std::max(best, eval_h(h, x));
}

std::vector<double> zeros_of_h(const OneDimPotential& h) {
    std::vector<double> zeros;
    if (is_flat_zero(h)) return zeros;
    const int n = 4096;
    for (int i = 0; i < n; ++i) {
        double xm = (i - 1) / static_cast<double>(n);
        double x0 = i / static_cast<double>(n);
        double xp = (i + 1) / static_cast<double>(n);
        double v0 = eval_h(h, x0);
        if (v0 < -1e-6) continue;
        if (eval_h(h, xm) > v0 || eval_h(h, xp) > v0) continue;  // not a local max
        // Newton polish on h'.
        double x = x0;
        for (int it = 0; it < 60; ++it) {
            double d1 = eval_h_prime(h, x), d2 = eval_h_second(h, x);
            if (std::fabs(d2) < 1e-14) break;
            double step = d1 / d2;
            if (std::fabs(step) > 1.0 / n) step = std::copysign(1.0 / n, step);
            x -= step;
            if (std::fabs(step) < 1e-16) break;
        }
        if (eval_h(h, x) < -1e-10) continue;  // a max, but not a zero of h
        x = fract(x);
        bool dup = false;
        for (double z : zeros)
            if (std::fabs(z - x) < 1e-9 || std::fabs(std::fabs(z - x) - 1.0) < 1e-9) dup = true;
        if (!dup) zeros.push_back(x);
    }
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

double critical_momentum(const OneDimPotential& h) {
    if (is_flat_zero(h)) return 0.0;
    auto f = [&](double x) { return std::sqrt(std::max(0.0, -2.0 * eval_h(h, x))); };
    return integrate_unit_period(h, f);
}

double hbar_1d(const OneDimPotential& h, double p) {
    double ap = std::fabs(p);
    double L = critical_momentum(h);
    if (ap <= L) return 0.0;

    // Root of I(H) = Int_0^1 sqrt(2(H - h)) dx = |p|; I is strictly increasing,
    // I(0) = L < |p| and I(p^2/2 - min h) >= |p| brackets the root.
    double min_h = 0.0;
    for (int i = 0; i < 2048; ++i) min_h = std::min(min_h, eval_h(h, i / 2048.0));
    auto I = [&](double H) {
        auto f = [&](double x) { return std::sqrt(std::max(0.0, 2.0 * (H - eval_h(h, x)))); };
        return integrate_unit_period(h, f);
    };
    double lo = 0.0;
    double hi = 0.5 * ap * ap - min_h + 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (I(mid) < ap)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

double hbar_separable(const OneDimPotential& h1, const OneDimPotential& h2, Vec2 p) {
    return hbar_1d(h1, p.x) + hbar_1d(h2, p.y);
}

}  // namespace hbargeo
