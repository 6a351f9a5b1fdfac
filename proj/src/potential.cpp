#include "hbargeo/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hbargeo {

namespace {

// Newton ascent toward a critical point of V (used to polish grid maxima).
// Returns false if the iteration leaves the basin (step blow-up).
bool newton_polish(const PotentialSpec& spec, Vec2& x, int iters = 40) {
    for (int it = 0; it < iters; ++it) {
        Vec2 g;
        Sym2 h;
        eval_derivatives(spec, x, g, h);
        double det = h.det();
        if (std::fabs(det) < 1e-14) return false;
        // Solve h * step = g.
        Vec2 step{(g.x * h.yy - g.y * h.xy) / det, (g.y * h.xx - g.x * h.xy) / det};
        if (step.norm() > 0.25) return false;
        x -= step;
        if (step.norm() < 1e-15) break;
    }
    return eval_gradient(spec, x).norm() < 1e-10;
}

double torus_dist(Vec2 a, Vec2 b) {
    double dx = std::fabs(fract(a.x) - fract(b.x));
    double dy = std::fabs(fract(a.y) - fract(b.y));
    dx = std::min(dx, 1.0 - dx);
    dy = std::min(dy, 1.0 - dy);
    return std::sqrt(dx * dx + dy * dy);
}

struct MaxScan {
    Vec2 primary;          // polished maximizer
    double primary_value;  // V there (before any re-offset)
    Vec2 second;           // best competing polished local max (torus-far from primary)
    double second_value;   // -inf when none
};

MaxScan scan_maxima(const PotentialSpec& spec, int grid_n) {
    const int n = std::max(grid_n, 64);
    const double h = 1.0 / n;
    std::vector<double> v(static_cast<std::size_t>(n) * n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            v[static_cast<std::size_t>(iy) * n + ix] = eval_potential(spec, {ix * h, iy * h});

    auto at = [&](int ix, int iy) {
        return v[static_cast<std::size_t>(((iy % n) + n) % n) * n + (((ix % n) + n) % n)];
    };

    // Global max node.
    int best = 0;
    for (int i = 1; i < n * n; ++i)
        if (v[i] > v[best]) best = i;
    Vec2 primary{(best % n) * h, (best / n) * h};
    newton_polish(spec, primary);
    double primary_value = eval_potential(spec, primary);

    // Competing local maxima: grid-local maxima close to the top value but
    // torus-far from the primary maximizer, polished before comparing.
    Vec2 second{0, 0};
    double second_value = -std::numeric_limits<double>::infinity();
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            double c = at(ix, iy);
            if (c < primary_value - 1e-3) continue;
            bool local_max = true;
            for (int dy = -1; dy <= 1 && local_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (at(ix + dx, iy + dy) > c) { local_max = false; break; }
                }
            if (!local_max) continue;
            Vec2 cand{ix * h, iy * h};
            if (torus_dist(cand, primary) < 4.0 * h) continue;
            newton_polish(spec, cand);
            if (torus_dist(cand, primary) < 1e-3) continue;
            double cv = eval_potential(spec, cand);
            if (cv > second_value) {
                second_value = cv;
                second = cand;
            }
        }
    }
    return {primary, primary_value, second, second_value};
}

struct Eigen2 {
    double lam_small_mag;  // eigenvalue closest to 0 (expected -a^2)
    double lam_large_mag;  // eigenvalue farthest from 0 (expected -b^2)
    Vec2 v_small;          // unit eigenvector of lam_small_mag
};

Eigen2 sym_eigen(const Sym2& m) {
    double mean = 0.5 * (m.xx + m.yy);
    double r = std::sqrt(0.25 * (m.xx - m.yy) * (m.xx - m.yy) + m.xy * m.xy);
    double lam_hi = mean + r;  // algebraically larger => closer to 0 for negative-definite m
    double lam_lo = mean - r;
    Vec2 v;
    // Eigenvector for lam_hi: rows of (m - lam_hi I) are orthogonal to it.
    Vec2 r1{m.xx - lam_hi, m.xy};
    Vec2 r2{m.xy, m.yy - lam_hi};
    Vec2 cand = (r1.norm2() > r2.norm2()) ? r1.perp() : r2.perp();
    if (cand.norm2() < 1e-28) cand = {1.0, 0.0};  // isotropic: any direction
    v = cand.unit();
    // Deterministic sign: first component positive, or second when the first
    // vanishes.
    if (v.x < -1e-12 || (std::fabs(v.x) <= 1e-12 && v.y < 0)) v = -v;
    return {lam_hi, lam_lo, v};
}

}  // namespace

double eval_potential(const PotentialSpec& spec, Vec2 x) {
    double x1 = fract(x.x), x2 = fract(x.y);
    double acc = spec.offset;
    for (const auto& t : spec.terms)
        acc += t.amp * std::cos(kTwoPi * (t.k1 * x1 + t.k2 * x2) + t.phase);
    return acc;
}

Vec2 eval_gradient(const PotentialSpec& spec, Vec2 x) {
    double x1 = fract(x.x), x2 = fract(x.y);
    Vec2 g{0, 0};
    for (const auto& t : spec.terms) {
        double s = t.amp * kTwoPi * std::sin(kTwoPi * (t.k1 * x1 + t.k2 * x2) + t.phase);
        g.x -= s * t.k1;
        g.y -= s * t.k2;
    }
    return g;
}

void eval_derivatives(const PotentialSpec& spec, Vec2 x, Vec2& grad, Sym2& hess) {
    double x1 = fract(x.x), x2 = fract(x.y);
    grad = {0, 0};
    hess = {};
    for (const auto& t : spec.terms) {
        double arg = kTwoPi * (t.k1 * x1 + t.k2 * x2) + t.phase;
        double s = t.amp * kTwoPi * std::sin(arg);
        double c = t.amp * kTwoPi * kTwoPi * std::cos(arg);
        grad.x -= s * t.k1;
        grad.y -= s * t.k2;
        hess.xx -= c * t.k1 * t.k1;
        hess.xy -= c * t.k1 * t.k2;
        hess.yy -= c * t.k2 * t.k2;
    }
}

double grid_min(const PotentialSpec& spec, int grid_n) {
    double lo = std::numeric_limits<double>::infinity();
    double h = 1.0 / grid_n;
    for (int iy = 0; iy < grid_n; ++iy)
        for (int ix = 0; ix < grid_n; ++ix)
            lo = std::min(lo, eval_potential(spec, {ix * h, iy * h}));
    return lo;
}

PotentialSpec make_separable(double amp1, double amp2) {
    if (!(amp1 > 0.0) || !(amp2 > 0.0))
        throw ConfigError("BadConfig", "separable amplitudes must be > 0");
    PotentialSpec spec;
    spec.template_name = "separable";
    spec.terms = {{amp1, 1, 0, 0.0}, {amp2, 0, 1, 0.0}};
    spec.offset = -(amp1 + amp2);
    return spec;
}

PotentialSpec make_template(const std::string& name) {
    if (name == "separable") {
        return make_separable(1.0, 1.0);
    }
    if (name == "perturbed-separable") {
        PotentialSpec spec;
        spec.template_name = name;
        spec.terms = {{1.0, 1, 0, 0.0}, {1.0, 0, 1, 0.0}, {0.3, 1, 1, 0.0}};
        spec.offset = -2.3;
        return spec;
    }
    if (name == "annulus-barrier") {
        // V = B(B - 6), B = (1 - cos 2pi x1) + 1.2 (1 - cos 2pi x2):
        // zero exactly on Z^2 (max B = 4.4 < 6), deepest along the closed ring
        // B = 3 around each cell center. Expanded to cosines below.
        PotentialSpec spec;
        spec.template_name = name;
        spec.terms = {{1.6, 1, 0, 0.0},  {1.92, 0, 1, 0.0}, {0.5, 2, 0, 0.0},
                      {0.72, 0, 2, 0.0}, {1.2, 1, 1, 0.0},  {1.2, 1, -1, 0.0}};
        spec.offset = -7.14;
        return spec;
    }
    throw ConfigError("BadConfig", "unknown potential template '" + name +
                                       "' (expected separable, perturbed-separable, annulus-barrier)");
}

void normalize(PotentialSpec& spec, int grid_n) {
    MaxScan scan = scan_maxima(spec, std::min(grid_n, 1024));
    spec.offset -= scan.primary_value;
}

double lambda_statement(double a, double b) {
    return (a / b) * std::sqrt((b - a) / (b + a));
}

double lambda_proof(double a, double b) {
    return std::sqrt(a * a * (b - a) / (b * b * (b + 4.0 * a)));
}

CriticalData critical_data(const PotentialSpec& spec) {
    MaxScan scan = scan_maxima(spec, 256);
    if (scan.second_value > -1e-8) {
        throw SolverError("MultipleMaxima",
                          "second maximum of value " + std::to_string(scan.second_value) +
                              " found away from the primary maximizer");
    }
    Vec2 g;
    Sym2 h;
    eval_derivatives(spec, scan.primary, g, h);
    Eigen2 e = sym_eigen(h);
    if (e.lam_small_mag >= -1e-8)
        throw SolverError("DegenerateMaximum", "Hessian eigenvalue >= -1e-8 at the maximizer");
    if (e.lam_small_mag - e.lam_large_mag <= 1e-8)
        throw SolverError("DegenerateMaximum", "Hessian eigenvalues coincide within 1e-8");

    CriticalData crit;
    crit.maximizer = {fract(scan.primary.x), fract(scan.primary.y)};
    crit.a = std::sqrt(-e.lam_small_mag);
    crit.b = std::sqrt(-e.lam_large_mag);
    crit.v_a = e.v_small;
    Vec2 vb = crit.v_a.perp();
    if (vb.x < -1e-12 || (std::fabs(vb.x) <= 1e-12 && vb.y < 0)) vb = -vb;
    crit.v_b = vb;
    crit.lambda_statement = lambda_statement(crit.a, crit.b);
    crit.lambda_proof = lambda_proof(crit.a, crit.b);
    return crit;
}

AssumptionMReport check_assumption_m(const PotentialSpec& spec, int grid_n) {
    AssumptionMReport rep;
    const int n = std::max(grid_n, 64);
    MaxScan scan = scan_maxima(spec, n);
    rep.second_peak = scan.second_value;
    rep.unique_maximum = !(scan.second_value > -1e-8);

    Vec2 g;
    Sym2 h;
    eval_derivatives(spec, scan.primary, g, h);
    Eigen2 e = sym_eigen(h);
    rep.negative_definite = e.lam_small_mag < -1e-8;
    rep.distinct_eigenvalues = (e.lam_small_mag - e.lam_large_mag) > 1e-8;
    if (rep.negative_definite)
        rep.eig_gap = std::sqrt(-e.lam_large_mag) - std::sqrt(-e.lam_small_mag);

    // min of -V over grid nodes away from the maximizer (positivity means
    // {V = 0} is just the lattice at this resolution).
    double lo = std::numeric_limits<double>::infinity();
    const double hstep = 1.0 / n;
    const double excl = 2.0 * hstep;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            Vec2 x{ix * hstep, iy * hstep};
            if (torus_dist(x, scan.primary) < excl) continue;
            lo = std::min(lo, -eval_potential(spec, x));
        }
    }
    rep.min_neg_away = lo;
    return rep;
}

}  // namespace hbargeo
