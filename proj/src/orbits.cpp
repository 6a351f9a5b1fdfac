#include "hbargeo/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hbargeo {

namespace {

// Candy–Rozmus 4th-order symplectic composition (drift-kick pattern; the
// leading kick coefficient is 0, so three force evaluations per step).
constexpr double kA1 = 0.6756035959798288170238458065678177873714;
constexpr double kA2 = -0.1756035959798288170238458065678177873714;
constexpr double kB2 = 1.3512071919596576340477441177810572122634;
constexpr double kB3 = -1.7024143839193152680951301399452727444042;

template <class Grad>
inline void fr_step(Vec2& x, Vec2& v, double dt, Grad&& grad) {
    x += v * (kA1 * dt);
    v -= grad(x) * (kB2 * dt);
    x += v * (kA2 * dt);
    v -= grad(x) * (kB3 * dt);
    x += v * (kA2 * dt);
    v -= grad(x) * (kB2 * dt);
    x += v * (kA1 * dt);
}

// Velocity rescale onto the energy shell `e0`; skipped near turning points
// where the direction is not recoverable from the speed.
template <class Pot>
inline void project_energy(Vec2& x, Vec2& v, double e0, Pot&& pot) {
    double kin = 0.5 * v.norm2();
    if (kin < 1e-12) return;
    double s2 = (e0 - pot(x)) / kin;
    if (s2 > 0.0) v = v * std::sqrt(s2);
}

template <class Pot, class Grad>
Orbit integrate_core(Pot&& pot, Grad&& grad, Vec2 x0, Vec2 v0, double T, double dt,
                     bool projection, double blow_up_radius) {
    if (!(dt > 0.0) || dt > 1e-2) throw ConfigError("BadConfig", "dt must lie in (0, 1e-2]");
    if (!(T > 0.0)) throw ConfigError("BadConfig", "T must be > 0");
    long steps = std::lround(T / dt);
    if (steps < 1) steps = 1;

    Orbit orbit;
    orbit.energy = 0.5 * v0.norm2() + pot(x0);
    orbit.times.reserve(steps + 1);
    orbit.positions.reserve(steps + 1);
    orbit.velocities.reserve(steps + 1);

    Vec2 x = x0, v = v0;
    orbit.times.push_back(0.0);
    orbit.positions.push_back(x);
    orbit.velocities.push_back(v);
    for (long i = 1; i <= steps; ++i) {
        fr_step(x, v, dt, grad);
        if (projection) project_energy(x, v, orbit.energy, pot);
        if (x.norm() > blow_up_radius)
            throw SolverError("BlowUp", "trajectory left the cover window");
        orbit.times.push_back(i * dt);
        orbit.positions.push_back(x);
        orbit.velocities.push_back(v);
    }
    return orbit;
}

// Composite Simpson on the stored uniform grid; a trapezoid mops up an odd
// final interval.
double simpson(const std::vector<double>& t, const std::vector<double>& f) {
    std::size_t n = t.size();
    if (n < 2) return 0.0;
    double dt = t[1] - t[0];
    double acc = 0.0;
    std::size_t i = 0;
    for (; i + 2 < n; i += 2) acc += (f[i] + 4.0 * f[i + 1] + f[i + 2]) * dt / 3.0;
    if (i + 1 < n) acc += 0.5 * (f[i] + f[i + 1]) * dt;
    return acc;
}

Vec2 nearest_lattice(Vec2 x) { return {std::round(x.x), std::round(x.y)}; }

// One zero-energy launch from the r0-circle around 0 toward w. Ends when the
// trajectory enters the r0-ball of w, exceeds the arclength budget, or times
// out near an intermediate saddle.
struct Shot {
    bool reached{false};
    double min_dist{0.0};
    double side{0.0};  // sign of the closest-approach offset against w-perp
    Orbit orbit;       // trimmed at ball entry when reached
};

Shot fire(const PotentialSpec& spec, Vec2 w, double phi, double r0, double dt) {
    Shot shot;
    Vec2 u{std::cos(phi), std::sin(phi)};
    Vec2 x = u * r0;
    double v0 = std::sqrt(std::max(0.0, -2.0 * eval_potential(spec, x)));
    Vec2 v = u * v0;

    auto pot = [&](Vec2 q) { return eval_potential(spec, q); };
    auto grad = [&](Vec2 q) { return eval_gradient(spec, q); };

    const double wn = w.norm();
    const double arc_budget = 10.0 * wn;
    const double t_budget = 60.0 * (1.0 + wn);
    Vec2 wu = w / wn;

    shot.orbit.energy = 0.0;
    shot.orbit.times.push_back(0.0);
    shot.orbit.positions.push_back(x);
    shot.orbit.velocities.push_back(v);

    double best = (x - w).norm();
    Vec2 best_off = x - w;
    shot.min_dist = best;

    double arclen = 0.0, t = 0.0;
    while (t < t_budget && arclen < arc_budget) {
        fr_step(x, v, dt, grad);
        project_energy(x, v, 0.0, pot);
        t += dt;
        arclen += v.norm() * dt;
        shot.orbit.times.push_back(t);
        shot.orbit.positions.push_back(x);
        shot.orbit.velocities.push_back(v);
        double d = (x - w).norm();
        if (d < best) {
            best = d;
            best_off = x - w;
        }
        if (d <= r0) {
            shot.reached = true;
            break;
        }
        if (x.norm() > wn + 8.0) break;
    }
    shot.min_dist = best;
    shot.side = wu.perp().dot(best_off);
    return shot;
}

// Eigen-frame of -D2V at the lattice maximizer (shooting assumes the
// normalized maximizer sits on Z^2). Unlike critical_data this tolerates
// coinciding eigenvalues (a == b), where the tail action is still the same
// quadratic form; only direction *classification* needs distinctness.
void saddle_frame(const PotentialSpec& spec, double& a, double& b, Vec2& va, Vec2& vb) {
    Vec2 g;
    Sym2 H;
    eval_derivatives(spec, Vec2{0.0, 0.0}, g, H);
    double half_tr = 0.5 * H.trace();
    double disc = std::sqrt(std::max(0.0, half_tr * half_tr - H.det()));
    double l_hi = half_tr + disc, l_lo = half_tr - disc;  // l_hi >= l_lo, both < 0
    a = std::sqrt(std::max(0.0, -l_hi));
    b = std::sqrt(std::max(0.0, -l_lo));
    if (disc < 1e-12 || std::fabs(H.xy) < 1e-14) {
        // (near-)diagonal Hessian: eigenvectors are the axes
        bool x_is_hi = H.xx >= H.yy;
        va = x_is_hi ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
        vb = x_is_hi ? Vec2{0.0, 1.0} : Vec2{1.0, 0.0};
    } else {
        va = Vec2{H.xy, l_hi - H.xx}.unit();
        vb = va.perp();
    }
}

HomoclinicRecord finish_record(const PotentialSpec& spec, int m, int n, Shot&& shot, double phi) {
    HomoclinicRecord rec;
    rec.m = m;
    rec.n = n;
    rec.launch_angle = phi;
    rec.orbit = std::move(shot.orbit);

    const Orbit& orb = rec.orbit;
    Vec2 w{static_cast<double>(m), static_cast<double>(n)};
    rec.terminal_gap = (orb.positions.back() - w).norm();
    rec.dir_backward = orb.positions.front().unit();
    rec.dir_forward = (orb.positions.back() - w).unit();

    // On the zero-energy shell the Lagrangian is |v|^2; integrate the stored
    // arc and add the closed-form saddle tails in eigencoordinates.
    std::vector<double> lag(orb.size());
    for (std::size_t i = 0; i < orb.size(); ++i)
        lag[i] = 0.5 * orb.velocities[i].norm2() - eval_potential(spec, orb.positions[i]);
    rec.arc_action = simpson(orb.times, lag);

    double sa, sb;
    Vec2 va, vb;
    saddle_frame(spec, sa, sb, va, vb);
    auto tail = [&](Vec2 offset) {
        double ya = offset.dot(va), yb = offset.dot(vb);
        return 0.5 * (sa * ya * ya + sb * yb * yb);
    };
    rec.action = rec.arc_action + tail(orb.positions.front()) + tail(orb.positions.back() - w);
    return rec;
}

// --- Lyapunov–Perron helpers ---------------------------------------------------

// Exponential moments M_k = Int_0^h u^k e^{(z/h) u} du, k = 0, 1, 2. Series in
// z below 0.25 (the practical regime), closed forms above.
struct Moments {
    double m0, m1, m2;
};

Moments exp_moments(double z, double h) {
    Moments mm{};
    if (std::fabs(z) < 0.25) {
        double s0 = 0.0, s1 = 0.0, s2 = 0.0, term = 1.0;  // term = z^j / j!
        for (int j = 0; j < 30; ++j) {
            s0 += term / (j + 1);
            s1 += term / (j + 2);
            s2 += term / (j + 3);
            if (std::fabs(term) < 1e-22) break;
            term *= z / (j + 1);
        }
        mm.m0 = h * s0;
        mm.m1 = h * h * s1;
        mm.m2 = h * h * h * s2;
    } else {
        double ez = std::exp(z);
        mm.m0 = h * std::expm1(z) / z;
        mm.m1 = h * h * (ez * (z - 1.0) + 1.0) / (z * z);
        mm.m2 = h * h * h * (ez * (z * z - 2.0 * z + 2.0) - 2.0) / (z * z * z);
    }
    return mm;
}

// Quadratic-interpolant coefficients of f on cell [t_i, t_i + h] in the local
// variable u, built from three consecutive samples (one-sided at i = 0).
inline void cell_quad(const std::vector<double>& f, std::size_t i, double h, double& c0, double& c1,
                      double& c2) {
    if (i == 0) {
        c0 = f[0];
        c1 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        c2 = (f[0] - 2.0 * f[1] + f[2]) / (2.0 * h * h);
    } else {
        c0 = f[i];
        c1 = (f[i + 1] - f[i - 1]) / (2.0 * h);
        c2 = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (2.0 * h * h);
    }
}

}  // namespace

double Orbit::energy_at(std::size_t i, const PotentialSpec& spec) const {
    return 0.5 * velocities[i].norm2() + eval_potential(spec, positions[i]);
}

Orbit integrate_characteristic(const PotentialSpec& spec, Vec2 x0, Vec2 v0, double T, double dt,
                               bool energy_projection, double blow_up_radius) {
    return integrate_core([&](Vec2 q) { return eval_potential(spec, q); },
                          [&](Vec2 q) { return eval_gradient(spec, q); }, x0, v0, T, dt,
                          energy_projection, blow_up_radius);
}

Orbit integrate_quadratic_model(double a, double b, Vec2 x0, Vec2 v0, double T, double dt,
                                bool energy_projection, double blow_up_radius) {
    if (!(0 < a && a < b)) throw ConfigError("BadConfig", "requires 0 < a < b");
    return integrate_core([=](Vec2 q) { return -0.5 * (a * a * q.x * q.x + b * b * q.y * q.y); },
                          [=](Vec2 q) { return Vec2{-a * a * q.x, -b * b * q.y}; }, x0, v0, T, dt,
                          energy_projection, blow_up_radius);
}

HomoclinicRecord shoot_homoclinic(const PotentialSpec& spec, int m, int n, double r0, double tol,
                                  double dt) {
    if (m == 0 && n == 0) throw ConfigError("BadConfig", "homology class must be nonzero");
    if (std::gcd(std::abs(m), std::abs(n)) != 1)
        throw ConfigError("BadConfig", "homology class must be primitive");
    if (!(r0 >= 1e-4 && r0 <= 1e-2)) throw ConfigError("BadConfig", "r0 must lie in [1e-4, 1e-2]");
    if (!(dt > 0.0) || dt > 1e-2) throw ConfigError("BadConfig", "dt must lie in (0, 1e-2]");
    (void)tol;

    Vec2 w{static_cast<double>(m), static_cast<double>(n)};
    const double phi_w = std::atan2(w.y, w.x);
    const int half = 32;
    const double span = 1.3;

    // Angle sweep centered on the class direction; the center angle comes
    // first so exact-symmetry launches (separable axes) win deterministically.
    std::vector<double> angles;
    std::vector<Shot> shots(2 * half + 1);
    angles.reserve(2 * half + 1);
    for (int k = -half; k <= half; ++k) angles.push_back(phi_w + span * k / half);

    int found = -1;
    for (int pass = 0; pass < 2 * half + 1 && found < 0; ++pass) {
        // order: center, then outward by |offset| (smaller angle first on ties)
        int k = (pass + 1) / 2 * ((pass % 2) ? -1 : 1);
        int idx = k + half;
        shots[idx] = fire(spec, w, angles[idx], r0, dt);
        if (shots[idx].reached)
            found = idx;
        else
            shots[idx].orbit = Orbit{};  // keep only side/min_dist for bracketing
    }
    if (found >= 0) return finish_record(spec, m, n, std::move(shots[found]), angles[found]);

    // No direct hit: bisect between adjacent launches that straddle the class
    // line with a credible approach on both sides.
    for (int i = 0; i < 2 * half; ++i) {
        const Shot &s_lo = shots[i], &s_hi = shots[i + 1];
        if (s_lo.side * s_hi.side >= 0.0) continue;
        if (s_lo.min_dist > 0.6 * w.norm() || s_hi.min_dist > 0.6 * w.norm()) continue;
        double lo = angles[i], hi = angles[i + 1];
        double side_lo = s_lo.side;
        for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
            double mid = 0.5 * (lo + hi);
            Shot s = fire(spec, w, mid, r0, dt);
            if (s.reached) return finish_record(spec, m, n, std::move(s), mid);
            if (s.side * side_lo > 0.0)
                lo = mid;
            else
                hi = mid;
        }
    }
    throw SolverError("NoConnection",
                      "no launch angle approached the target lattice point within the arclength budget");
}

LimitingDirection limiting_direction(const Orbit& orbit, const CriticalData& crit) {
    if (orbit.size() < 8) throw ConfigError("BadConfig", "orbit too short for a tail fit");
    Vec2 w = nearest_lattice(orbit.positions.back());

    std::vector<double> r(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) r[i] = (orbit.positions[i] - w).norm();
    double r_end = r.back();
    if (!(r_end > 0.0)) throw SolverError("NotConverging", "tail endpoint sits on the lattice point");

    // Last decade of radial decay, with monotonicity enforced over it.
    std::size_t start = orbit.size() - 1;
    while (start > 0 && r[start - 1] <= 10.0 * r_end) --start;
    if (orbit.size() - start < 4) start = orbit.size() >= 4 ? orbit.size() - 4 : 0;
    for (std::size_t i = start + 1; i < orbit.size(); ++i)
        if (r[i] > r[i - 1] * (1.0 + 1e-10) + 1e-15)
            throw SolverError("NotConverging", "|xi| not monotone decreasing over the tail");

    Vec2 acc{0.0, 0.0};
    for (std::size_t i = start; i < orbit.size(); ++i) acc += (orbit.positions[i] - w) / r[i];
    Vec2 dir = acc.unit();

    LimitingDirection out;
    const Vec2 cands[4] = {crit.v_a, -crit.v_a, crit.v_b, -crit.v_b};
    const char* tags[4] = {"a-generic", "a-generic", "b-exceptional", "b-exceptional"};
    double best = -2.0;
    for (int i = 0; i < 4; ++i) {
        double d = dir.dot(cands[i]);
        if (d > best) {
            best = d;
            out.dir = cands[i];
            out.tag = tags[i];
        }
    }
    out.angular_residual = std::acos(std::clamp(best, -1.0, 1.0));
    return out;
}

LPProblem lp_demo_problem(double a, double b, double alpha, double theta) {
    LPProblem prob;
    prob.a = a;
    prob.b = b;
    prob.q1 = {0.0, 0.0, alpha};
    prob.q2 = {0.0, 0.0, 0.0};
    prob.theta = theta;
    prob.lambda0 = 0.5 * (a + std::min(b, 2.0 * a));
    return prob;
}

LPResult lyapunov_perron_orbit(const LPProblem& prob) {
    const double a = prob.a, b = prob.b;
    if (!(0 < a && a < b)) throw ConfigError("BadConfig", "requires 0 < a < b");
    if (!(prob.lambda0 > a && prob.lambda0 < std::min(b, 2.0 * a)))
        throw ConfigError("BadConfig", "lambda0 must lie in (a, min(b, 2a))");
    if (!(prob.tolerance > 0)) throw ConfigError("BadConfig", "tolerance must be > 0");
    int N = std::max(16, prob.grid_points);
    if (N % 2) ++N;
    const double T = prob.t_max > 0.0 ? prob.t_max : 40.0 / a;
    const double h = T / N;

    LPResult res;
    res.times.resize(N + 1);
    for (int i = 0; i <= N; ++i) res.times[i] = i * h;

    // Advisory admissibility window: Lip(F) <= 2 M r on |x| <= r against the
    // contraction budget (b-a) / (2 (lambda0-a)(b-lambda0)); theta window r0/4.
    double M = std::max(std::fabs(prob.q1[0]) + std::fabs(prob.q1[1]) + std::fabs(prob.q1[2]),
                        std::fabs(prob.q2[0]) + std::fabs(prob.q2[1]) + std::fabs(prob.q2[2]));
    double budget = (b - a) / (2.0 * (prob.lambda0 - a) * (b - prob.lambda0));
    double r0 = M > 0.0 ? budget / (2.0 * M) : std::numeric_limits<double>::infinity();
    res.theta_window = 0.25 * r0;
    res.theta_window_exceeded = std::fabs(prob.theta) > res.theta_window;

    std::vector<double> x1(N + 1, 0.0), x2(N + 1), f1(N + 1), f2(N + 1), n1(N + 1), n2(N + 1);
    for (int i = 0; i <= N; ++i) x2[i] = prob.theta * std::exp(-b * res.times[i]);

    Moments ma = exp_moments(a * h, h);
    Moments mb = exp_moments(b * h, h);
    const double eah = std::exp(a * h);
    const double embh = std::exp(-b * h);

    auto apply = [&]() {
        for (int i = 0; i <= N; ++i) {
            f1[i] = prob.q1[0] * x1[i] * x1[i] + prob.q1[1] * x1[i] * x2[i] +
                    prob.q1[2] * x2[i] * x2[i];
            f2[i] = prob.q2[0] * x1[i] * x1[i] + prob.q2[1] * x1[i] * x2[i] +
                    prob.q2[2] * x2[i] * x2[i];
        }
        // First component, backward: J_i = Int_{t_i}^{inf} e^{a(s-t_i)} F1 ds,
        // with the beyond-horizon tail modeled as F1(T) e^{-2b(s-T)}.
        double J = f1[N] / (2.0 * b - a);
        n1[N] = -J;
        for (int i = N - 1; i >= 0; --i) {
            double c0, c1, c2;
            cell_quad(f1, static_cast<std::size_t>(i), h, c0, c1, c2);
            double C = c0 * ma.m0 + c1 * ma.m1 + c2 * ma.m2;
            J = C + eah * J;
            n1[i] = -J;
        }
        // Second component, forward: K_{i+1} = e^{-bh} K_i + cell integral.
        double K = 0.0;
        n2[0] = prob.theta;
        for (int i = 0; i < N; ++i) {
            double c0, c1, c2;
            cell_quad(f2, static_cast<std::size_t>(i), h, c0, c1, c2);
            double D = embh * (c0 * mb.m0 + c1 * mb.m1 + c2 * mb.m2);
            K = embh * K + D;
            n2[i + 1] = prob.theta * std::exp(-b * res.times[i + 1]) + K;
        }
    };

    double prev_gap = -1.0;
    res.iterate_bound_factor = 0.0;
    const double abs_theta = std::fabs(prob.theta);
    for (int it = 1; it <= 200; ++it) {
        apply();
        double gap = 0.0;
        for (int i = 0; i <= N; ++i) {
            gap = std::max(gap, std::fabs(n1[i] - x1[i]));
            gap = std::max(gap, std::fabs(n2[i] - x2[i]));
        }
        x1 = n1;
        x2 = n2;
        res.iterations = it;
        res.final_gap = gap;
        if (abs_theta > 0.0) {
            for (int i = 0; i <= N; ++i) {
                double mag = std::sqrt(x1[i] * x1[i] + x2[i] * x2[i]);
                res.iterate_bound_factor = std::max(
                    res.iterate_bound_factor, mag / (abs_theta * std::exp(-b * res.times[i])));
            }
        }
        if (prev_gap > 10.0 * prob.tolerance) {
            double ratio = gap / prev_gap;
            res.contraction_factor = std::max(res.contraction_factor, ratio);
            if (ratio > 0.9)
                throw SolverError("ContractionFailure",
                                  "iteration gap ratio exceeded 0.9 (theta outside the window?)");
        }
        if (gap <= prob.tolerance) {
            res.values.resize(N + 1);
            for (int i = 0; i <= N; ++i) res.values[i] = {x1[i], x2[i]};
            return res;
        }
        prev_gap = gap;
    }
    throw SolverError("ContractionFailure", "iteration did not reach tolerance in 200 sweeps");
}

double near_origin_action_raw(double a, double b, double s1, double s2, double beta1,
                              double beta2) {
    if (!(0 < a && a < b)) throw ConfigError("BadConfig", "requires 0 < a < b");
    return 0.5 * (a * (s1 * s1 + s2 * s2) + b * (beta1 * beta1 * s1 * s1 + beta2 * beta2 * s2 * s2));
}

double near_origin_action(double a, double b, double s1, double s2, double beta1, double beta2) {
    if (!(0 < a && a < b)) throw ConfigError("BadConfig", "requires 0 < a < b");
    bool degenerate = (s1 == 0.0 && s2 == 0.0);
    if (!degenerate && !(s1 < 0.0 && s2 > 0.0))
        throw ConfigError("BadConfig", "requires s1 < 0 < s2");
    double lam = lambda_proof(a, b);  // smaller of the two exposed constants
    if (!(beta1 > 0.0 && beta1 <= lam + 1e-15) || !(beta2 > 0.0 && beta2 <= lam + 1e-15))
        throw ConfigError("BadBeta", "beta_i must lie in (0, lambda]");
    return near_origin_action_raw(a, b, s1, s2, beta1, beta2);
}

double dominance_constant(const Orbit& orbit, const PotentialSpec& spec) {
    double max_h = 0.0;
    for (const Vec2& v : orbit.velocities) max_h = std::max(max_h, v.norm2());
    if (max_h <= 0.0) return 0.0;

    double min_ratio = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        double hh = orbit.velocities[i].norm2();
        if (hh < 1e-14 * max_h) continue;
        Vec2 g;
        Sym2 H;
        eval_derivatives(spec, orbit.positions[i], g, H);
        double num = 2.0 * g.norm2() - 2.0 * H.quad(orbit.velocities[i]);
        min_ratio = std::min(min_ratio, num / hh);
        any = true;
    }
    if (!any || min_ratio <= 0.0) return 0.0;
    return std::sqrt(min_ratio);
}

DecayReport decay_check(const Orbit& orbit, const PotentialSpec& spec, double c, double slack) {
    DecayReport rep;
    double measured = dominance_constant(orbit, spec);
    if (c <= 0.0) c = measured;
    rep.c = c;

    double max_h = 0.0;
    for (const Vec2& v : orbit.velocities) max_h = std::max(max_h, v.norm2());
    rep.dominance_ok = (max_h == 0.0) || (measured > 0.0 && measured >= c - 1e-12);

    double t0 = orbit.times.front();
    double T = orbit.times.back() - t0;
    double h0 = orbit.velocities.front().norm2();
    double hT = orbit.velocities.back().norm2();
    rep.worst_margin = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        double t = orbit.times[i] - t0;
        double bound = h0 * std::exp(-c * t) + hT * std::exp(-c * (T - t));
        rep.worst_margin = std::max(rep.worst_margin, orbit.velocities[i].norm2() - bound);
    }
    (void)slack;  // the caller compares worst_margin against its slack

    // Corollary-style fit: log(|xi - w| + |xi'|) against t, least squares.
    Vec2 w = nearest_lattice(orbit.positions.back());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    std::vector<double> logs(orbit.size(), 0.0), ts(orbit.size(), 0.0);
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        double g = (orbit.positions[i] - w).norm() + orbit.velocities[i].norm();
        if (!(g > 0.0)) continue;
        double lg = std::log(g);
        ts[cnt] = orbit.times[i];
        logs[cnt] = lg;
        sx += orbit.times[i];
        sy += lg;
        sxx += orbit.times[i] * orbit.times[i];
        sxy += orbit.times[i] * lg;
        ++cnt;
    }
    if (cnt >= 2) {
        double denom = cnt * sxx - sx * sx;
        double slope = denom != 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
        double icept = (sy - slope * sx) / cnt;
        rep.fit_lambda = -slope;
        double rss = 0.0;
        for (std::size_t i = 0; i < cnt; ++i) {
            double e = logs[i] - (icept + slope * ts[i]);
            rss += e * e;
        }
        rep.fit_residual = std::sqrt(rss / cnt);
    }
    return rep;
}

DirectionOverlapReport direction_overlap_probe(const HomoclinicRecord& rec1,
                                               const HomoclinicRecord& rec2) {
    DirectionOverlapReport rep;
    double d = std::clamp(rec1.dir_forward.dot(rec2.dir_backward), -1.0, 1.0);
    rep.angle = std::acos(d);
    rep.forbidden = rep.angle < 1e-3;
    return rep;
}

double orbit_action(const Orbit& orbit, const PotentialSpec& spec) {
    std::vector<double> lag(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i)
        lag[i] = 0.5 * orbit.velocities[i].norm2() - eval_potential(spec, orbit.positions[i]);
    return simpson(orbit.times, lag);
}

}  // namespace hbargeo
