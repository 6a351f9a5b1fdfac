// orbits.hpp — mechanical characteristics, homoclinic shooting, stable-manifold
// iteration, and the near-origin action comparison.
//
// Dynamics: xi'' = -DV(xi). Integration is 4th-order symplectic (Forest–Ruth
// composition) with optional per-step energy projection (velocity rescaled to
// the initial energy shell), which is what keeps zero-energy homoclinic arcs
// on-shell over long shooting times.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "hbargeo/common.hpp"
#include "hbargeo/potential.hpp"

namespace hbargeo {

struct Orbit {
    std::vector<double> times;
    std::vector<Vec2> positions;
    std::vector<Vec2> velocities;
    double energy{0.0};  // (1/2)|v|^2 + V at t = 0

    std::size_t size() const { return times.size(); }
    double energy_at(std::size_t i, const PotentialSpec& spec) const;
};

struct HomoclinicRecord {
    int m{0}, n{0};            // homology class (primitive)
    double action{0.0};        // full action including quadratic-model tails
    double arc_action{0.0};    // action of the integrated arc only
    Orbit orbit;
    double terminal_gap{0.0};  // distance of endpoints to their lattice points
    Vec2 dir_backward, dir_forward;  // limiting directions (unit)
    double launch_angle{0.0};
};

struct LPProblem {
    double a{1.0}, b{2.0};              // 0 < a < b
    // Quadratic nonlinearity: F_i(x) = q_i[0] x1^2 + q_i[1] x1 x2 + q_i[2] x2^2.
    std::array<double, 3> q1{0.0, 0.0, 0.0};
    std::array<double, 3> q2{0.0, 0.0, 0.0};
    double theta{0.0};
    double lambda0{1.5};                // a < lambda0 < min(b, 2a)
    double t_max{0.0};                  // 0 -> default 40/a
    int grid_points{16384};
    double tolerance{1e-12};
};

struct LPResult {
    std::vector<double> times;
    std::vector<Vec2> values;           // fixed-point orbit samples
    int iterations{0};
    double final_gap{0.0};
    double contraction_factor{0.0};     // max over iterates of gap ratio
    double iterate_bound_factor{0.0};   // max over iterates of |xi(t)| / (|theta| e^{-bt})
    double theta_window{0.0};           // formulaic admissible |theta| (r0/4); advisory
    bool theta_window_exceeded{false};
};

struct DecayReport {
    double c{0.0};               // measured quadratic-dominance constant
    double worst_margin{0.0};    // max over samples of h(t) - bound(t)  (<= slack required)
    double fit_lambda{0.0};      // log-linear decay rate of |xi| + |xi'|
    double fit_residual{0.0};
    bool dominance_ok{false};    // c^2 > 0 measured on the whole segment
};

struct DirectionOverlapReport {
    double angle{0.0};           // between rec1 forward and rec2 backward directions
    bool forbidden{false};       // angle < 1e-3 (coincident limiting directions)
};

// --- integration -------------------------------------------------------------

// Forest–Ruth symplectic integration of xi'' = -DV(xi) from (x0, v0) over [0, T].
// Throws SolverError("BlowUp") if |xi| exceeds blow_up_radius.
Orbit integrate_characteristic(const PotentialSpec& spec, Vec2 x0, Vec2 v0, double T, double dt,
                               bool energy_projection = true, double blow_up_radius = 64.0);

// Same integrator in the pure saddle model V = -(1/2)(a^2 x1^2 + b^2 x2^2)
// (used by the near-origin comparisons, where the dynamics is exactly linear).
Orbit integrate_quadratic_model(double a, double b, Vec2 x0, Vec2 v0, double T, double dt,
                                bool energy_projection = false, double blow_up_radius = 64.0);

// --- homoclinics -------------------------------------------------------------

// Zero-energy shooting from the r0-circle around lattice point 0 toward
// lattice point w = (m, n): outward launches, angular bisection to 1e-10, tail
// actions from the quadratic local model inside the r0-balls.
// Throws SolverError("NoConnection") if no approach is found.
HomoclinicRecord shoot_homoclinic(const PotentialSpec& spec, int m, int n,
                                  double r0 = 1e-3, double tol = 1e-8, double dt = 1e-3);

// Fits the tail direction of a decaying orbit and snaps to {+-v_a, +-v_b}.
// tag: "a-generic" or "b-exceptional". Throws SolverError("NotConverging") if
// |xi| is not monotone decreasing over the fitted tail.
struct LimitingDirection {
    Vec2 dir;
    std::string tag;
    double angular_residual{0.0};
};
LimitingDirection limiting_direction(const Orbit& orbit, const CriticalData& crit);

// --- stable-manifold iteration ------------------------------------------------

// Picard-iterates the integral operator whose fixed point is the strong-stable
// orbit with x2(0) = theta:
//   (T xi)_1(t) = -Int_t^Tmax e^{a(s-t)} F1(xi(s)) ds     (decay at +inf)
//   (T xi)_2(t) = theta e^{-bt} + Int_0^t e^{-b(t-s)} F2(xi(s)) ds
// Cell integrals use exact exponential moments of a quadratic interpolant, so
// the grid error is O(h^3) without stiffness issues. Throws
// SolverError("ContractionFailure") if the sup-norm gap ratio exceeds 0.9.
LPResult lyapunov_perron_orbit(const LPProblem& prob);

// Canonical demo problem: F1 = alpha x2^2, F2 = 0.
LPProblem lp_demo_problem(double a, double b, double alpha, double theta);

// --- near-origin action --------------------------------------------------------

// Closed-form two-ray action (1/2)[a(s1^2+s2^2) + b(beta1^2 s1^2 + beta2^2 s2^2)].
// Validated: s1 < 0 < s2 unless both are 0, and beta_i in (0, lambda_proof(a,b)]
// (throws ConfigError("BadBeta") / ConfigError("BadConfig")).
double near_origin_action(double a, double b, double s1, double s2, double beta1, double beta2);

// Same expression without the admissibility gate (used to compare against
// connecting orbits whose endpoint slopes necessarily exceed lambda).
double near_origin_action_raw(double a, double b, double s1, double s2, double beta1, double beta2);

// --- diagnostics ---------------------------------------------------------------

// Measures the quadratic-dominance constant of a segment: the square root of
// min over samples of (2|DV|^2 - 2 xi'.D2V.xi') / |xi'|^2 (0 if nonpositive).
double dominance_constant(const Orbit& orbit, const PotentialSpec& spec);

// Verifies h(t) = |xi'(t)|^2 <= h(0) e^{-ct} + h(T) e^{-c(T-t)} + slack at all
// samples. c <= 0 means "measure it from the orbit" via dominance_constant.
DecayReport decay_check(const Orbit& orbit, const PotentialSpec& spec, double c = 0.0,
                        double slack = 1e-6);

DirectionOverlapReport direction_overlap_probe(const HomoclinicRecord& rec1,
                                               const HomoclinicRecord& rec2);

// Action of an orbit sample: Int (1/2)|v|^2 - V dt by Simpson on the stored grid.
double orbit_action(const Orbit& orbit, const PotentialSpec& spec);

}  // namespace hbargeo
