// cell_pde.hpp — effective Hamiltonian via the large-time cell-problem method.
//
// Evolves w_t + (1/2)|p + Dw|^2 + V = 0 on the unit torus with a monotone
// Lax–Friedrichs discretization from w = 0. The per-node drift converges to
// the constant -Hbar(p); the corrector is v = w - mean(w). Grid continuation
// (coarse solve prolonged to finer grids) trims the large-time transient.
#pragma once

#include <vector>

#include "hbargeo/common.hpp"
#include "hbargeo/potential.hpp"

namespace hbargeo {

struct CorrectorField {
    int grid_n{0};
    std::vector<double> values;  // n*n corrector samples v (zero mean), row-major, x fastest
    double hbar{0.0};
    double residual{0.0};        // sup-norm defect of the discrete cell equation at v
    double residual_scale_c{0.0};// C such that residual = C / grid_n
    double theta1{0.0}, theta2{0.0};  // final per-axis artificial viscosities
    long steps{0};
    double time{0.0};

    double value_at(Vec2 x) const;  // bilinear periodic interpolation
};

struct HbarGrid {
    double p_min{0.0}, p_max{0.0}, p_step{0.0};
    int nodes{0};                // nodes per side
    int grid_n{0};
    double tol{0.0};
    std::vector<double> hbar;      // row-major: index = i1 * nodes + i2, p1 outer
    std::vector<double> residual;
    std::vector<unsigned char> ok; // 0 where the solve failed (value missing)

    double p_at(int i) const { return p_min + p_step * i; }
    int index(int i1, int i2) const { return i1 * nodes + i2; }
};

struct GlobalPropertyReport {
    double evenness_defect{0.0};       // max |Hbar(p) - Hbar(-p)| over nodes
    double convexity_violation{0.0};   // worst midpoint-convexity defect over collinear triples
    double lower_bound_violation{0.0}; // worst of (1/2|p|^2 + min V) - Hbar
    double upper_bound_violation{0.0}; // worst of Hbar - 1/2|p|^2
    double min_hbar{0.0};
    bool pass(double bound_slack, double convexity_slack) const {
        return evenness_defect <= 1e-15 && convexity_violation <= convexity_slack &&
               lower_bound_violation <= bound_slack && upper_bound_violation <= bound_slack;
    }
};

// Solves the cell problem at momentum p. Throws SolverError("NoConvergence")
// if the drift fails to flatten within the step budget and
// SolverError("NegativeHbar") if the measured hbar is below the discretization
// allowance -max(tol, 1/grid_n); negatives inside the allowance clamp to 0.
CorrectorField solve_cell(const PotentialSpec& spec, Vec2 p, int grid_n, double tol);

// Solves on the symmetric p-grid [-p_box, p_box]^2 with spacing p_step;
// computes the closed half (p1 > 0, or p1 = 0 and p2 >= 0) and mirrors the
// rest (Hbar is even). Node failures are recorded, not thrown.
HbarGrid sweep_hbar_grid(const PotentialSpec& spec, double p_box, double p_step,
                         int grid_n, double tol);

GlobalPropertyReport validate_global_properties(const HbarGrid& grid, double min_v);

// Largest r such that every node with |p| <= r has hbar <= eps_flat.
// Throws SolverError("NotInterior") if not even the innermost node qualifies.
double interior_point_check(const HbarGrid& grid, double eps_flat);

}  // namespace hbargeo
