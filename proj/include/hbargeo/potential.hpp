// potential.hpp — Z^2-periodic potentials as finite Fourier cosine sums.
//
// V(x) = offset + sum_j amp_j * cos(2*pi*(k_j . x) + phase_j), normalized so
// that max V = 0. Finite sums give exact term-wise derivatives, which removes
// differentiation error from every downstream engine (PDE, metric, orbits).
#pragma once

#include <string>
#include <vector>

#include "hbargeo/common.hpp"

namespace hbargeo {

struct FourierTerm {
    double amp{0.0};
    int k1{0}, k2{0};
    double phase{0.0};
};

struct PotentialSpec {
    std::vector<FourierTerm> terms;
    std::string template_name;  // "", "separable", "perturbed-separable", "annulus-barrier"
    double offset{0.0};         // normalization offset, chosen so max V = 0
};

// Critical data at the unique nondegenerate maximum: Hessian eigenvalues
// -a^2, -b^2 with 0 < a < b, unit eigenvectors v_a, v_b, and the two lambda
// constants of the near-origin analysis.
struct CriticalData {
    Vec2 maximizer;
    double a{0.0}, b{0.0};
    Vec2 v_a, v_b;
    double lambda_statement{0.0};
    double lambda_proof{0.0};
};

struct AssumptionMReport {
    bool unique_maximum{false};
    bool distinct_eigenvalues{false};
    bool negative_definite{false};
    double min_neg_away{0.0};     // min of -V over grid nodes away from the maximizer (> 0 required)
    double second_peak{-1.0};     // value at the best competing local maximum (<= -tol required)
    double eig_gap{0.0};          // |a - b|
    bool pass() const { return unique_maximum && distinct_eigenvalues && negative_definite && min_neg_away > 0.0; }
};

// --- construction -----------------------------------------------------------

// Named templates (all normalized by construction).
PotentialSpec make_template(const std::string& name);

// amp1*(cos 2pi x1 - 1) + amp2*(cos 2pi x2 - 1); amps > 0.
PotentialSpec make_separable(double amp1, double amp2);

// Re-normalizes: offset adjusted so that max V over a grid scan (default
// 1024^2) polished by Newton ascent equals 0 exactly at the located maximizer.
void normalize(PotentialSpec& spec, int grid_n = 1024);

// --- evaluation --------------------------------------------------------------

double eval_potential(const PotentialSpec& spec, Vec2 x);
Vec2 eval_gradient(const PotentialSpec& spec, Vec2 x);
void eval_derivatives(const PotentialSpec& spec, Vec2 x, Vec2& grad, Sym2& hess);

// Minimum of V over an n x n grid (used for solver bounds; V <= 0 everywhere).
double grid_min(const PotentialSpec& spec, int grid_n = 512);

// --- assumption (M) ----------------------------------------------------------

double lambda_statement(double a, double b);  // (a/b) sqrt((b-a)/(b+a))
double lambda_proof(double a, double b);      // sqrt(a^2 (b-a) / (b^2 (b+4a)))

// Throws SolverError("DegenerateMaximum") if the Hessian eigenvalues coincide
// within 1e-8 or any eigenvalue >= -1e-8; SolverError("MultipleMaxima") if a
// second grid maximum within tolerance of 0 exists away from the first.
CriticalData critical_data(const PotentialSpec& spec);

// Non-throwing scan; failures are carried in the report flags.
AssumptionMReport check_assumption_m(const PotentialSpec& spec, int grid_n = 256);

}  // namespace hbargeo
