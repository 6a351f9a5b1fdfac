// onedim.hpp — exact 1D effective Hamiltonian for separable potentials.
//
// For a 1-periodic h with max h = 0, the 1D effective Hamiltonian has the
// closed characterization
//     Hbar(p) = 0                          for |p| <= L = Int_0^1 sqrt(-2 h),
//     |p| = Int_0^1 sqrt(2(Hbar(p) - h))   otherwise (strictly increasing in
//                                          Hbar, so the root is unique).
// Separable 2D potentials sum componentwise. This module is the ground-truth
// oracle for the PDE and metric engines.
#pragma once

#include <vector>

#include "hbargeo/common.hpp"

namespace hbargeo {

struct OneDimTerm {
    double amp{0.0};
    int k{0};
    double phase{0.0};
};

struct OneDimPotential {
    std::vector<OneDimTerm> terms;
    double offset{0.0};
};

// amp*(cos 2pi x - 1); normalized by construction.
OneDimPotential cosine_well(double amp);

double eval_h(const OneDimPotential& h, double x);
double eval_h_prime(const OneDimPotential& h, double x);

// Adjusts offset so max h = 0 (scan + Newton polish).
void normalize(OneDimPotential& h);

// Zeros of h in [0,1) (= maxima, since h <= 0); quadrature subdivides here.
std::vector<double> zeros_of_h(const OneDimPotential& h);

// L = Int_0^1 sqrt(-2h(x)) dx, composite Gauss with subdivision at zeros of h;
// absolute error <= 1e-10.
double critical_momentum(const OneDimPotential& h);

// The 1D effective Hamiltonian described above, to absolute accuracy 1e-10.
double hbar_1d(const OneDimPotential& h, double p);

// Hbar(p) = Hbar_1(p1) + Hbar_2(p2).
double hbar_separable(const OneDimPotential& h1, const OneDimPotential& h2, Vec2 p);

}  // namespace hbargeo
