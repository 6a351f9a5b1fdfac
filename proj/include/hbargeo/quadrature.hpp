// quadrature.hpp — composite Gauss–Legendre integration on panels.
//
// The integrands in this project are analytic inside panels but can have
// |x|-type kinks at panel endpoints (square roots of functions with double
// zeros), so the composite rule subdivides at those points and lets the
// per-panel order-32 rule converge exponentially on each piece.
#pragma once

#include <cstddef>
#include <functional>

namespace hbargeo {

// Order-32 Gauss–Legendre rule on [a, b].
double gauss32(const std::function<double(double)>& f, double a, double b);

// Composite rule on [a, b]: split into m equal panels, gauss32 on each.
double gauss32_composite(const std::function<double(double)>& f, double a, double b, int panels);

// Adaptive-by-doubling composite rule: doubles the panel count until the
// result changes by less than abs_tol (or panel cap reached). Suited to
// integrands that are piecewise-analytic on [a, b].
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12, int max_panels = 1024);

}  // namespace hbargeo
