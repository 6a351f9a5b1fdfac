#include "hbargeo/quadrature.hpp"

#include <cmath>

namespace hbargeo {

namespace {

// Order-32 Gauss–Legendre rule on [-1, 1]: positive nodes and weights
// (the rule is symmetric).
constexpr int kHalf = 16;
constexpr double kNodeWeight[kHalf][2] = {
    {0.04830766568773831, 0.096540088514727812},
    {0.14447196158279649, 0.095638720079274833},
    {0.23928736225213706, 0.093844399080804566},
    {0.33186860228212767, 0.091173878695763863},
    {0.42135127613063533, 0.087652093004403908},
    {0.50689990893222936, 0.083311924226946846},
    {0.5877157572407623, 0.078193895787070311},
    {0.66304426693021523, 0.072345794108848449},
    {0.73218211874028971, 0.065822222776361752},
    {0.79448379596794239, 0.058684093478535704},
    {0.84936761373256997, 0.050998059262376244},
    {0.8963211557660522, 0.042835898022226426},
    {0.93490607593773967, 0.034273862913021626},
    {0.96476225558750639, 0.025392065309262427},
    {0.98561151154526838, 0.016274394730905965},
    {0.99726386184948157, 0.0070186100094692984},
};

}  // namespace

double gauss32(const std::function<double(double)>& f, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < kHalf; ++i) {
        double dx = half * kNodeWeight[i][0];
        acc += kNodeWeight[i][1] * (f(mid + dx) + f(mid - dx));
    }
    return acc * half;
}

double gauss32_composite(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) panels = 1;
    double acc = 0.0;
    double width = (b - a) / panels;
    for (int j = 0; j < panels; ++j) {
        acc += gauss32(f, a + j * width, a + (j + 1) * width);
    }
    return acc;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_panels) {
    if (!(b > a)) return 0.0;
    int panels = 2;
    double prev = gauss32_composite(f, a, b, panels);
    while (panels < max_panels) {
        panels *= 2;
        double cur = gauss32_composite(f, a, b, panels);
        if (std::fabs(cur - prev) <= abs_tol) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace hbargeo
