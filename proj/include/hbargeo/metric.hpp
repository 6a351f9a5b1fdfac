// metric.hpp — degenerate Maupertuis metric and minimal-action support values.
//
// At level c >= 0 the mechanical action of a path equals its length in the
// degenerate metric ds = sqrt(2(c - V)) |dx| (AM-GM, equality at speed
// |eta'| = sqrt(2(c - V))). Distances are computed by Dijkstra on a
// 16-neighbor lattice graph over a finite cover of the torus; at c = 0 the
// weight vanishes exactly at lattice points, and the distance from lattice
// point 0 to lattice point w is the support value sigma(w) that carves the
// flat set F0 = {p : p.w <= sigma(w) for all w}.
#pragma once

#include <cstdint>
#include <vector>

#include "hbargeo/cell_pde.hpp"
#include "hbargeo/common.hpp"
#include "hbargeo/potential.hpp"

namespace hbargeo {

struct MetricGrid {
    int resolution{0};          // nodes per unit length
    int window{0};              // cover is [-(window+1), window+1]^2
    double level_c{0.0};
    int side{0};                // nodes per side = 2*(window+1)*resolution + 1
    double origin{0.0};         // coordinate of node index 0 (= -(window+1))
    std::vector<double> weight; // sqrt(2(c - V)) samples, row-major, x fastest
    long clamped_negative{0};   // radicand < 0 occurrences (normalization residue)
    long near_zero_off_lattice{0}; // weight < 1e-6 away from lattice points at c = 0

    int node_index(int ix, int iy) const { return iy * side + ix; }
    bool in_window(Vec2 x) const;
    int nearest_node(Vec2 x) const;  // throws SolverError("OutOfWindow")
    Vec2 node_pos(int idx) const;
};

struct SupportEntry {
    int m{0}, n{0};   // canonical representative: m > 0, or (m == 0 and n > 0)
    double sigma{0.0};
};

struct SupportTable {
    int resolution{0};
    int window{0};
    std::vector<SupportEntry> entries;  // ordered by (|w|_inf, lex)
    double eps_grid{0.0};  // measured refinement gap: max |sigma_res - sigma_{res/2}|

    // sigma for any nonzero integer vector present in the table (either sign);
    // returns -1 if absent.
    double lookup(int m, int n) const;
};

struct SubsolutionReport {
    int samples{0};
    int violations{0};       // margin < -slack occurrences
    double worst_margin{0.0};// min over pairs of h(x,y) - [p.(y-x) + v(y) - v(x)]
    double slack{0.0};
};

// Samples sqrt(2(c - V)) over the cover. Throws ConfigError("BadLevel") if c < 0.
MetricGrid build_metric_grid(const PotentialSpec& spec, double c, int resolution, int window);

// Shortest-path distance between two points of the cover (snapped to nodes).
// Deterministic: heap keys are (distance, node index).
double geodesic_distance(const MetricGrid& grid, Vec2 x, Vec2 y);

// Full distance field from one source (snapped to a node).
std::vector<double> distances_from(const MetricGrid& grid, Vec2 x);

// sigma(w) = zero-level distance from lattice point 0 to lattice point w.
double support_value(const PotentialSpec& spec, int m, int n, int resolution, int window);

// All primitive classes with |w|_inf <= window from a single Dijkstra sweep,
// canonicalized over +/- pairs; eps_grid measured against resolution/2.
SupportTable build_support_table(const PotentialSpec& spec, int window, int resolution);

// Checks h(x,y) >= p.(y-x) + v(y) - v(x) - slack on `samples` random pairs.
SubsolutionReport subsolution_inequality_check(const PotentialSpec& spec, Vec2 p,
                                               const CorrectorField& corrector, int samples,
                                               std::uint64_t seed, int resolution = 128,
                                               double slack = 3e-2);

// Numerical omega(delta) = inf { h(x,y) : |x - y| >= delta } over sampled base
// points x in one cell (stride 0 -> default max(1, resolution/32)).
double min_gap_omega(const PotentialSpec& spec, double delta, int resolution, int stride = 0);

}  // namespace hbargeo
