// geometry.hpp — polygonal model of the flat set F0 and its boundary structure.
//
// F0 is the intersection of half-planes {p : p.w <= sigma(w)}. Construction
// goes through the dual: points w/sigma(w) are convex-hulled; hull vertices
// are the active constraints (polygon edges, outward normal w/|w|), hull edges
// are polygon vertices (intersection of consecutive active constraints).
#pragma once

#include <array>
#include <string>
#include <vector>

#include "hbargeo/common.hpp"
#include "hbargeo/metric.hpp"

namespace hbargeo {

struct PolyEdge {
    Vec2 a, b;          // endpoints, CCW order
    int wm{0}, wn{0};   // active constraint (outward normal direction)
    double sigma{0.0};
    bool stable{false}; // persists under refinement (set by detect_flat_edges)
    double length() const { return (b - a).norm(); }
};

struct ConvexPolygon {
    std::vector<Vec2> verts;      // CCW; vertex i joins edges[i-1] and edges[i]
    std::vector<PolyEdge> edges;  // edge i runs verts[i] -> verts[i+1 mod n]
    double area() const;
    double max_support(int m, int n) const;  // max over vertices of p.(m,n)
    bool contains(Vec2 p, double tol = 1e-12) const;
};

struct EdgeRecord {
    Vec2 a, b;
    int wm{0}, wn{0};
    double length{0.0};
    bool stable{false};
};

// Unit outward normal cone at a boundary point, as a CCW angular interval
// [lo, hi] (lo == hi at edge-interior points).
struct AngularInterval {
    double lo{0.0}, hi{0.0};
    bool is_vertex{false};
    double width() const;
    bool contains(double angle, double tol) const;
};

struct HomologyFan {
    Vec2 p;
    std::vector<std::array<int, 2>> classes;     // reduced fan: {v0, v1[, v0+v1]} or fewer
    std::vector<std::array<int, 2>> raw_active;  // every table w with p.w >= sigma(w) - tol
    bool cone_consistent{true};  // every class direction lies in the normal cone
};

struct UnimodularReport {
    std::array<int, 2> v0{0, 0};  // outgoing-edge normal
    std::array<int, 2> v1{0, 0};  // incoming-edge normal
    int det{0};                   // det of columns (v1, v0)
    int det_swapped{0};
    bool cone_ok{false};          // both cone-equation edge rays match the polygon
};

enum class PointKind {
    EdgeInterior,               // linear point
    Vertex,                     // corner
    NonlinearCandidate,         // short/unstable edge region
    RationalNonlinearCandidate  // as above, with rational local normal in-window
};

struct PointClassification {
    Vec2 p;  // snapped to the boundary
    PointKind kind{PointKind::EdgeInterior};
    AngularInterval cone;
    double confidence{1.0};  // local edge length / eps_edge, capped at 1
    Vec2 local_normal;       // unit outward normal (cone midpoint at vertices)
};

// Half-plane intersection of the support table (both signs of every entry).
// Throws SolverError("EmptyInterior") if the result has no interior.
ConvexPolygon build_f0(const SupportTable& table);

// Support tables and polygons across a refinement schedule (lists zipped).
std::vector<ConvexPolygon> refine_f0(const PotentialSpec& spec, const std::vector<int>& windows,
                                     const std::vector<int>& resolutions);

// Edges of the final polygon longer than eps_edge; stable when an edge with
// the same normal exists in the previous stage with endpoints within eps_edge/4.
std::vector<EdgeRecord> detect_flat_edges(const std::vector<ConvexPolygon>& seq, double eps_edge);

// Throws SolverError("NotOnBoundary") if p is farther than tol from the boundary.
AngularInterval normal_cone(const ConvexPolygon& poly, Vec2 p, double tol);

// Active classes at p (see HomologyFan); tol is the support-slack tolerance.
HomologyFan homology_fan(Vec2 p, const SupportTable& table, double tol);

// Unimodularity and cone-equation check at a polygon vertex.
// Throws SolverError("NotAVertex") if p is not within tol of a vertex.
UnimodularReport vertex_unimodular_check(const ConvexPolygon& poly, Vec2 p, double tol = 1e-6);

PointClassification classify_boundary_point(Vec2 p, const ConvexPolygon& poly,
                                            const SupportTable& table, double tol,
                                            double eps_edge = 5e-2);

}  // namespace hbargeo
