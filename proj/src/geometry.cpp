#include "hbargeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hbargeo {

namespace {

// A half-plane constraint p . w <= sigma together with its dual point w/sigma.
struct Constraint {
    int wm, wn;
    double sigma;
    Vec2 dual;
};

double cross3(Vec2 o, Vec2 a, Vec2 b) { return (a - o).cross(b - o); }

// Andrew monotone chain over the dual points, counterclockwise. Collinear
// points are dropped (tolerance 1e-9): a dual point on a hull edge is a
// redundant constraint, and keeping it would bevel the polygon's corners
// with spurious micro-edges.
std::vector<Constraint> dual_hull(std::vector<Constraint> pts) {
    std::sort(pts.begin(), pts.end(), [](const Constraint& a, const Constraint& b) {
        if (a.dual.x != b.dual.x) return a.dual.x < b.dual.x;
        return a.dual.y < b.dual.y;
    });
    auto build = [&](auto begin, auto end) {
        std::vector<Constraint> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross3(chain[chain.size() - 2].dual, chain.back().dual, it->dual) <= 1e-9)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };
    std::vector<Constraint> lower = build(pts.begin(), pts.end());
    std::vector<Constraint> upper = build(pts.rbegin(), pts.rend());
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    return lower;  // counterclockwise cycle
}

Vec2 intersect_lines(const Constraint& a, const Constraint& b) {
    double det = a.wm * static_cast<double>(b.wn) - a.wn * static_cast<double>(b.wm);
    return {(a.sigma * b.wn - b.sigma * a.wn) / det, (a.wm * b.sigma - b.wm * a.sigma) / det};
}

// Assemble the polygon from an angularly ordered active-constraint cycle:
// vertex i is the meet of constraints i-1 and i, so edge i lies on constraint
// i. Degenerate edges (< 1e-9) drop their constraint and the loop retries.
ConvexPolygon assemble(std::vector<Constraint> active) {
    for (int guard = 0; guard < 64; ++guard) {
        std::size_t k = active.size();
        if (k < 3) throw SolverError("EmptyInterior", "fewer than 3 active constraints");
        std::vector<Vec2> verts(k);
        for (std::size_t i = 0; i < k; ++i) verts[i] = intersect_lines(active[(i + k - 1) % k], active[i]);

        int drop = -1;
        for (std::size_t i = 0; i < k && drop < 0; ++i)
            if ((verts[(i + 1) % k] - verts[i]).norm() < 1e-9) drop = static_cast<int>(i);
        if (drop >= 0) {
            active.erase(active.begin() + drop);
            continue;
        }

        ConvexPolygon poly;
        poly.verts = std::move(verts);
        poly.edges.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            poly.edges[i] = {poly.verts[i], poly.verts[(i + 1) % k], active[i].wm, active[i].wn,
                             active[i].sigma, false};
        }
        if (poly.area() <= 1e-12) throw SolverError("EmptyInterior", "degenerate polygon area");
        if (!poly.contains({0.0, 0.0}, -1e-12))
            throw SolverError("EmptyInterior", "origin is not strictly interior");
        return poly;
    }
    throw SolverError("EmptyInterior", "constraint culling did not terminate");
}

// Closest boundary point; returns (edge index, parameter, distance).
struct SnapResult {
    std::size_t edge{0};
    double t{0.0};
    double dist{0.0};
    Vec2 point;
};

SnapResult snap_to_boundary(const ConvexPolygon& poly, Vec2 p) {
    SnapResult best;
    best.dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.edges.size(); ++i) {
        Vec2 a = poly.edges[i].a, b = poly.edges[i].b;
        Vec2 ab = b - a;
        double t = std::clamp((p - a).dot(ab) / ab.norm2(), 0.0, 1.0);
        Vec2 q = a + ab * t;
        double d = (p - q).norm();
        if (d < best.dist) best = {i, t, d, q};
    }
    return best;
}

double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

Vec2 edge_normal(const PolyEdge& e) {
    return Vec2{static_cast<double>(e.wm), static_cast<double>(e.wn)}.unit();
}

}  // namespace

double ConvexPolygon::area() const {
    double acc = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
        acc += verts[i].cross(verts[(i + 1) % verts.size()]);
    return 0.5 * acc;
}

double ConvexPolygon::max_support(int m, int n) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const Vec2& v : verts) best = std::max(best, v.x * m + v.y * n);
    return best;
}

bool ConvexPolygon::contains(Vec2 p, double tol) const {
    for (const PolyEdge& e : edges)
        if (p.x * e.wm + p.y * e.wn > e.sigma + tol) return false;
    return true;
}

ConvexPolygon build_f0(const SupportTable& table) {
    if (table.entries.empty()) throw SolverError("EmptyInterior", "empty support table");
    std::vector<Constraint> pts;
    pts.reserve(2 * table.entries.size());
    for (const SupportEntry& e : table.entries) {
        if (!(e.sigma > 1e-12))
            throw SolverError("EmptyInterior",
                              "nonpositive support value for a lattice class");
        pts.push_back({e.m, e.n, e.sigma, Vec2{e.m / e.sigma, e.n / e.sigma}});
        pts.push_back({-e.m, -e.n, e.sigma, Vec2{-e.m / e.sigma, -e.n / e.sigma}});
    }
    return assemble(dual_hull(std::move(pts)));
}

std::vector<ConvexPolygon> refine_f0(const PotentialSpec& spec, const std::vector<int>& windows,
                                     const std::vector<int>& resolutions) {
    if (windows.size() != resolutions.size() || windows.empty())
        throw ConfigError("BadConfig", "windows and resolutions must be equal-length, nonempty");
    for (std::size_t i = 1; i < windows.size(); ++i)
        if (windows[i] < windows[i - 1] || resolutions[i] < resolutions[i - 1])
            throw ConfigError("BadConfig", "windows and resolutions must be non-decreasing");
    std::vector<ConvexPolygon> seq;
    seq.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i)
        seq.push_back(build_f0(build_support_table(spec, windows[i], resolutions[i])));
    return seq;
}

std::vector<EdgeRecord> detect_flat_edges(const std::vector<ConvexPolygon>& seq, double eps_edge) {
    if (seq.size() < 2) throw ConfigError("BadConfig", "need at least two refinement stages");
    if (!(eps_edge > 0)) throw ConfigError("BadConfig", "eps_edge must be > 0");
    const ConvexPolygon& fin = seq.back();
    const ConvexPolygon& prev = seq[seq.size() - 2];

    std::vector<EdgeRecord> out;
    for (const PolyEdge& e : fin.edges) {
        if (!(e.length() > eps_edge)) continue;
        EdgeRecord rec{e.a, e.b, e.wm, e.wn, e.length(), false};
        for (const PolyEdge& q : prev.edges) {
            if (q.wm != e.wm || q.wn != e.wn) continue;
            if ((q.a - e.a).norm() < eps_edge / 4.0 && (q.b - e.b).norm() < eps_edge / 4.0)
                rec.stable = true;
            break;
        }
        out.push_back(rec);
    }
    return out;
}

double AngularInterval::width() const { return hi - lo; }

bool AngularInterval::contains(double angle, double tol) const {
    double d = angle - lo;
    d -= kTwoPi * std::floor(d / kTwoPi);  // into [0, 2pi)
    if (d > kTwoPi - tol) d -= kTwoPi;
    return d >= -tol && d <= (hi - lo) + tol;
}

AngularInterval normal_cone(const ConvexPolygon& poly, Vec2 p, double tol) {
    SnapResult snap = snap_to_boundary(poly, p);
    if (snap.dist > tol) throw SolverError("NotOnBoundary", "point is not within tol of the boundary");

    // Vertex query when the snapped point sits within tol of a corner.
    std::size_t k = poly.verts.size();
    std::size_t vbest = 0;
    double vdist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        double d = (snap.point - poly.verts[i]).norm();
        if (d < vdist) {
            vdist = d;
            vbest = i;
        }
    }
    AngularInterval cone;
    if (vdist <= tol) {
        const PolyEdge& inc = poly.edges[(vbest + k - 1) % k];
        const PolyEdge& outg = poly.edges[vbest];
        cone.lo = angle_of(edge_normal(inc));
        cone.hi = angle_of(edge_normal(outg));
        if (cone.hi < cone.lo) cone.hi += kTwoPi;
        cone.is_vertex = true;
    } else {
        cone.lo = cone.hi = angle_of(edge_normal(poly.edges[snap.edge]));
        cone.is_vertex = false;
    }
    return cone;
}

HomologyFan homology_fan(Vec2 p, const SupportTable& table, double tol) {
    HomologyFan fan;
    fan.p = p;
    for (const SupportEntry& e : table.entries) {
        if (p.x * e.m + p.y * e.n >= e.sigma - tol) fan.raw_active.push_back({e.m, e.n});
        if (-(p.x * e.m + p.y * e.n) >= e.sigma - tol) fan.raw_active.push_back({-e.m, -e.n});
    }
    fan.cone_consistent = true;
    if (fan.raw_active.empty()) return fan;
    if (fan.raw_active.size() == 1) {
        fan.classes = fan.raw_active;
        return fan;
    }

    // The raw active set is angularly bounded by the two extreme generators;
    // every other member is an integer combination resolved by sigma
    // additivity along the boundary. Reported classes: the extremes and, when
    // itself active, their sum (Lemma-style fan of at most three elements).
    std::vector<double> ang;
    ang.reserve(fan.raw_active.size());
    for (auto& w : fan.raw_active) ang.push_back(angle_of({(double)w[0], (double)w[1]}));
    std::vector<std::size_t> order(ang.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ang[a] < ang[b]; });

    // Largest circular gap -> the active arc is its complement.
    double best_gap = -1.0;
    std::size_t gap_at = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        double a0 = ang[order[i]];
        double a1 = ang[order[(i + 1) % order.size()]] + (i + 1 == order.size() ? kTwoPi : 0.0);
        if (a1 - a0 > best_gap) {
            best_gap = a1 - a0;
            gap_at = i;
        }
    }
    auto v0 = fan.raw_active[order[(gap_at + 1) % order.size()]];
    auto v1 = fan.raw_active[order[gap_at]];
    double span = kTwoPi - best_gap;
    fan.cone_consistent = span < kPi;

    fan.classes.push_back(v0);
    std::array<int, 2> sum{v0[0] + v1[0], v0[1] + v1[1]};
    if (!(sum[0] == 0 && sum[1] == 0)) {
        double ps = p.x * sum[0] + p.y * sum[1];
        int g = std::gcd(std::abs(sum[0]), std::abs(sum[1]));
        int idx = g > 0 ? table.lookup(sum[0] / g, sum[1] / g) : -1;
        if (g == 1 && idx >= 0 && ps >= table.entries[idx].sigma - tol) fan.classes.push_back(sum);
    }
    if (!(v1 == v0)) fan.classes.push_back(v1);
    return fan;
}

UnimodularReport vertex_unimodular_check(const ConvexPolygon& poly, Vec2 p, double tol) {
    std::size_t k = poly.verts.size();
    std::size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        double d = (p - poly.verts[i]).norm();
        if (d < dist) {
            dist = d;
            best = i;
        }
    }
    if (dist > tol) throw SolverError("NotAVertex", "point is not within tol of a polygon vertex");

    const PolyEdge& incoming = poly.edges[(best + k - 1) % k];
    const PolyEdge& outgoing = poly.edges[best];
    UnimodularReport rep;
    rep.v0 = {outgoing.wm, outgoing.wn};
    rep.v1 = {incoming.wm, incoming.wn};
    rep.det = rep.v1[0] * rep.v0[1] - rep.v1[1] * rep.v0[0];
    rep.det_swapped = -rep.det;

    // Cone equation: edge rays p + t (-1)^i v_i-perp (perp = 90 deg CCW) must
    // run along the adjacent edges for t in (0, eps]; angular match 1e-9.
    Vec2 d_out = Vec2{(double)rep.v0[0], (double)rep.v0[1]}.perp().unit();
    Vec2 d_in = (Vec2{(double)rep.v1[0], (double)rep.v1[1]}.perp() * -1.0).unit();
    Vec2 edge_out = (outgoing.b - outgoing.a).unit();
    Vec2 edge_in = (incoming.a - incoming.b).unit();
    bool match_out = (d_out - edge_out).norm() < 1e-9;
    bool match_in = (d_in - edge_in).norm() < 1e-9;
    rep.cone_ok = match_out && match_in && outgoing.length() > 1e-9 && incoming.length() > 1e-9;
    return rep;
}

PointClassification classify_boundary_point(Vec2 p, const ConvexPolygon& poly,
                                            const SupportTable& table, double tol,
                                            double eps_edge) {
    SnapResult snap = snap_to_boundary(poly, p);
    if (snap.dist > tol) throw SolverError("NotOnBoundary", "point is not within tol of the boundary");

    PointClassification out;
    out.p = snap.point;
    out.cone = normal_cone(poly, snap.point, std::max(tol, 1e-9));

    std::size_t k = poly.verts.size();
    std::size_t vbest = 0;
    double vdist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        double d = (snap.point - poly.verts[i]).norm();
        if (d < vdist) {
            vdist = d;
            vbest = i;
        }
    }

    auto edge_len = [&](std::size_t i) { return poly.edges[i].length(); };
    bool at_vertex = out.cone.is_vertex;
    double local_len =
        at_vertex ? std::min(edge_len((vbest + k - 1) % k), edge_len(vbest)) : edge_len(snap.edge);

    out.local_normal = at_vertex
                           ? Vec2{std::cos(0.5 * (out.cone.lo + out.cone.hi)),
                                  std::sin(0.5 * (out.cone.lo + out.cone.hi))}
                           : edge_normal(poly.edges[snap.edge]);
    out.confidence = std::clamp(local_len / eps_edge, 0.0, 1.0);

    if (local_len >= eps_edge) {
        out.kind = at_vertex ? PointKind::Vertex : PointKind::EdgeInterior;
        return out;
    }

    // Short-edge neighborhood: the polygonal model cannot certify; check the
    // normal against rational directions inside the table window.
    out.kind = PointKind::NonlinearCandidate;
    double na = angle_of(out.local_normal);
    for (const SupportEntry& e : table.entries) {
        for (int s : {1, -1}) {
            double wa = angle_of({(double)(s * e.m), (double)(s * e.n)});
            double d = std::fabs(std::remainder(na - wa, kTwoPi));
            if (d < 1e-2) {
                out.kind = PointKind::RationalNonlinearCandidate;
                return out;
            }
        }
    }
    return out;
}

}  // namespace hbargeo
