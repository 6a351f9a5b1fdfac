#include <algorithm>
#include <array>
#include <cmath>

#include <doctest.h>

#include "hbargeo/geometry.hpp"
#include "hbargeo/potential.hpp"

using namespace hbargeo;

namespace {

SupportTable hand_table(std::vector<std::array<double, 3>> rows) {
    SupportTable t;
    t.resolution = 0;
    t.window = 2;
    t.eps_grid = 0.0;
    for (auto& r : rows) {
        SupportEntry e;
        e.m = static_cast<int>(r[0]);
        e.n = static_cast<int>(r[1]);
        e.sigma = r[2];
        t.entries.push_back(e);
    }
    return t;
}

bool has_vertex(const ConvexPolygon& poly, Vec2 v, double tol = 1e-12) {
    for (const Vec2& u : poly.verts)
        if ((u - v).norm() <= tol) return true;
    return false;
}

bool classes_equal(const std::vector<std::array<int, 2>>& got,
                   std::vector<std::array<int, 2>> want) {
    auto sorted = got;
    std::sort(sorted.begin(), sorted.end());
    std::sort(want.begin(), want.end());
    return sorted == want;
}

}  // namespace

TEST_CASE("square from two support values; tangent diagonal constraint is dropped") {
    // sigma(1,1) = 2 touches the corner (1,1) exactly: the dual point lies on
    // the hull edge and must not bevel the corner.
    SupportTable t = hand_table({{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 2.0}});
    ConvexPolygon poly = build_f0(t);
    REQUIRE(poly.edges.size() == 4);
    CHECK(poly.area() == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(has_vertex(poly, {1, 1}));
    CHECK(has_vertex(poly, {-1, -1}));
    CHECK(poly.max_support(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(poly.max_support(1, 1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(poly.contains({0, 0}));
    CHECK(poly.contains({0.999, 0.999}));
    CHECK_FALSE(poly.contains({1.05, 0.0}));

    SUBCASE("vertex order is CCW and edge i runs verts[i] -> verts[i+1]") {
        double signed_area = 0.0;
        std::size_t k = poly.verts.size();
        for (std::size_t i = 0; i < k; ++i) signed_area += poly.verts[i].cross(poly.verts[(i + 1) % k]);
        CHECK(signed_area > 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK((poly.edges[i].a - poly.verts[i]).norm() < 1e-12);
            CHECK((poly.edges[i].b - poly.verts[(i + 1) % k]).norm() < 1e-12);
        }
    }

    SUBCASE("polygon is symmetric under negation") {
        for (const Vec2& v : poly.verts) CHECK(has_vertex(poly, -v));
    }
}

TEST_CASE("active diagonal constraints cut the corners (octagon) and scale linearly") {
    SupportTable t = hand_table({{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.8}, {1, -1, 1.8}});
    ConvexPolygon poly = build_f0(t);
    REQUIRE(poly.edges.size() == 8);
    CHECK(poly.area() == doctest::Approx(3.92).epsilon(1e-12));
    CHECK(has_vertex(poly, {1.0, 0.8}));
    CHECK(poly.max_support(1, 1) == doctest::Approx(1.8).epsilon(1e-12));

    SupportTable t2 = t;
    for (auto& e : t2.entries) e.sigma *= 2.0;
    ConvexPolygon poly2 = build_f0(t2);
    REQUIRE(poly2.edges.size() == 8);
    CHECK(poly2.area() == doctest::Approx(4.0 * poly.area()).epsilon(1e-12));
    CHECK(has_vertex(poly2, {2.0, 1.6}));
}

TEST_CASE("degenerate tables raise EmptyInterior") {
    SupportTable empty = hand_table({});
    CHECK_THROWS_AS(build_f0(empty), SolverError);
    SupportTable slab = hand_table({{1, 0, 1.0}});
    CHECK_THROWS_AS(build_f0(slab), SolverError);
}

TEST_CASE("homology fan: edge midpoint, square corner, beveled corner, interior") {
    SupportTable sq = hand_table({{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 2.0}});
    SUBCASE("edge interior point activates its single class") {
        HomologyFan fan = homology_fan({1.0, 0.0}, sq, 1e-9);
        CHECK(classes_equal(fan.classes, {{1, 0}}));
        CHECK(fan.cone_consistent);
    }
    SUBCASE("square corner: three classes v0, v0+v1, v1") {
        HomologyFan fan = homology_fan({1.0, 1.0}, sq, 1e-9);
        CHECK(classes_equal(fan.classes, {{1, 0}, {1, 1}, {0, 1}}));
        CHECK(fan.cone_consistent);
        CHECK(fan.raw_active.size() == 3);
    }
    SUBCASE("beveled corner: v0+v1 absent from the table is not invented") {
        SupportTable oct = hand_table({{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.8}, {1, -1, 1.8}});
        HomologyFan fan = homology_fan({1.0, 0.8}, oct, 1e-9);
        CHECK(classes_equal(fan.classes, {{1, 0}, {1, 1}}));
        CHECK(fan.cone_consistent);
    }
    SUBCASE("interior point activates nothing") {
        HomologyFan fan = homology_fan({0.2, -0.1}, sq, 1e-9);
        CHECK(fan.classes.empty());
        CHECK(fan.raw_active.empty());
        CHECK(fan.cone_consistent);
    }
}

TEST_CASE("vertex unimodularity at lattice corners") {
    SupportTable sq = hand_table({{1, 0, 1.0}, {0, 1, 1.0}});
    ConvexPolygon poly = build_f0(sq);
    UnimodularReport rep = vertex_unimodular_check(poly, {1.0, 1.0});
    CHECK(std::abs(rep.det) == 1);
    CHECK(rep.det == -rep.det_swapped);
    CHECK(rep.cone_ok);
    // incoming normal (1,0), outgoing normal (0,1) at the CCW corner (1,1)
    CHECK(rep.v1 == std::array<int, 2>{1, 0});
    CHECK(rep.v0 == std::array<int, 2>{0, 1});

    CHECK_THROWS_AS(vertex_unimodular_check(poly, {1.0, 0.0}), SolverError);  // edge midpoint

    SupportTable oct = hand_table({{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.8}, {1, -1, 1.8}});
    ConvexPolygon hex = build_f0(oct);
    UnimodularReport rep2 = vertex_unimodular_check(hex, {1.0, 0.8});
    CHECK(std::abs(rep2.det) == 1);  // (1,0) and (1,1) are a unimodular pair
    CHECK(rep2.cone_ok);
}

TEST_CASE("normal cone: width 0 on edges, pi/2 at square corners") {
    SupportTable sq = hand_table({{1, 0, 1.0}, {0, 1, 1.0}});
    ConvexPolygon poly = build_f0(sq);

    AngularInterval edge = normal_cone(poly, {1.0, 0.3}, 1e-9);
    CHECK_FALSE(edge.is_vertex);
    CHECK(edge.width() == doctest::Approx(0.0));
    CHECK(edge.contains(0.0, 1e-9));

    AngularInterval corner = normal_cone(poly, {1.0, 1.0}, 1e-9);
    CHECK(corner.is_vertex);
    CHECK(corner.width() == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(corner.contains(kPi / 4, 1e-9));
    CHECK_FALSE(corner.contains(kPi, 1e-3));

    CHECK_THROWS_AS(normal_cone(poly, {0.0, 0.0}, 1e-6), SolverError);
    CHECK_THROWS_AS(normal_cone(poly, {2.0, 2.0}, 1e-6), SolverError);
}

TEST_CASE("flat-edge detection marks refinement-stable edges") {
    SupportTable coarse = hand_table({{1, 0, 1.001}, {0, 1, 0.999}});
    SupportTable fine = hand_table({{1, 0, 1.0}, {0, 1, 1.0}});
    std::vector<ConvexPolygon> seq{build_f0(coarse), build_f0(fine)};
    auto records = detect_flat_edges(seq, 0.1);
    REQUIRE(records.size() == 4);
    for (const auto& r : records) {
        CHECK(r.stable);
        CHECK(r.length == doctest::Approx(2.0).epsilon(1e-2));
    }
    CHECK_THROWS_AS(detect_flat_edges({seq[0]}, 0.1), ConfigError);
    CHECK_THROWS_AS(detect_flat_edges(seq, 0.0), ConfigError);
}

TEST_CASE("boundary point classification") {
    SupportTable oct = hand_table({{1, 0, 1.0}, {0, 1, 1.0}, {1, 1, 1.8}, {1, -1, 1.8}});
    ConvexPolygon poly = build_f0(oct);

    SUBCASE("long-edge interior point") {
        PointClassification c = classify_boundary_point({1.0, 0.0}, poly, oct, 1e-9, 0.5);
        CHECK(c.kind == PointKind::EdgeInterior);
        CHECK(c.confidence == doctest::Approx(1.0));
        CHECK((c.local_normal - Vec2{1, 0}).norm() < 1e-12);
    }
    SUBCASE("short bevel edge has a rational normal from the table") {
        PointClassification c = classify_boundary_point({0.9, 0.9}, poly, oct, 1e-9, 0.5);
        CHECK(c.kind == PointKind::RationalNonlinearCandidate);
        CHECK(c.confidence < 1.0);
    }
    SUBCASE("vertex flanked by a short edge is a nonlinear candidate") {
        PointClassification c = classify_boundary_point({1.0, 0.8}, poly, oct, 1e-9, 0.5);
        CHECK(c.kind == PointKind::NonlinearCandidate);
        CHECK(c.cone.is_vertex);
    }
    SUBCASE("vertex with long flanks classifies as Vertex") {
        SupportTable sq = hand_table({{1, 0, 1.0}, {0, 1, 1.0}});
        ConvexPolygon square = build_f0(sq);
        PointClassification c = classify_boundary_point({1.0, 1.0}, square, sq, 1e-9, 0.5);
        CHECK(c.kind == PointKind::Vertex);
        CHECK(c.cone.width() == doctest::Approx(kPi / 2).epsilon(1e-9));
    }
    SUBCASE("off-boundary point throws") {
        CHECK_THROWS_AS(classify_boundary_point({0.0, 0.0}, poly, oct, 1e-9, 0.5), SolverError);
    }
}

TEST_CASE("refine_f0 validates its schedule and shrinks toward the true square") {
    PotentialSpec sep = make_template("separable");
    CHECK_THROWS_AS(refine_f0(sep, {1, 2}, {24}), ConfigError);
    CHECK_THROWS_AS(refine_f0(sep, {2, 1}, {24, 24}), ConfigError);
    CHECK_THROWS_AS(refine_f0(sep, {}, {}), ConfigError);

    std::vector<ConvexPolygon> seq = refine_f0(sep, {1, 1}, {24, 32});
    REQUIRE(seq.size() == 2);
    // separable well: F0 is the square of half-width 4/pi
    const double L = 4.0 / kPi;
    for (const ConvexPolygon& poly : seq) {
        CHECK(poly.edges.size() == 4);
        CHECK(poly.area() == doctest::Approx(4.0 * L * L).epsilon(0.08));
    }
    auto records = detect_flat_edges(seq, 5e-2);
    CHECK(records.size() == 4);
    for (const auto& r : records) CHECK(r.stable);
}
