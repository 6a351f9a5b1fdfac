// Python bindings for the main operations: potentials, cell-problem solves,
// support tables / flat-set polygons, homoclinic shooting, and the
// stable-manifold demo. 2-vectors cross the boundary as (x, y) tuples.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hbargeo/cell_pde.hpp"
#include "hbargeo/geometry.hpp"
#include "hbargeo/io.hpp"
#include "hbargeo/metric.hpp"
#include "hbargeo/onedim.hpp"
#include "hbargeo/orbits.hpp"
#include "hbargeo/potential.hpp"

namespace py = pybind11;
using namespace hbargeo;

namespace {

Vec2 to_vec(std::pair<double, double> p) { return {p.first, p.second}; }
std::pair<double, double> from_vec(Vec2 v) { return {v.x, v.y}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "effective Hamiltonians, Maupertuis support values, flat-set polygons, "
              "homoclinic orbits";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<SolverError>(m, "SolverError");

    py::class_<PotentialSpec>(m, "PotentialSpec")
        .def_readonly("template_name", &PotentialSpec::template_name)
        .def_readonly("offset", &PotentialSpec::offset)
        .def("__repr__", [](const PotentialSpec& s) {
            return "<PotentialSpec terms=" + std::to_string(s.terms.size()) + " template='" +
                   s.template_name + "'>";
        });
    m.def("make_template", &make_template, py::arg("name"),
          "named potential: separable, perturbed-separable, annulus-barrier");
    m.def("make_separable", &make_separable, py::arg("amp1"), py::arg("amp2"));
    m.def("potential_from_json", &potential_from_json, py::arg("text"));
    m.def("potential_to_json", &potential_to_json, py::arg("spec"));
    m.def(
        "eval_potential",
        [](const PotentialSpec& s, std::pair<double, double> x) {
            return eval_potential(s, to_vec(x));
        },
        py::arg("spec"), py::arg("x"));

    py::class_<CorrectorField>(m, "CorrectorField")
        .def_readonly("grid_n", &CorrectorField::grid_n)
        .def_readonly("hbar", &CorrectorField::hbar)
        .def_readonly("residual", &CorrectorField::residual)
        .def("value_at", [](const CorrectorField& c, std::pair<double, double> x) {
            return c.value_at(to_vec(x));
        });
    m.def(
        "solve_cell",
        [](const PotentialSpec& s, std::pair<double, double> p, int grid_n, double tol) {
            return solve_cell(s, to_vec(p), grid_n, tol);
        },
        py::arg("spec"), py::arg("p"), py::arg("grid_n") = 64, py::arg("tol") = 1e-5,
        "effective Hamiltonian at momentum p via the large-time cell problem");

    m.def(
        "hbar_separable_oracle",
        [](double amp1, double amp2, std::pair<double, double> p) {
            return hbar_separable(cosine_well(amp1), cosine_well(amp2), to_vec(p));
        },
        py::arg("amp1"), py::arg("amp2"), py::arg("p"),
        "exact 1D-quadrature oracle for amp*(cos 2 pi x - 1) wells");

    py::class_<SupportEntry>(m, "SupportEntry")
        .def_readonly("m", &SupportEntry::m)
        .def_readonly("n", &SupportEntry::n)
        .def_readonly("sigma", &SupportEntry::sigma);
    py::class_<SupportTable>(m, "SupportTable")
        .def_readonly("resolution", &SupportTable::resolution)
        .def_readonly("window", &SupportTable::window)
        .def_readonly("eps_grid", &SupportTable::eps_grid)
        .def_readonly("entries", &SupportTable::entries)
        .def("lookup", &SupportTable::lookup, py::arg("m"), py::arg("n"));
    m.def("build_support_table", &build_support_table, py::arg("spec"), py::arg("window") = 2,
          py::arg("resolution") = 128);
    m.def("support_value", &support_value, py::arg("spec"), py::arg("m"), py::arg("n"),
          py::arg("resolution") = 128, py::arg("window") = 2);

    py::class_<PolyEdge>(m, "PolyEdge")
        .def_property_readonly("a", [](const PolyEdge& e) { return from_vec(e.a); })
        .def_property_readonly("b", [](const PolyEdge& e) { return from_vec(e.b); })
        .def_readonly("wm", &PolyEdge::wm)
        .def_readonly("wn", &PolyEdge::wn)
        .def_readonly("sigma", &PolyEdge::sigma)
        .def_readonly("stable", &PolyEdge::stable)
        .def("length", &PolyEdge::length);
    py::class_<ConvexPolygon>(m, "ConvexPolygon")
        .def_property_readonly("verts",
                               [](const ConvexPolygon& p) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Vec2& v : p.verts) out.push_back(from_vec(v));
                                   return out;
                               })
        .def_readonly("edges", &ConvexPolygon::edges)
        .def("area", &ConvexPolygon::area)
        .def("max_support", &ConvexPolygon::max_support, py::arg("m"), py::arg("n"))
        .def("contains", [](const ConvexPolygon& poly, std::pair<double, double> p) {
            return poly.contains(to_vec(p));
        });
    m.def("build_f0", &build_f0, py::arg("table"));

    m.def(
        "homology_fan",
        [](std::pair<double, double> p, const SupportTable& table, double tol) {
            HomologyFan fan = homology_fan(to_vec(p), table, tol);
            py::dict d;
            d["classes"] = fan.classes;
            d["raw_active"] = fan.raw_active;
            d["cone_consistent"] = fan.cone_consistent;
            return d;
        },
        py::arg("p"), py::arg("table"), py::arg("tol"));
    m.def(
        "vertex_unimodular_check",
        [](const ConvexPolygon& poly, std::pair<double, double> p, double tol) {
            UnimodularReport r = vertex_unimodular_check(poly, to_vec(p), tol);
            py::dict d;
            d["v0"] = r.v0;
            d["v1"] = r.v1;
            d["det"] = r.det;
            d["det_swapped"] = r.det_swapped;
            d["cone_ok"] = r.cone_ok;
            return d;
        },
        py::arg("poly"), py::arg("p"), py::arg("tol") = 1e-6);

    py::class_<Orbit>(m, "Orbit")
        .def_readonly("times", &Orbit::times)
        .def_property_readonly("positions",
                               [](const Orbit& o) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Vec2& v : o.positions) out.push_back(from_vec(v));
                                   return out;
                               })
        .def_property_readonly("velocities",
                               [](const Orbit& o) {
                                   std::vector<std::pair<double, double>> out;
                                   for (const Vec2& v : o.velocities) out.push_back(from_vec(v));
                                   return out;
                               })
        .def("__len__", &Orbit::size);
    py::class_<HomoclinicRecord>(m, "HomoclinicRecord")
        .def_readonly("m", &HomoclinicRecord::m)
        .def_readonly("n", &HomoclinicRecord::n)
        .def_readonly("action", &HomoclinicRecord::action)
        .def_readonly("arc_action", &HomoclinicRecord::arc_action)
        .def_readonly("terminal_gap", &HomoclinicRecord::terminal_gap)
        .def_readonly("launch_angle", &HomoclinicRecord::launch_angle)
        .def_readonly("orbit", &HomoclinicRecord::orbit)
        .def_property_readonly(
            "dir_backward", [](const HomoclinicRecord& r) { return from_vec(r.dir_backward); })
        .def_property_readonly(
            "dir_forward", [](const HomoclinicRecord& r) { return from_vec(r.dir_forward); });
    m.def("shoot_homoclinic", &shoot_homoclinic, py::arg("spec"), py::arg("m"), py::arg("n"),
          py::arg("r0") = 1e-3, py::arg("tol") = 1e-8, py::arg("dt") = 1e-3);

    m.def(
        "lp_demo",
        [](double a, double b, double alpha, double theta) {
            LPResult r = lyapunov_perron_orbit(lp_demo_problem(a, b, alpha, theta));
            py::dict d;
            d["iterations"] = r.iterations;
            d["final_gap"] = r.final_gap;
            d["contraction_factor"] = r.contraction_factor;
            d["iterate_bound_factor"] = r.iterate_bound_factor;
            d["theta_window"] = r.theta_window;
            d["theta_window_exceeded"] = r.theta_window_exceeded;
            d["times"] = r.times;
            std::vector<std::pair<double, double>> vals;
            for (const Vec2& v : r.values) vals.push_back(from_vec(v));
            d["values"] = vals;
            return d;
        },
        py::arg("a") = 1.0, py::arg("b") = 2.0, py::arg("alpha") = 3.0, py::arg("theta") = 0.1);

    m.def("near_origin_action", &near_origin_action, py::arg("a"), py::arg("b"), py::arg("s1"),
          py::arg("s2"), py::arg("beta1"), py::arg("beta2"));
    m.def("lambda_statement", &lambda_statement, py::arg("a"), py::arg("b"));
    m.def("lambda_proof", &lambda_proof, py::arg("a"), py::arg("b"));
}
