#include "hbargeo/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hbargeo {

using nlohmann::json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// --- potentials -----------------------------------------------------------------

std::string potential_to_json(const PotentialSpec& spec) {
    json j;
    j["terms"] = json::array();
    for (const FourierTerm& t : spec.terms)
        j["terms"].push_back({{"amp", t.amp}, {"k", {t.k1, t.k2}}, {"phase", t.phase}});
    j["template"] = spec.template_name;
    j["offset"] = spec.offset;
    return j.dump(2) + "\n";
}

PotentialSpec potential_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("BadConfig", std::string("malformed potential JSON: ") + e.what());
    }
    try {
        if (j.contains("terms")) {
            PotentialSpec spec;
            for (const json& t : j.at("terms")) {
                FourierTerm term;
                term.amp = t.at("amp").get<double>();
                term.k1 = t.at("k").at(0).get<int>();
                term.k2 = t.at("k").at(1).get<int>();
                term.phase = t.value("phase", 0.0);
                spec.terms.push_back(term);
            }
            spec.offset = j.value("offset", 0.0);
            spec.template_name = j.value("template", std::string{});
            return spec;
        }
        if (j.contains("template")) return make_template(j.at("template").get<std::string>());
    } catch (const json::exception& e) {
        throw ConfigError("BadConfig", std::string("bad potential fields: ") + e.what());
    }
    throw ConfigError("BadConfig", "potential JSON needs \"terms\" or \"template\"");
}

PotentialSpec potential_from_json_file(const std::string& path) {
    return potential_from_json(read_text_file(path));
}

// --- support tables ----------------------------------------------------------------

std::string support_table_to_json(const SupportTable& table, std::uint64_t config_hash) {
    json j;
    j["resolution"] = table.resolution;
    j["window"] = table.window;
    j["eps_grid"] = table.eps_grid;
    j["entries"] = json::array();
    for (const SupportEntry& e : table.entries)
        j["entries"].push_back({{"w", {e.m, e.n}}, {"sigma", e.sigma}});
    j["config_hash"] = hash_hex(config_hash);
    return j.dump(2) + "\n";
}

SupportTable support_table_from_json(const std::string& text) {
    try {
        json j = json::parse(text);
        SupportTable table;
        table.resolution = j.at("resolution").get<int>();
        table.window = j.at("window").get<int>();
        table.eps_grid = j.value("eps_grid", 0.0);
        for (const json& e : j.at("entries"))
            table.entries.push_back(
                {e.at("w").at(0).get<int>(), e.at("w").at(1).get<int>(), e.at("sigma").get<double>()});
        return table;
    } catch (const json::exception& e) {
        throw ConfigError("BadConfig", std::string("malformed support table JSON: ") + e.what());
    }
}

// --- grids / orbits / polygons --------------------------------------------------------

void write_hbar_csv(const std::string& path, const HbarGrid& grid) {
    std::ostringstream out;
    out << "p1,p2,hbar,residual\n";
    for (int i1 = 0; i1 < grid.nodes; ++i1)
        for (int i2 = 0; i2 < grid.nodes; ++i2) {
            int idx = grid.index(i1, i2);
            out << fmt17(grid.p_at(i1)) << ',' << fmt17(grid.p_at(i2)) << ','
                << fmt17(grid.hbar[idx]) << ',' << fmt17(grid.residual[idx]) << '\n';
        }
    write_text_file(path, out.str());
}

void write_hbar_sidecar(const std::string& path, const HbarGrid& grid, std::uint64_t config_hash,
                        std::uint64_t seed) {
    json j;
    j["p_min"] = grid.p_min;
    j["p_max"] = grid.p_max;
    j["p_step"] = grid.p_step;
    j["nodes"] = grid.nodes;
    j["grid_n"] = grid.grid_n;
    j["tol"] = grid.tol;
    long failed = 0;
    for (unsigned char f : grid.ok)
        if (!f) ++failed;
    j["failed_nodes"] = failed;
    j["config_hash"] = hash_hex(config_hash);
    j["seed"] = seed;
    write_text_file(path, j.dump(2) + "\n");
}

void write_orbit_csv(const std::string& path, const Orbit& orbit, const PotentialSpec& spec) {
    std::ostringstream out;
    out << "t,x1,x2,v1,v2,energy\n";
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        out << fmt17(orbit.times[i]) << ',' << fmt17(orbit.positions[i].x) << ','
            << fmt17(orbit.positions[i].y) << ',' << fmt17(orbit.velocities[i].x) << ','
            << fmt17(orbit.velocities[i].y) << ',' << fmt17(orbit.energy_at(i, spec)) << '\n';
    }
    write_text_file(path, out.str());
}

std::string homoclinic_to_json(const HomoclinicRecord& rec, std::uint64_t config_hash) {
    json j;
    j["homology"] = {rec.m, rec.n};
    j["action"] = rec.action;
    j["arc_action"] = rec.arc_action;
    j["terminal_gap"] = rec.terminal_gap;
    j["launch_angle"] = rec.launch_angle;
    j["dir_backward"] = {rec.dir_backward.x, rec.dir_backward.y};
    j["dir_forward"] = {rec.dir_forward.x, rec.dir_forward.y};
    j["samples"] = rec.orbit.size();
    j["config_hash"] = hash_hex(config_hash);
    return j.dump(2) + "\n";
}

std::string polygon_to_json(const ConvexPolygon& poly,
                            const std::vector<UnimodularReport>& vertex_checks,
                            std::uint64_t config_hash) {
    json j;
    j["vertices"] = json::array();
    for (const Vec2& v : poly.verts) j["vertices"].push_back({v.x, v.y});
    j["edges"] = json::array();
    for (const PolyEdge& e : poly.edges)
        j["edges"].push_back({{"w", {e.wm, e.wn}},
                              {"sigma", e.sigma},
                              {"length", e.length()},
                              {"stable", e.stable}});
    j["area"] = poly.area();
    j["vertex_checks"] = json::array();
    for (const UnimodularReport& r : vertex_checks)
        j["vertex_checks"].push_back({{"v0", {r.v0[0], r.v0[1]}},
                                      {"v1", {r.v1[0], r.v1[1]}},
                                      {"det", r.det},
                                      {"det_swapped", r.det_swapped},
                                      {"cone_ok", r.cone_ok}});
    j["config_hash"] = hash_hex(config_hash);
    return j.dump(2) + "\n";
}

// --- SVG ---------------------------------------------------------------------------------

namespace {

constexpr double kSvgSize = 640.0;
constexpr double kSvgPad = 40.0;

struct SvgMap {
    double x0, y0, x1, y1, scale;
    double X(double x) const { return kSvgPad + (x - x0) * scale; }
    double Y(double y) const { return kSvgPad + (y1 - y) * scale; }  // SVG y is down
};

SvgMap fit_box(double x0, double y0, double x1, double y1) {
    double span = std::max(x1 - x0, y1 - y0);
    if (span <= 0) span = 1.0;
    return {x0, y0, x1, y1, (kSvgSize - 2 * kSvgPad) / span};
}

std::string svg_header(std::uint64_t config_hash) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<!-- config_hash: " << hash_hex(config_hash) << " -->\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kSvgSize
        << "\" height=\"" << kSvgSize << "\" viewBox=\"0 0 " << kSvgSize << ' ' << kSvgSize
        << "\">\n";
    return out.str();
}

std::string poly_path(const ConvexPolygon& poly, const SvgMap& mp) {
    std::ostringstream out;
    for (std::size_t i = 0; i < poly.verts.size(); ++i)
        out << (i ? " L " : "M ") << mp.X(poly.verts[i].x) << ' ' << mp.Y(poly.verts[i].y);
    out << " Z";
    return out.str();
}

}  // namespace

void write_f0_svg(const std::string& path, const std::vector<ConvexPolygon>& seq,
                  const std::vector<UnimodularReport>& vertex_checks, std::uint64_t config_hash) {
    if (seq.empty()) throw ConfigError("BadConfig", "no polygons to draw");
    const ConvexPolygon& fin = seq.back();
    double ext = 0.0;
    for (const Vec2& v : fin.verts) ext = std::max({ext, std::fabs(v.x), std::fabs(v.y)});
    ext *= 1.25;
    SvgMap mp = fit_box(-ext, -ext, ext, ext);

    std::ostringstream out;
    out << svg_header(config_hash);
    out << "  <rect x=\"0\" y=\"0\" width=\"" << kSvgSize << "\" height=\"" << kSvgSize
        << "\" fill=\"white\"/>\n";
    // axes
    out << "  <line x1=\"" << mp.X(-ext) << "\" y1=\"" << mp.Y(0) << "\" x2=\"" << mp.X(ext)
        << "\" y2=\"" << mp.Y(0) << "\" stroke=\"#ccc\"/>\n";
    out << "  <line x1=\"" << mp.X(0) << "\" y1=\"" << mp.Y(-ext) << "\" x2=\"" << mp.X(0)
        << "\" y2=\"" << mp.Y(ext) << "\" stroke=\"#ccc\"/>\n";
    // earlier refinement stages, light
    for (std::size_t s = 0; s + 1 < seq.size(); ++s)
        out << "  <path d=\"" << poly_path(seq[s], mp)
            << "\" fill=\"none\" stroke=\"#bbd\" stroke-width=\"1\"/>\n";
    // final polygon edge by edge, stability-colored, normals labeled
    for (const PolyEdge& e : fin.edges) {
        out << "  <line x1=\"" << mp.X(e.a.x) << "\" y1=\"" << mp.Y(e.a.y) << "\" x2=\""
            << mp.X(e.b.x) << "\" y2=\"" << mp.Y(e.b.y) << "\" stroke=\""
            << (e.stable ? "#2a7d46" : "#888") << "\" stroke-width=\"2\"/>\n";
        Vec2 mid = (e.a + e.b) * 0.5;
        Vec2 nrm = Vec2{static_cast<double>(e.wm), static_cast<double>(e.wn)}.unit();
        Vec2 lab = mid + nrm * (0.08 * ext);
        out << "  <text x=\"" << mp.X(lab.x) << "\" y=\"" << mp.Y(lab.y)
            << "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">(" << e.wm << ','
            << e.wn << ")</text>\n";
    }
    // vertex annotations
    for (std::size_t i = 0; i < vertex_checks.size() && i < fin.verts.size(); ++i) {
        const UnimodularReport& r = vertex_checks[i];
        out << "  <circle cx=\"" << mp.X(fin.verts[i].x) << "\" cy=\"" << mp.Y(fin.verts[i].y)
            << "\" r=\"3\" fill=\"" << (std::abs(r.det) == 1 && r.cone_ok ? "#2a7d46" : "#c33")
            << "\"/>\n";
        out << "  <text x=\"" << mp.X(fin.verts[i].x) + 6 << "\" y=\"" << mp.Y(fin.verts[i].y) - 6
            << "\" font-size=\"10\" fill=\"#555\">det=" << r.det << "</text>\n";
    }
    out << "</svg>\n";
    write_text_file(path, out.str());
}

void write_hbar_svg(const std::string& path, const HbarGrid& grid,
                    const std::vector<double>& levels, std::uint64_t config_hash) {
    SvgMap mp = fit_box(grid.p_min, grid.p_min, grid.p_max, grid.p_max);
    std::ostringstream out;
    out << svg_header(config_hash);
    out << "  <rect x=\"0\" y=\"0\" width=\"" << kSvgSize << "\" height=\"" << kSvgSize
        << "\" fill=\"white\"/>\n";

    const char* palette[] = {"#1b6ca8", "#3c9d6e", "#c98a1b", "#b2503c", "#7a4fa3", "#555555"};
    auto val = [&](int i1, int i2) { return grid.hbar[grid.index(i1, i2)]; };
    auto good = [&](int i1, int i2) { return grid.ok[grid.index(i1, i2)] != 0; };

    for (std::size_t li = 0; li < levels.size(); ++li) {
        double L = levels[li];
        out << "  <g stroke=\"" << palette[li % 6] << "\" stroke-width=\"1.5\" fill=\"none\">\n";
        // Marching squares over p-grid cells: interpolated crossings on cell
        // edges, paired into segments (midpoint rule on saddle cells).
        for (int i1 = 0; i1 + 1 < grid.nodes; ++i1) {
            for (int i2 = 0; i2 + 1 < grid.nodes; ++i2) {
                if (!good(i1, i2) || !good(i1 + 1, i2) || !good(i1, i2 + 1) || !good(i1 + 1, i2 + 1))
                    continue;
                double p1a = grid.p_at(i1), p1b = grid.p_at(i1 + 1);
                double p2a = grid.p_at(i2), p2b = grid.p_at(i2 + 1);
                double c[4] = {val(i1, i2), val(i1 + 1, i2), val(i1 + 1, i2 + 1), val(i1, i2 + 1)};
                Vec2 corner[4] = {{p1a, p2a}, {p1b, p2a}, {p1b, p2b}, {p1a, p2b}};
                std::vector<Vec2> hits;
                for (int e = 0; e < 4; ++e) {
                    double va = c[e], vb = c[(e + 1) % 4];
                    if ((va < L) == (vb < L)) continue;
                    double t = (L - va) / (vb - va);
                    Vec2 a = corner[e], b = corner[(e + 1) % 4];
                    hits.push_back(a + (b - a) * t);
                }
                for (std::size_t s = 0; s + 1 < hits.size(); s += 2)
                    out << "    <line x1=\"" << mp.X(hits[s].x) << "\" y1=\"" << mp.Y(hits[s].y)
                        << "\" x2=\"" << mp.X(hits[s + 1].x) << "\" y2=\"" << mp.Y(hits[s + 1].y)
                        << "\"/>\n";
            }
        }
        out << "  </g>\n";
        out << "  <text x=\"" << kSvgSize - kSvgPad << "\" y=\"" << kSvgPad + 14 * (li + 1)
            << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << palette[li % 6]
            << "\">H=" << fmt17(L) << "</text>\n";
    }
    out << "</svg>\n";
    write_text_file(path, out.str());
}

// --- misc --------------------------------------------------------------------------------

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("BadConfig", "cannot open for writing: " + path);
    f << content;
    if (!f) throw ConfigError("BadConfig", "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("BadConfig", "cannot read file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_manifest(const std::string& dir, std::uint64_t config_hash, std::uint64_t seed,
                    const std::vector<std::string>& files) {
    json j;
    j["config_hash"] = hash_hex(config_hash);
    j["seed"] = seed;
    std::vector<std::string> sorted = files;
    std::sort(sorted.begin(), sorted.end());
    j["files"] = sorted;
    write_text_file((std::filesystem::path(dir) / "manifest.json").string(), j.dump(2) + "\n");
}

}  // namespace hbargeo
