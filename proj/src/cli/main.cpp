// hbargeo CLI: effective Hamiltonians (hbar), flat-set polygons (f0),
// homoclinic shooting (homoclinic), the stable-manifold demo (lp-demo), and
// the acceptance suites (verify).
//
// Exit codes: 0 success; 1 configuration errors; 2 solver failures (partial
// outputs plus manifest are retained); verify exits with the number of failed
// checks, capped at 125.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hbargeo/cell_pde.hpp"
#include "hbargeo/geometry.hpp"
#include "hbargeo/io.hpp"
#include "hbargeo/metric.hpp"
#include "hbargeo/orbits.hpp"
#include "hbargeo/potential.hpp"
#include "hbargeo/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hbargeo;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& com) {
    cmd->add_option("--config", com.config_path, "JSON config file");
    cmd->add_option("--out", com.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", com.seed, "seed recorded in outputs and used for sampling")
        ->capture_default_str();
}

json load_config(const Common& com) {
    if (com.config_path.empty()) return json::object();
    std::string text = read_text_file(com.config_path);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("BadConfig", std::string("malformed config JSON: ") + e.what());
    }
}

PotentialSpec potential_from_config(const json& cfg) {
    if (!cfg.contains("potential")) return make_template("separable");
    const json& p = cfg.at("potential");
    if (p.is_string()) return potential_from_json_file(p.get<std::string>());
    return potential_from_json(p.dump());
}

// Section accessor with type guard; absent section -> empty object.
json section(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) return json::object();
    if (!cfg.at(key).is_object())
        throw ConfigError("BadConfig", "config section '" + key + "' must be an object");
    return cfg.at(key);
}

template <typename T>
T field(const json& sec, const std::string& key, T fallback) {
    try {
        return sec.value(key, fallback);
    } catch (const json::exception& e) {
        throw ConfigError("BadConfig", "config field '" + key + "': " + e.what());
    }
}

// Tracks emitted files so the manifest is written even on solver failure.
struct Emitter {
    std::string dir;
    std::uint64_t hash;
    std::uint64_t seed;
    std::vector<std::string> files;

    Emitter(std::string d, std::uint64_t h, std::uint64_t s) : dir(std::move(d)), hash(h), seed(s) {
        fs::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (fs::path(dir) / name).string(); }
    void add(const std::string& name) { files.push_back(name); }
    void text(const std::string& name, const std::string& content) {
        write_text_file(path(name), content);
        add(name);
    }
    void finish() const { write_manifest(dir, hash, seed, files); }
};

// Canonical hash input: resolved config (defaults applied) in sorted-key JSON.
std::uint64_t config_hash_of(const std::string& command, const PotentialSpec& spec,
                             const json& params) {
    json resolved;
    resolved["command"] = command;
    resolved["potential"] = json::parse(potential_to_json(spec));
    resolved["params"] = params;
    return fnv1a64(resolved.dump());
}

// --- subcommands ------------------------------------------------------------------

int cmd_hbar(const Common& com) {
    json cfg = load_config(com);
    PotentialSpec spec = potential_from_config(cfg);
    json sec = section(cfg, "hbar");
    json params;
    double p_box = params["p_box"] = field(sec, "p_box", 2.0);
    double p_step = params["p_step"] = field(sec, "p_step", 0.25);
    int grid_n = params["grid_n"] = field(sec, "grid_n", 128);
    double tol = params["tol"] = field(sec, "tol", 1e-5);
    std::vector<double> levels =
        field(sec, "levels", std::vector<double>{5e-3, 0.05, 0.2, 0.5, 1.0});
    params["levels"] = levels;

    Emitter em(com.out_dir, config_hash_of("hbar", spec, params), com.seed);
    try {
        HbarGrid grid = sweep_hbar_grid(spec, p_box, p_step, grid_n, tol);
        write_hbar_csv(em.path("hbar.csv"), grid);
        em.add("hbar.csv");
        write_hbar_sidecar(em.path("hbar.json"), grid, em.hash, em.seed);
        em.add("hbar.json");
        write_hbar_svg(em.path("hbar.svg"), grid, levels, em.hash);
        em.add("hbar.svg");
        em.finish();

        long failed = 0;
        for (unsigned char f : grid.ok)
            if (!f) ++failed;
        std::cout << "hbar: " << grid.nodes * grid.nodes << " nodes, " << failed
                  << " failed -> " << em.dir << "\n";
        return failed > 0 ? 2 : 0;
    } catch (const SolverError&) {
        em.finish();
        throw;
    }
}

int cmd_f0(const Common& com) {
    json cfg = load_config(com);
    PotentialSpec spec = potential_from_config(cfg);
    json sec = section(cfg, "f0");
    json params;
    std::vector<int> windows = field(sec, "windows", std::vector<int>{2, 3});
    int resolution = params["resolution"] = field(sec, "resolution", 256);
    double eps_edge = params["eps_edge"] = field(sec, "eps_edge", 5e-2);
    params["windows"] = windows;
    if (windows.empty()) throw ConfigError("BadConfig", "f0.windows must be non-empty");

    Emitter em(com.out_dir, config_hash_of("f0", spec, params), com.seed);
    try {
        std::vector<ConvexPolygon> seq;
        for (int w : windows) {
            SupportTable table = build_support_table(spec, w, resolution);
            em.text("support_table_w" + std::to_string(w) + ".json",
                    support_table_to_json(table, em.hash));
            seq.push_back(build_f0(table));
        }

        ConvexPolygon fin = seq.back();
        if (seq.size() >= 2) {
            std::vector<EdgeRecord> recs = detect_flat_edges(seq, eps_edge);
            for (PolyEdge& e : fin.edges)
                for (const EdgeRecord& rec : recs)
                    if (rec.stable && rec.wm == e.wm && rec.wn == e.wn) e.stable = true;
        }
        std::vector<UnimodularReport> checks;
        for (const Vec2& v : fin.verts) checks.push_back(vertex_unimodular_check(fin, v));

        em.text("f0.json", polygon_to_json(fin, checks, em.hash));
        std::vector<ConvexPolygon> draw = seq;
        draw.back() = fin;  // carry the stable flags into the plot
        write_f0_svg(em.path("f0.svg"), draw, checks, em.hash);
        em.add("f0.svg");
        em.finish();

        std::cout << "f0: " << fin.edges.size() << " edges, area " << fin.area() << " -> "
                  << em.dir << "\n";
        return 0;
    } catch (const SolverError&) {
        em.finish();
        throw;
    }
}

int cmd_homoclinic(const Common& com) {
    json cfg = load_config(com);
    PotentialSpec spec = potential_from_config(cfg);
    json sec = section(cfg, "homoclinic");
    json params;
    std::vector<int> w = field(sec, "w", std::vector<int>{1, 0});
    if (w.size() != 2) throw ConfigError("BadConfig", "homoclinic.w must be [m, n]");
    params["w"] = w;
    double r0 = params["r0"] = field(sec, "r0", 1e-3);
    double tol = params["tol"] = field(sec, "tol", 1e-8);
    double dt = params["dt"] = field(sec, "dt", 1e-3);

    Emitter em(com.out_dir, config_hash_of("homoclinic", spec, params), com.seed);
    try {
        HomoclinicRecord rec = shoot_homoclinic(spec, w[0], w[1], r0, tol, dt);
        em.text("homoclinic.json", homoclinic_to_json(rec, em.hash));
        write_orbit_csv(em.path("orbit.csv"), rec.orbit, spec);
        em.add("orbit.csv");
        em.finish();

        std::cout << "homoclinic (" << w[0] << "," << w[1] << "): action " << rec.action
                  << ", terminal gap " << rec.terminal_gap << " -> " << em.dir << "\n";
        return 0;
    } catch (const SolverError&) {
        em.finish();
        throw;
    }
}

int cmd_lp_demo(const Common& com) {
    json cfg = load_config(com);
    json sec = section(cfg, "lp");
    json params;
    double a = params["a"] = field(sec, "a", 1.0);
    double b = params["b"] = field(sec, "b", 2.0);
    double alpha = params["alpha"] = field(sec, "alpha", 3.0);
    double theta = params["theta"] = field(sec, "theta", 0.1);
    LPProblem prob = lp_demo_problem(a, b, alpha, theta);
    if (sec.contains("lambda0")) prob.lambda0 = field(sec, "lambda0", prob.lambda0);
    prob.grid_points = field(sec, "grid_points", prob.grid_points);
    prob.t_max = field(sec, "t_max", prob.t_max);
    prob.tolerance = field(sec, "tolerance", prob.tolerance);
    params["lambda0"] = prob.lambda0;
    params["grid_points"] = prob.grid_points;
    params["t_max"] = prob.t_max;
    params["tolerance"] = prob.tolerance;

    PotentialSpec none;  // the demo is potential-free; hash covers the LP parameters
    Emitter em(com.out_dir, config_hash_of("lp-demo", none, params), com.seed);
    try {
        LPResult res = lyapunov_perron_orbit(prob);

        // Known fixed point of the demo nonlinearity F1 = alpha x2^2, F2 = 0.
        double C = -alpha * theta * theta / (2.0 * b - a);
        double sup_err = 0.0;
        for (std::size_t i = 0; i < res.times.size(); ++i) {
            double t = res.times[i];
            sup_err = std::max(sup_err, std::fabs(res.values[i].x - C * std::exp(-2.0 * b * t)));
            sup_err = std::max(sup_err, std::fabs(res.values[i].y - theta * std::exp(-b * t)));
        }

        json out;
        out["a"] = a;
        out["b"] = b;
        out["alpha"] = alpha;
        out["theta"] = theta;
        out["lambda0"] = prob.lambda0;
        out["iterations"] = res.iterations;
        out["final_gap"] = res.final_gap;
        out["contraction_factor"] = res.contraction_factor;
        out["iterate_bound_factor"] = res.iterate_bound_factor;
        out["theta_window"] = res.theta_window;
        out["theta_window_exceeded"] = res.theta_window_exceeded;
        out["sup_error_vs_exact"] = sup_err;
        out["config_hash"] = hash_hex(em.hash);
        em.text("lp_demo.json", out.dump(2) + "\n");

        std::ostringstream csv;
        csv << "t,x1,x2\n";
        for (std::size_t i = 0; i < res.times.size(); ++i)
            csv << fmt17(res.times[i]) << ',' << fmt17(res.values[i].x) << ','
                << fmt17(res.values[i].y) << '\n';
        em.text("lp_orbit.csv", csv.str());
        em.finish();

        std::cout << "lp-demo: " << res.iterations << " iterations, contraction "
                  << res.contraction_factor << ", sup error " << sup_err << " -> " << em.dir
                  << "\n";
        return 0;
    } catch (const SolverError&) {
        em.finish();
        throw;
    }
}

int cmd_verify(const Common& com) {
    json cfg = load_config(com);
    json sec = section(cfg, "verify");
    std::vector<std::string> suites;
    json sel = sec.contains("suites") ? sec.at("suites")
               : sec.contains("suite") ? sec.at("suite")
                                       : json("all");
    if (sel.is_string())
        suites.push_back(sel.get<std::string>());
    else if (sel.is_array())
        for (const json& s : sel) suites.push_back(s.get<std::string>());
    else
        throw ConfigError("BadConfig", "verify.suites must be a string or an array");
    json params;
    params["suites"] = suites;

    PotentialSpec none;
    Emitter em(com.out_dir, config_hash_of("verify", none, params), com.seed);
    std::vector<CheckResult> results =
        run_suites(suites, com.seed, (fs::path(com.out_dir) / "scratch").string());

    int failed = 0;
    json checks = json::array();
    for (const CheckResult& r : results) {
        if (!r.passed) ++failed;
        std::printf("[%s] criterion %d (%s): %s — measured %.6g, required %s %.6g (%.1fs)\n",
                    r.passed ? "PASS" : "FAIL", r.criterion, r.suite.c_str(), r.name.c_str(),
                    r.measured, r.cmp.c_str(), r.required, r.elapsed_s);
        if (!r.passed && !r.detail.empty()) std::printf("       %s\n", r.detail.c_str());
        checks.push_back({{"criterion", r.criterion},
                          {"suite", r.suite},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"measured", r.measured},
                          {"required", r.required},
                          {"cmp", r.cmp},
                          {"detail", r.detail},
                          {"elapsed_s", r.elapsed_s}});
    }
    json report;
    report["config_hash"] = hash_hex(em.hash);
    report["seed"] = em.seed;
    report["checks"] = checks;
    report["failed"] = failed;
    em.text("verify_report.json", report.dump(2) + "\n");
    em.finish();

    std::printf("verify: %zu checks, %d failed\n", results.size(), failed);
    return std::min(failed, 125);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hbargeo: effective Hamiltonians, flat-set geometry, homoclinic orbits"};
    app.require_subcommand(1);

    Common com_hbar, com_f0, com_homo, com_lp, com_verify;
    CLI::App* c_hbar = app.add_subcommand("hbar", "sweep the effective Hamiltonian over a p-grid");
    CLI::App* c_f0 = app.add_subcommand("f0", "build the flat-set polygon from support values");
    CLI::App* c_homo = app.add_subcommand("homoclinic", "shoot a homoclinic orbit and its action");
    CLI::App* c_lp = app.add_subcommand("lp-demo", "stable-manifold fixed-point iteration demo");
    CLI::App* c_verify = app.add_subcommand("verify", "run acceptance suites and a report");
    add_common(c_hbar, com_hbar);
    add_common(c_f0, com_f0);
    add_common(c_homo, com_homo);
    add_common(c_lp, com_lp);
    add_common(c_verify, com_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_hbar->parsed()) return cmd_hbar(com_hbar);
        if (c_f0->parsed()) return cmd_f0(com_f0);
        if (c_homo->parsed()) return cmd_homoclinic(com_homo);
        if (c_lp->parsed()) return cmd_lp_demo(com_lp);
        if (c_verify->parsed()) return cmd_verify(com_verify);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
