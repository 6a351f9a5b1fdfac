#include "hbargeo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include "hbargeo/cell_pde.hpp"
#include "hbargeo/geometry.hpp"
#include "hbargeo/io.hpp"
#include "hbargeo/metric.hpp"
#include "hbargeo/onedim.hpp"
#include "hbargeo/orbits.hpp"
#include "hbargeo/potential.hpp"
#include "hbargeo/quadrature.hpp"

namespace hbargeo {

namespace {

constexpr double kFourOverPi = 1.2732395447351626862;  // 4/pi, separable half-width oracle
constexpr double kCellTol = 1e-5;                      // drift-deviation tolerance for cell solves

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string f6(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

// Shared artifacts, built on demand and reused across criteria in one run.
struct Ctx {
    std::uint64_t seed{0};
    std::string scratch;
    PotentialSpec sep = make_template("separable");
    PotentialSpec perturbed = make_template("perturbed-separable");
    OneDimPotential well = cosine_well(1.0);

    std::optional<SupportTable> table_;   // separable, window 3, resolution 256
    std::optional<ConvexPolygon> poly_;   // build_f0 of the above
    std::optional<HomoclinicRecord> rec10_;
    double table_elapsed{0.0};

    const SupportTable& table() {
        if (!table_) {
            double t0 = now_s();
            table_ = build_support_table(sep, 3, 256);
            table_elapsed = now_s() - t0;
        }
        return *table_;
    }
    const ConvexPolygon& poly() {
        if (!poly_) poly_ = build_f0(table());
        return *poly_;
    }
    const HomoclinicRecord& rec10() {
        if (!rec10_) rec10_ = shoot_homoclinic(sep, 1, 0, 1e-3, 1e-8, 1e-3);
        return *rec10_;
    }
};

struct Sub {
    bool ok{true};
    std::ostringstream detail;
    void note(const std::string& label, double measured, double required, bool pass) {
        ok = ok && pass;
        detail << (pass ? "  ok " : "  FAIL ") << label << " = " << f6(measured)
               << " (required " << f6(required) << ");";
    }
    void text(const std::string& s) { detail << "  " << s << ';'; }
};

CheckResult make_result(int criterion, const char* suite, const char* name, double required,
                        const char* cmp) {
    CheckResult r;
    r.criterion = criterion;
    r.suite = suite;
    r.name = name;
    r.required = required;
    r.cmp = cmp;
    return r;
}

// --- criterion 1: separable F0 rectangle ------------------------------------------

CheckResult criterion_1(Ctx& ctx) {
    CheckResult r = make_result(1, "separable-oracle", "separable F0 rectangle vs 4/pi", 2e-2, "<=");
    double t0 = now_s();
    const ConvexPolygon& poly = ctx.poly();
    double built = ctx.table_elapsed;

    Sub sub;
    sub.note("edge count", static_cast<double>(poly.edges.size()), 4.0,
             poly.edges.size() == 4);
    double hw1 = poly.max_support(1, 0), hw2 = poly.max_support(0, 1);
    double dev = std::max(std::fabs(hw1 - kFourOverPi), std::fabs(hw2 - kFourOverPi));
    sub.note("max |half-width - 4/pi|", dev, 2e-2, dev <= 2e-2);
    double elapsed = built + (now_s() - t0);
    sub.note("runtime_s", elapsed, 60.0, elapsed < 60.0);

    r.measured = dev;
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = elapsed;
    return r;
}

// --- criterion 2: engine cross-validation ------------------------------------------

CheckResult criterion_2(Ctx& ctx) {
    CheckResult r = make_result(2, "cross-validation", "PDE vs separable oracle + boundary", 2e-2, "<=");
    double t0 = now_s();
    const ConvexPolygon& poly = ctx.poly();

    Sub sub;
    Rng rng(ctx.seed ^ 0xC2ull);
    double worst = 0.0;
    for (int i = 0; i < 25; ++i) {
        Vec2 p{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        double pde = solve_cell(ctx.sep, p, 128, kCellTol).hbar;
        double oracle = hbar_separable(ctx.well, ctx.well, p);
        worst = std::max(worst, std::fabs(pde - oracle));
    }
    sub.note("max |Hbar_pde - Hbar_sep| over 25 samples", worst, 2e-2, worst <= 2e-2);

    // Boundary points: 4 edge midpoints + 4 corners of the computed polygon.
    std::vector<Vec2> boundary;
    for (const PolyEdge& e : poly.edges) boundary.push_back((e.a + e.b) * 0.5);
    for (const Vec2& v : poly.verts) boundary.push_back(v);
    double worst_on = 0.0, worst_off = std::numeric_limits<double>::infinity();
    for (const Vec2& p : boundary) {
        worst_on = std::max(worst_on, solve_cell(ctx.sep, p, 128, kCellTol).hbar);
        worst_off = std::min(worst_off, solve_cell(ctx.sep, p * 1.1, 128, kCellTol).hbar);
    }
    sub.note("max Hbar on boundary", worst_on, 5e-3, worst_on <= 5e-3);
    sub.note("min Hbar at 1.1x boundary", worst_off, 5e-3, worst_off > 5e-3);
    double elapsed = now_s() - t0;
    sub.note("runtime_s", elapsed, 300.0, elapsed < 300.0);

    r.measured = worst;
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = elapsed;
    return r;
}

// --- criterion 3: corner structure ---------------------------------------------------

CheckResult criterion_3(Ctx& ctx) {
    CheckResult r = make_result(3, "corner-structure", "homology fan {10,01,11} + unimodular corner", 1, "==");
    double t0 = now_s();
    const SupportTable& table = ctx.table();
    const ConvexPolygon& poly = ctx.poly();

    Vec2 corner{table.lookup(1, 0), table.lookup(0, 1)};
    HomologyFan fan = homology_fan(corner, table, 3.0 * table.eps_grid);

    auto has = [&](int m, int n) {
        for (const auto& c : fan.classes)
            if (c[0] == m && c[1] == n) return true;
        return false;
    };
    Sub sub;
    bool set_match = fan.classes.size() == 3 && has(1, 0) && has(0, 1) && has(1, 1);
    sub.note("fan class count", static_cast<double>(fan.classes.size()), 3.0, set_match);
    {
        std::ostringstream cls;
        for (const auto& c : fan.classes) cls << '(' << c[0] << ',' << c[1] << ") ";
        sub.text("classes: " + cls.str() + "fan tol " + f6(3.0 * table.eps_grid));
    }
    sub.note("cone_consistent", fan.cone_consistent ? 1.0 : 0.0, 1.0, fan.cone_consistent);

    UnimodularReport rep = vertex_unimodular_check(poly, corner);
    sub.note("|det|", std::fabs(static_cast<double>(rep.det)), 1.0, std::abs(rep.det) == 1);
    sub.note("cone_ok", rep.cone_ok ? 1.0 : 0.0, 1.0, rep.cone_ok);

    r.measured = std::fabs(static_cast<double>(rep.det));
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

// --- criterion 4: homoclinic action ---------------------------------------------------

CheckResult criterion_4(Ctx& ctx) {
    CheckResult r = make_result(4, "homoclinic", "shoot (1,0): action vs 4/pi, sigma, confinement", 1e-3, "<=");
    double t0 = now_s();
    const HomoclinicRecord& rec = ctx.rec10();
    const SupportTable& table = ctx.table();

    Sub sub;
    double dev = std::fabs(rec.action - kFourOverPi);
    sub.note("|action - 4/pi|", dev, 1e-3, dev <= 1e-3);
    double dsig = std::fabs(rec.action - table.lookup(1, 0));
    sub.note("|action - sigma(1,0)|", dsig, 3e-2, dsig <= 3e-2);
    double conf = 0.0;
    for (const Vec2& x : rec.orbit.positions) conf = std::max(conf, std::fabs(x.y));
    sub.note("max |x2| (axis confinement)", conf, 1e-8, conf <= 1e-8);

    r.measured = dev;
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

// --- criterion 5: Lyapunov-Perron exact example ---------------------------------------

CheckResult criterion_5(Ctx&) {
    CheckResult r = make_result(5, "lp-exact", "LP demo vs (-alpha theta^2/3 e^{-4t}, theta e^{-2t})", 1e-8, "<=");
    double t0 = now_s();
    Sub sub;
    for (double theta : {0.1, -0.1}) {
        LPProblem prob = lp_demo_problem(1.0, 2.0, 3.0, theta);
        LPResult res = lyapunov_perron_orbit(prob);
        double C = -3.0 * theta * theta / 3.0;
        double sup = 0.0;
        for (std::size_t i = 0; i < res.times.size(); ++i) {
            double t = res.times[i];
            sup = std::max(sup, std::fabs(res.values[i].x - C * std::exp(-4.0 * t)));
            sup = std::max(sup, std::fabs(res.values[i].y - theta * std::exp(-2.0 * t)));
        }
        std::string tag = theta > 0 ? "theta=+0.1" : "theta=-0.1";
        sub.note(tag + " sup-error", sup, 1e-8, sup <= 1e-8);
        sub.note(tag + " contraction", res.contraction_factor, 0.5,
                 res.contraction_factor <= 0.5);
        r.measured = std::max(r.measured, sup);
    }
    double elapsed = now_s() - t0;
    sub.note("runtime_s", elapsed, 1.0, elapsed < 1.0);

    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = elapsed;
    return r;
}

// --- criterion 6: near-origin action ----------------------------------------------------

CheckResult criterion_6(Ctx& ctx) {
    CheckResult r = make_result(6, "near-origin", "two-ray closed form vs quadrature; orbit strictness", 1e-8, "<=");
    double t0 = now_s();
    Sub sub;

    // (a) closed form vs Lagrangian quadrature along the explicit rays
    // eta1 = (s1 e^{-at}, -beta1 s1 e^{-bt}), eta2 = (s2 e^{at}, beta2 s2 e^{bt}).
    Rng rng(ctx.seed ^ 0xC6ull);
    double worst_quad = 0.0;
    for (int i = 0; i < 10; ++i) {
        double a = rng.uniform(0.5, 2.0);
        double b = a * rng.uniform(1.25, 3.0);
        double s1 = -rng.uniform(0.1, 1.5);
        double s2 = rng.uniform(0.1, 1.5);
        double lam = lambda_proof(a, b);
        double beta1 = lam * rng.uniform(0.05, 1.0);
        double beta2 = lam * rng.uniform(0.05, 1.0);
        double closed = near_origin_action(a, b, s1, s2, beta1, beta2);
        auto ray = [&](double s, double beta) {
            // integrand of (1/2)|eta'|^2 - W(eta) on the decaying ray
            return integrate_adaptive(
                [=](double t) {
                    double e1 = s * std::exp(-a * t), e2 = beta * s * std::exp(-b * t);
                    return a * a * e1 * e1 + b * b * e2 * e2;
                },
                0.0, 30.0 / a, 1e-13, 4096);
        };
        double quad = ray(s1, beta1) + ray(s2, beta2);
        worst_quad = std::max(worst_quad, std::fabs(closed - quad));
    }
    sub.note("max |closed - quadrature| (10 draws)", worst_quad, 1e-8, worst_quad <= 1e-8);

    // (b) zero-energy hyperbolic connecting orbits beat the two-ray value strictly:
    // xi(t) = (nu(e^{at} - e^{-at}), c e^{bt} + d e^{-bt}), nu^2 a^2 = c d b^2.
    double worst_margin = std::numeric_limits<double>::infinity();
    bool all_strict = true;
    for (int i = 0; i < 20; ++i) {
        double a = rng.uniform(0.5, 2.0);
        double b = a * rng.uniform(1.25, 3.0);
        double nu = rng.uniform(0.1, 1.0);
        double mu = rng.uniform(-1.0, 1.0);
        double T1 = rng.uniform(2.0 / a, 4.0 / a);
        double T2 = rng.uniform(2.0 / a, 4.0 / a);
        double c = (nu * a / b) * std::exp(mu);
        double d = (nu * a / b) * std::exp(-mu);

        auto xi1 = [=](double t) { return nu * (std::exp(a * t) - std::exp(-a * t)); };
        auto xi2 = [=](double t) { return c * std::exp(b * t) + d * std::exp(-b * t); };
        double s1 = xi1(-T1), s2 = xi1(T2);
        double beta1 = -xi2(-T1) / s1, beta2 = xi2(T2) / s2;

        double action = integrate_adaptive(
            [=](double t) {
                double d1 = nu * a * (std::exp(a * t) + std::exp(-a * t));
                double d2 = b * (c * std::exp(b * t) - d * std::exp(-b * t));
                return d1 * d1 + d2 * d2;  // zero energy: (1/2)|xi'|^2 - W = |xi'|^2
            },
            -T1, T2, 1e-12, 4096);
        double two_ray = near_origin_action_raw(a, b, s1, s2, beta1, beta2);
        double margin = action - two_ray;
        double floor = 0.05 * a * nu * nu;
        all_strict = all_strict && margin >= floor;
        worst_margin = std::min(worst_margin, margin - floor);
    }
    sub.note("min (margin - 0.05 a nu^2) over 20 orbits", worst_margin, 0.0,
             all_strict && worst_margin >= 0.0);

    r.measured = worst_quad;
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

// --- criterion 7: decay bounds ------------------------------------------------------------

// Leading sub-orbit inside |x - center| <= radius (from the start), or the
// trailing one (to the end).
Orbit orbit_tail(const Orbit& o, Vec2 center, double radius, bool trailing) {
    Orbit t;
    t.energy = o.energy;
    std::size_t lo = 0, hi = o.size();
    if (trailing) {
        lo = o.size();
        while (lo > 0 && (o.positions[lo - 1] - center).norm() <= radius) --lo;
    } else {
        hi = 0;
        while (hi < o.size() && (o.positions[hi] - center).norm() <= radius) ++hi;
    }
    for (std::size_t i = lo; i < hi; ++i) {
        t.times.push_back(o.times[i]);
        t.positions.push_back(o.positions[i]);
        t.velocities.push_back(o.velocities[i]);
    }
    return t;
}

CheckResult criterion_7(Ctx& ctx) {
    CheckResult r = make_result(7, "decay", "tail h(t) under the two-sided exponential bound", 1e-6, "<=");
    double t0 = now_s();
    Sub sub;
    r.measured = -std::numeric_limits<double>::infinity();

    struct Case {
        const HomoclinicRecord* rec;
        std::string label;
    };
    HomoclinicRecord rec11 = shoot_homoclinic(ctx.sep, 1, 1, 1e-3, 1e-8, 1e-3);
    const Case cases[] = {{&ctx.rec10(), "(1,0)"}, {&rec11, "(1,1)"}};

    for (const Case& cs : cases) {
        Vec2 w{static_cast<double>(cs.rec->m), static_cast<double>(cs.rec->n)};
        Orbit head = orbit_tail(cs.rec->orbit, Vec2{0, 0}, 0.3, false);
        Orbit tail = orbit_tail(cs.rec->orbit, w, 0.3, true);
        for (const auto& [seg, side] : {std::pair{&head, "launch"}, std::pair{&tail, "capture"}}) {
            std::string label = cs.label + " " + side;
            if (seg->size() < 16) {
                sub.note(label + " samples", static_cast<double>(seg->size()), 16.0, false);
                continue;
            }
            DecayReport rep = decay_check(*seg, ctx.sep, 0.0, 1e-6);
            sub.note(label + " worst margin (c=" + f6(rep.c) + ")", rep.worst_margin, 1e-6,
                     rep.worst_margin <= 1e-6 && rep.dominance_ok);
            r.measured = std::max(r.measured, rep.worst_margin);
        }
    }

    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

// --- criterion 8: global properties ----------------------------------------------------------

CheckResult criterion_8(Ctx& ctx) {
    CheckResult r = make_result(8, "global-properties", "evenness/bounds/convexity + interior radius", 3e-2, "<=");
    double t0 = now_s();
    Sub sub;

    HbarGrid g128 = sweep_hbar_grid(ctx.sep, 2.0, 0.5, 128, kCellTol);
    GlobalPropertyReport rep128 = validate_global_properties(g128, grid_min(ctx.sep));
    sub.note("separable evenness defect", rep128.evenness_defect, 1e-15,
             rep128.evenness_defect <= 1e-15);
    double bound_viol =
        std::max(rep128.lower_bound_violation, rep128.upper_bound_violation);
    sub.note("separable bound violation", bound_viol, 2e-2, bound_viol <= 2e-2);
    sub.note("separable convexity violation @128", rep128.convexity_violation, 3e-2,
             rep128.convexity_violation <= 3e-2);

    HbarGrid g64 = sweep_hbar_grid(ctx.sep, 2.0, 0.5, 64, kCellTol);
    GlobalPropertyReport rep64 = validate_global_properties(g64, grid_min(ctx.sep));
    sub.note("convexity @128 - @64 (refinement)",
             rep128.convexity_violation - rep64.convexity_violation, 5e-3,
             rep128.convexity_violation <= rep64.convexity_violation + 5e-3);

    double radius = interior_point_check(g128, 5e-3);
    sub.note("interior radius", radius, 0.5, radius > 0.5);

    HbarGrid gp = sweep_hbar_grid(ctx.perturbed, 1.0, 0.5, 128, kCellTol);
    GlobalPropertyReport repp = validate_global_properties(gp, grid_min(ctx.perturbed));
    bool pert_ok = repp.pass(2e-2, 3e-2);
    sub.note("perturbed-separable suite pass", pert_ok ? 1.0 : 0.0, 1.0, pert_ok);

    r.measured = rep128.convexity_violation;
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

// --- criterion 9: flat-edge densification ------------------------------------------------------

CheckResult criterion_9(Ctx& ctx) {
    CheckResult r = make_result(9, "densification", "stable edges non-decreasing over windows (2,3,4)", 0, ">=");
    double t0 = now_s();
    Sub sub;
    const double eps_edge = 2e-2;

    std::vector<ConvexPolygon> seq = refine_f0(ctx.perturbed, {2, 3, 4}, {128, 128, 128});

    auto stable_records = [&](std::size_t upto) {
        std::vector<ConvexPolygon> head(seq.begin(), seq.begin() + upto);
        std::vector<EdgeRecord> recs = detect_flat_edges(head, eps_edge);
        std::vector<EdgeRecord> stable;
        for (const EdgeRecord& e : recs)
            if (e.stable) stable.push_back(e);
        return stable;
    };
    std::vector<EdgeRecord> s23 = stable_records(2), s34 = stable_records(3);
    sub.note("stable edges window 3", static_cast<double>(s23.size()), 1.0, s23.size() >= 1);
    sub.note("stable edges window 4 - window 3",
             static_cast<double>(s34.size()) - static_cast<double>(s23.size()), 0.0,
             s34.size() >= s23.size());

    // Vertices of the final polygon flanked by stable edges must be unimodular.
    const ConvexPolygon& fin = seq.back();
    auto is_stable = [&](const PolyEdge& e) {
        for (const EdgeRecord& s : s34)
            if (s.wm == e.wm && s.wn == e.wn) return true;
        return false;
    };
    int checked = 0, bad_det = 0;
    std::size_t n = fin.verts.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PolyEdge& incoming = fin.edges[(i + n - 1) % n];
        const PolyEdge& outgoing = fin.edges[i];
        if (!is_stable(incoming) || !is_stable(outgoing)) continue;
        UnimodularReport rep = vertex_unimodular_check(fin, fin.verts[i]);
        ++checked;
        if (std::abs(rep.det) != 1) ++bad_det;
    }
    sub.note("stable vertices checked", static_cast<double>(checked), 1.0, checked >= 1);
    sub.note("stable vertices with |det| != 1", static_cast<double>(bad_det), 0.0, bad_det == 0);

    r.measured = static_cast<double>(s34.size()) - static_cast<double>(s23.size());
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

// --- criterion 10: determinism -------------------------------------------------------------------

// One full artifact pass of the criterion 1-4 pipelines (reduced hbar sweep,
// see the decisions ledger): every file format the toolkit persists.
std::vector<std::string> determinism_run(Ctx& ctx, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::uint64_t hash = fnv1a64(potential_to_json(ctx.sep) + "|determinism");
    std::vector<std::string> files;
    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file((fs::path(dir) / name).string(), content);
        files.push_back(name);
    };

    SupportTable table = build_support_table(ctx.sep, 3, 256);
    ConvexPolygon poly = build_f0(table);
    std::vector<UnimodularReport> checks;
    for (const Vec2& v : poly.verts) checks.push_back(vertex_unimodular_check(poly, v));
    emit("support_table.json", support_table_to_json(table, hash));
    emit("f0.json", polygon_to_json(poly, checks, hash));
    write_f0_svg((fs::path(dir) / "f0.svg").string(), {poly}, checks, hash);
    files.push_back("f0.svg");

    HbarGrid grid = sweep_hbar_grid(ctx.sep, 1.0, 0.5, 64, kCellTol);
    write_hbar_csv((fs::path(dir) / "hbar.csv").string(), grid);
    write_hbar_sidecar((fs::path(dir) / "hbar.json").string(), grid, hash, ctx.seed);
    write_hbar_svg((fs::path(dir) / "hbar.svg").string(), grid, {5e-3, 0.5}, hash);
    files.push_back("hbar.csv");
    files.push_back("hbar.json");
    files.push_back("hbar.svg");

    Vec2 corner{table.lookup(1, 0), table.lookup(0, 1)};
    HomologyFan fan = homology_fan(corner, table, 3.0 * table.eps_grid);
    UnimodularReport rep = vertex_unimodular_check(poly, corner);
    std::ostringstream cj;
    cj << "{\n  \"p\": [" << fmt17(corner.x) << ", " << fmt17(corner.y) << "],\n  \"classes\": [";
    for (std::size_t i = 0; i < fan.classes.size(); ++i)
        cj << (i ? ", " : "") << '[' << fan.classes[i][0] << ", " << fan.classes[i][1] << ']';
    cj << "],\n  \"det\": " << rep.det << ",\n  \"config_hash\": \"" << hash_hex(hash)
       << "\"\n}\n";
    emit("corner.json", cj.str());

    HomoclinicRecord rec = shoot_homoclinic(ctx.sep, 1, 0, 1e-3, 1e-8, 1e-3);
    emit("homoclinic.json", homoclinic_to_json(rec, hash));
    write_orbit_csv((fs::path(dir) / "orbit.csv").string(), rec.orbit, ctx.sep);
    files.push_back("orbit.csv");

    write_manifest(dir, hash, ctx.seed, files);
    files.push_back("manifest.json");
    std::sort(files.begin(), files.end());
    return files;
}

CheckResult criterion_10(Ctx& ctx) {
    CheckResult r = make_result(10, "determinism", "criteria 1-4 artifacts byte-identical on rerun", 0, "==");
    double t0 = now_s();
    namespace fs = std::filesystem;
    std::string dir_a = (fs::path(ctx.scratch) / "determinism_a").string();
    std::string dir_b = (fs::path(ctx.scratch) / "determinism_b").string();

    std::vector<std::string> files_a = determinism_run(ctx, dir_a);
    std::vector<std::string> files_b = determinism_run(ctx, dir_b);

    Sub sub;
    int mismatches = 0;
    if (files_a != files_b) {
        ++mismatches;
        sub.text("file lists differ");
    } else {
        for (const std::string& name : files_a) {
            std::string a = read_text_file((fs::path(dir_a) / name).string());
            std::string b = read_text_file((fs::path(dir_b) / name).string());
            if (a != b) {
                ++mismatches;
                sub.text(name + " differs between runs");
            }
        }
        sub.text(std::to_string(files_a.size()) + " artifacts compared");
    }
    sub.note("mismatching artifacts", static_cast<double>(mismatches), 0.0, mismatches == 0);

    r.measured = static_cast<double>(mismatches);
    r.passed = sub.ok;
    r.detail = sub.detail.str();
    r.elapsed_s = now_s() - t0;
    return r;
}

}  // namespace

std::vector<std::string> available_suites() {
    return {"separable-oracle", "cross-validation", "corner-structure", "homoclinic",
            "lp-exact",         "near-origin",      "decay",            "global-properties",
            "densification",    "determinism",      "all"};
}

std::vector<CheckResult> run_suites(const std::vector<std::string>& suites, std::uint64_t seed,
                                    const std::string& scratch_dir) {
    const std::vector<std::string> catalog = available_suites();
    bool all = false;
    std::vector<bool> selected(10, false);
    for (const std::string& s : suites) {
        auto it = std::find(catalog.begin(), catalog.end(), s);
        if (it == catalog.end()) {
            std::string names;
            for (const std::string& c : catalog) names += (names.empty() ? "" : ", ") + c;
            throw ConfigError("UnknownSuite", "unknown suite '" + s + "'; available: " + names);
        }
        if (s == "all")
            all = true;
        else
            selected[static_cast<std::size_t>(it - catalog.begin())] = true;
    }
    if (suites.empty()) all = true;

    Ctx ctx;
    ctx.seed = seed;
    ctx.scratch = scratch_dir.empty() ? "verify-scratch" : scratch_dir;
    std::filesystem::create_directories(ctx.scratch);

    using CriterionFn = CheckResult (*)(Ctx&);
    const CriterionFn fns[10] = {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                 criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

    std::vector<CheckResult> results;
    for (int i = 0; i < 10; ++i) {
        if (!all && !selected[static_cast<std::size_t>(i)]) continue;
        double t0 = now_s();
        try {
            results.push_back(fns[i](ctx));
        } catch (const Error& e) {
            CheckResult r;
            r.criterion = i + 1;
            r.suite = catalog[static_cast<std::size_t>(i)];
            r.name = "criterion " + std::to_string(i + 1);
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
            r.elapsed_s = now_s() - t0;
            results.push_back(r);
        }
    }
    return results;
}

}  // namespace hbargeo
