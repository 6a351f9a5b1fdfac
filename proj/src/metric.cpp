#include "hbargeo/metric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace hbargeo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-neighbor stencil: axis, diagonal and knight moves. Worst-case angular
// anisotropy of the induced chordal metric is about 3%.
struct Offset {
    int dx, dy;
    double len;  // in cells; multiply by h
};

const Offset kStencil[16] = {
    {1, 0, 1.0},  {-1, 0, 1.0},  {0, 1, 1.0},  {0, -1, 1.0},
    {1, 1, std::sqrt(2.0)},  {1, -1, std::sqrt(2.0)},
    {-1, 1, std::sqrt(2.0)}, {-1, -1, std::sqrt(2.0)},
    {1, 2, std::sqrt(5.0)},  {1, -2, std::sqrt(5.0)},
    {-1, 2, std::sqrt(5.0)}, {-1, -2, std::sqrt(5.0)},
    {2, 1, std::sqrt(5.0)},  {2, -1, std::sqrt(5.0)},
    {-2, 1, std::sqrt(5.0)}, {-2, -1, std::sqrt(5.0)},
};

// Dijkstra from `source`; lazy-deletion binary heap keyed by (dist, node
// index) so ties resolve in lexicographic node order. If `stop` is non-null
// it is called on every settled node and may end the search early.
void dijkstra(const MetricGrid& grid, int source, std::vector<double>& dist,
              const std::function<bool(int, double)>& stop) {
    const int side = grid.side;
    const double h = 1.0 / grid.resolution;
    dist.assign(static_cast<std::size_t>(side) * side, kInf);
    dist[source] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    heap.push({0.0, source});

    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;  // stale entry
        if (stop && stop(u, d)) return;
        int ux = u % side, uy = u / side;
        double wu = grid.weight[u];
        for (const Offset& o : kStencil) {
            int vx = ux + o.dx, vy = uy + o.dy;
            if (vx < 0 || vy < 0 || vx >= side || vy >= side) continue;
            int v = vy * side + vx;
            double nd = d + 0.5 * (wu + grid.weight[v]) * o.len * h;
            if (nd < dist[v]) {
                dist[v] = nd;
                heap.push({nd, v});
            }
        }
    }
}

int lattice_node(const MetricGrid& grid, int m, int n) {
    int ix = (m - grid.origin) * grid.resolution;
    int iy = (n - grid.origin) * grid.resolution;
    if (ix < 0 || iy < 0 || ix >= grid.side || iy >= grid.side)
        throw ConfigError("BadConfig", "lattice point outside cover window");
    return grid.node_index(ix, iy);
}

int gcd_int(int a, int b) { return std::gcd(std::abs(a), std::abs(b)); }

// Canonical primitive classes with sup-norm at most `window`, ordered by
// (|w|_inf, lexicographic). One representative per +/- pair.
std::vector<std::pair<int, int>> primitive_classes(int window) {
    std::vector<std::pair<int, int>> out;
    for (int m = -window; m <= window; ++m) {
        for (int n = -window; n <= window; ++n) {
            if (m == 0 && n == 0) continue;
            if (!(m > 0 || (m == 0 && n > 0))) continue;
            if (gcd_int(m, n) != 1) continue;
            out.emplace_back(m, n);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        int ra = std::max(std::abs(a.first), std::abs(a.second));
        int rb = std::max(std::abs(b.first), std::abs(b.second));
        if (ra != rb) return ra < rb;
        return a < b;
    });
    return out;
}

// One-shot sigma values for a class list: single multi-target Dijkstra from
// the origin, stopping once every +/-w node is settled.
std::vector<double> sigma_values(const PotentialSpec& spec,
                                 const std::vector<std::pair<int, int>>& classes, int window,
                                 int resolution) {
    MetricGrid grid = build_metric_grid(spec, 0.0, resolution, window);
    std::vector<char> is_target(static_cast<std::size_t>(grid.side) * grid.side, 0);
    int remaining = 0;
    for (auto [m, n] : classes) {
        for (int s : {1, -1}) {
            int idx = lattice_node(grid, s * m, s * n);
            if (!is_target[idx]) {
                is_target[idx] = 1;
                ++remaining;
            }
        }
    }
    std::vector<double> dist;
    dijkstra(grid, lattice_node(grid, 0, 0), dist, [&](int u, double) {
        if (is_target[u]) {
            is_target[u] = 0;
            --remaining;
        }
        return remaining == 0;
    });
    std::vector<double> out;
    out.reserve(classes.size());
    for (auto [m, n] : classes)
        out.push_back(std::min(dist[lattice_node(grid, m, n)], dist[lattice_node(grid, -m, -n)]));
    return out;
}

}  // namespace

bool MetricGrid::in_window(Vec2 x) const {
    double lim = -origin + 0.5 / resolution;
    return std::fabs(x.x) <= lim && std::fabs(x.y) <= lim;
}

int MetricGrid::nearest_node(Vec2 x) const {
    if (!in_window(x)) throw SolverError("OutOfWindow", "point outside the cover window");
    int ix = static_cast<int>(std::lround((x.x - origin) * resolution));
    int iy = static_cast<int>(std::lround((x.y - origin) * resolution));
    ix = std::clamp(ix, 0, side - 1);
    iy = std::clamp(iy, 0, side - 1);
    return node_index(ix, iy);
}

Vec2 MetricGrid::node_pos(int idx) const {
    int ix = idx % side, iy = idx / side;
    return {origin + static_cast<double>(ix) / resolution,
            origin + static_cast<double>(iy) / resolution};
}

MetricGrid build_metric_grid(const PotentialSpec& spec, double c, int resolution, int window) {
    if (c < 0) throw ConfigError("BadLevel", "metric level c must be >= 0");
    if (resolution < 8) throw ConfigError("BadConfig", "resolution must be >= 8");
    if (window < 1) throw ConfigError("BadConfig", "window must be >= 1");

    MetricGrid grid;
    grid.resolution = resolution;
    grid.window = window;
    grid.level_c = c;
    grid.origin = -(window + 1);
    grid.side = 2 * (window + 1) * resolution + 1;
    grid.weight.resize(static_cast<std::size_t>(grid.side) * grid.side);

    for (int iy = 0; iy < grid.side; ++iy) {
        double y = grid.origin + static_cast<double>(iy) / resolution;
        for (int ix = 0; ix < grid.side; ++ix) {
            double x = grid.origin + static_cast<double>(ix) / resolution;
            double rad = 2.0 * (c - eval_potential(spec, {x, y}));
            if (rad < 0.0) {
                ++grid.clamped_negative;
                rad = 0.0;
            }
            double w = std::sqrt(rad);
            if (w < 1e-6 && (ix % resolution != 0 || iy % resolution != 0))
                ++grid.near_zero_off_lattice;
            grid.weight[grid.node_index(ix, iy)] = w;
        }
    }
    return grid;
}

double geodesic_distance(const MetricGrid& grid, Vec2 x, Vec2 y) {
    int src = grid.nearest_node(x);
    int dst = grid.nearest_node(y);
    if (src == dst) return 0.0;
    std::vector<double> dist;
    double found = kInf;
    dijkstra(grid, src, dist, [&](int u, double d) {
        if (u == dst) {
            found = d;
            return true;
        }
        return false;
    });
    return found;
}

std::vector<double> distances_from(const MetricGrid& grid, Vec2 x) {
    std::vector<double> dist;
    dijkstra(grid, grid.nearest_node(x), dist, nullptr);
    return dist;
}

double support_value(const PotentialSpec& spec, int m, int n, int resolution, int window) {
    if (m == 0 && n == 0) throw ConfigError("BadConfig", "support class must be nonzero");
    if (window < std::max(std::abs(m), std::abs(n)) + 1)
        throw ConfigError("BadConfig", "window must exceed |w|_inf");
    return sigma_values(spec, {{m, n}}, window, resolution)[0];
}

double SupportTable::lookup(int m, int n) const {
    // Classes are stored once per +/- pair in canonical orientation.
    if (!(m > 0 || (m == 0 && n > 0))) {
        m = -m;
        n = -n;
    }
    for (const SupportEntry& e : entries)
        if (e.m == m && e.n == n) return e.sigma;
    return -1.0;
}

SupportTable build_support_table(const PotentialSpec& spec, int window, int resolution) {
    if (window < 1) throw ConfigError("BadConfig", "window must be >= 1");
    auto classes = primitive_classes(window);
    std::vector<double> fine = sigma_values(spec, classes, window, resolution);
    std::vector<double> coarse = sigma_values(spec, classes, window, std::max(8, resolution / 2));

    SupportTable table;
    table.resolution = resolution;
    table.window = window;
    table.entries.reserve(classes.size());
    table.eps_grid = 0.0;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        table.entries.push_back({classes[i].first, classes[i].second, fine[i]});
        table.eps_grid = std::max(table.eps_grid, std::fabs(fine[i] - coarse[i]));
    }
    return table;
}

SubsolutionReport subsolution_inequality_check(const PotentialSpec& spec, Vec2 p,
                                               const CorrectorField& corrector, int samples,
                                               std::uint64_t seed, int resolution, double slack) {
    if (samples < 1) throw ConfigError("BadConfig", "samples must be >= 1");
    MetricGrid grid = build_metric_grid(spec, 0.0, resolution, 1);
    Rng rng(seed);

    // Distance fields are the expensive part: draw a few source points and
    // test a batch of targets against each full field.
    int sources = std::max(1, (samples + 15) / 16);
    SubsolutionReport rep;
    rep.samples = 0;
    rep.violations = 0;
    rep.worst_margin = kInf;
    rep.slack = slack;

    for (int s = 0; s < sources && rep.samples < samples; ++s) {
        Vec2 x{rng.uniform01(), rng.uniform01()};
        int src = grid.nearest_node(x);
        Vec2 xs = grid.node_pos(src);  // snapped, so h(x,y) and p.(y-x) agree on nodes
        std::vector<double> dist = distances_from(grid, xs);
        double vx = corrector.value_at(xs);
        for (int t = 0; t < 16 && rep.samples < samples; ++t) {
            Vec2 y{rng.uniform01(), rng.uniform01()};
            int dst = grid.nearest_node(y);
            Vec2 ys = grid.node_pos(dst);
            double rhs = p.dot(ys - xs) + corrector.value_at(ys) - vx;
            double margin = dist[dst] - rhs;
            rep.worst_margin = std::min(rep.worst_margin, margin);
            if (margin < -slack) ++rep.violations;
            ++rep.samples;
        }
    }
    return rep;
}

double min_gap_omega(const PotentialSpec& spec, double delta, int resolution, int stride) {
    if (!(delta > 0.0 && delta < 0.5))
        throw ConfigError("BadConfig", "delta must lie in (0, 0.5)");
    if (stride <= 0) stride = std::max(1, resolution / 32);
    MetricGrid grid = build_metric_grid(spec, 0.0, resolution, 1);

    // For each base point, Dijkstra pops nodes in increasing distance; the
    // first settled node outside the delta-ball realizes the infimum there.
    double omega = kInf;
    std::vector<double> dist;
    int base = -grid.origin * resolution;  // node index offset of the cell corner (0,0)
    for (int iy = 0; iy < resolution; iy += stride) {
        for (int ix = 0; ix < resolution; ix += stride) {
            int src = grid.node_index(base + ix, base + iy);
            Vec2 x = grid.node_pos(src);
            double local = kInf;
            dijkstra(grid, src, dist, [&](int u, double d) {
                if (d >= omega) return true;  // cannot improve the global min
                if ((grid.node_pos(u) - x).norm() >= delta) {
                    local = d;
                    return true;
                }
                return false;
            });
            omega = std::min(omega, local);
        }
    }
    return omega;
}

}  // namespace hbargeo
