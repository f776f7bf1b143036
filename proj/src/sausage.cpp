#include "gasket/sausage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gasket/operators.hpp"
#include "gasket/spectral.hpp"

namespace gasket {

namespace {

struct Welford {
    double mean = 0.0, m2 = 0.0;
    long n = 0;
    void add(double v) {
        ++n;
        double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    double stderr_() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

}  // namespace

double sausage_volume(const LevelGraph& g, const PathSample& path, double a, int cell_depth) {
    if (path.positions.empty()) throw DomainError("sausage_volume: empty path");
    if (cell_depth < 0) throw DomainError("sausage_volume: negative cell depth");
    const double cell_side = std::ldexp(1.0, g.blowup - cell_depth);
    if (a < 2.0 * cell_side)
        throw DomainError("sausage_volume: radius below cell resolution, need a >= 2 * 2^(M-k)");
    double n_cells = 1.0;
    for (int i = 0; i < cell_depth; ++i) n_cells *= 3.0;
    if (n_cells > 2e6) throw ResourceError("sausage_volume: cell enumeration too large");

    // Unique visited vertices and their bounding box (expanded by a).
    std::vector<int> visited(path.positions);
    std::sort(visited.begin(), visited.end());
    visited.erase(std::unique(visited.begin(), visited.end()), visited.end());
    std::vector<std::pair<double, double>> pts;
    pts.reserve(visited.size());
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (int v : visited) {
        auto p = g.coords(v);
        pts.push_back(p);
        xlo = std::min(xlo, p.first);
        xhi = std::max(xhi, p.first);
        ylo = std::min(ylo, p.second);
        yhi = std::max(yhi, p.second);
    }

    const double mass = cell_measure(cell_depth, g.blowup);
    const double a2 = a * a;
    double total = 0.0;
    for (const auto& cell : enumerate_cells(g.blowup, cell_depth)) {
        auto q = cell.point();
        if (q.first < xlo - a || q.first > xhi + a || q.second < ylo - a || q.second > yhi + a)
            continue;
        for (const auto& p : pts) {
            double dx = p.first - q.first, dy = p.second - q.second;
            if (dx * dx + dy * dy <= a2) {
                total += mass;
                break;
            }
        }
    }
    return total;
}

SausageEstimate sausage_functional(const LevelGraph& g, int x0, double t, double nu, double a,
                                   double alpha, double dt, int cell_depth, long n_samples,
                                   std::uint64_t seed, bool kill_at_boundary) {
    if (nu < 0.0) throw DomainError("sausage_functional: negative intensity");
    if (n_samples < 1) throw DomainError("sausage_functional: need n_samples >= 1");
    SubordinatorSpec spec{alpha, seed};
    Welford value, volume;
    for (long p = 0; p < n_samples; ++p) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(p));
        PathSample path = simulate_stable_path(g, x0, t, dt, spec, rng);
        double v = sausage_volume(g, path, a, cell_depth);
        volume.add(v);
        bool killed = false;
        if (kill_at_boundary)
            for (int pos : path.positions)
                if (g.on_outer_boundary(pos)) {
                    killed = true;
                    break;
                }
        value.add(killed ? 0.0 : std::exp(-nu * v));
    }
    SausageEstimate est;
    est.mean = value.mean;
    est.stderr_ = value.stderr_();
    est.n_samples = n_samples;
    est.mean_volume = volume.mean;
    est.volume_stderr = volume.stderr_();
    est.x0 = x0;
    est.t = t;
    est.nu = nu;
    est.radius = a;
    est.alpha = alpha;
    est.blowup = g.blowup;
    est.depth = g.depth;
    est.cell_depth = cell_depth;
    est.dt = dt;
    est.seed = seed;
    est.kill_at_boundary = kill_at_boundary;
    return est;
}

SausageEstimate survival_probability(const LevelGraph& g, int x0, double t, const Cloud& cloud,
                                     double alpha, double dt, long n_samples,
                                     std::uint64_t seed) {
    if (g.blowup != cloud.blowup)
        throw DomainError("survival_probability: graph and cloud blowups differ");
    if (n_samples < 1) throw DomainError("survival_probability: need n_samples >= 1");
    const auto centers = cloud.center_points();
    const double r2 = cloud.radius * cloud.radius;
    auto dead_at = [&](int v) {
        if (g.on_outer_boundary(v)) return true;
        auto p = g.coords(v);
        for (const auto& c : centers) {
            double dx = p.first - c.first, dy = p.second - c.second;
            if (dx * dx + dy * dy <= r2) return true;
        }
        return false;
    };

    SubordinatorSpec spec{alpha, seed};
    long alive = 0;
    for (long p = 0; p < n_samples; ++p) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(p));
        PathSample path = simulate_stable_path(g, x0, t, dt, spec, rng);
        bool ok = true;
        for (int pos : path.positions)
            if (dead_at(pos)) {
                ok = false;
                break;
            }
        if (ok) ++alive;
    }
    SausageEstimate est;
    est.mean = static_cast<double>(alive) / static_cast<double>(n_samples);
    est.stderr_ = std::sqrt(est.mean * (1.0 - est.mean) / static_cast<double>(n_samples));
    est.n_samples = n_samples;
    est.x0 = x0;
    est.t = t;
    est.nu = cloud.intensity;
    est.radius = cloud.radius;
    est.alpha = alpha;
    est.blowup = g.blowup;
    est.depth = g.depth;
    est.dt = dt;
    est.seed = seed;
    est.kill_at_boundary = true;
    return est;
}

SurvivalTraceReport averaged_survival_vs_trace(int blowup, int depth, int pad, double nu, double a,
                                               double alpha, const std::vector<double>& t_grid,
                                               long n_clouds, std::uint64_t seed) {
    if (t_grid.empty()) throw DomainError("averaged_survival_vs_trace: empty time grid");
    SpectralContext ctx(blowup, depth, pad, alpha);
    const double norm = std::pow(3.0, -blowup);
    const int m_s = min_sampling_depth(blowup, a);
    const long n = nu == 0.0 ? 1 : n_clouds;

    std::vector<Welford> b_acc(t_grid.size()), a_acc(t_grid.size()), d_acc(t_grid.size());
    for (long c = 0; c < n; ++c) {
        Cloud cloud = sample_cloud(blowup, nu, a, m_s,
                                   derive_seed(seed, static_cast<std::uint64_t>(c)));
        auto keep = ctx.free_interior(cloud, cloud.radius);
        if (keep.empty()) {
            for (std::size_t i = 0; i < t_grid.size(); ++i) {
                b_acc[i].add(0.0);
                a_acc[i].add(0.0);
                d_acc[i].add(0.0);
            }
            continue;
        }
        SymmetricOperator h = dirichlet_restrict(ctx.stable_interior(), keep);
        Eigen::VectorXd sqw(static_cast<Eigen::Index>(keep.size()));
        for (std::size_t i = 0; i < keep.size(); ++i) {
            int region_v = ctx.interior()[static_cast<std::size_t>(keep[i])];
            sqw(static_cast<Eigen::Index>(i)) =
                std::sqrt(ctx.region().weights[static_cast<std::size_t>(region_v)]);
        }
        const Eigen::VectorXd& ev = h.eigenvalues();
        Eigen::VectorXd coef = h.eigenvectors().transpose() * sqw;  // <psi_n, sqrt(w)>
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            double bsum = 0.0, asum = 0.0;
            for (Eigen::Index j = 0; j < ev.size(); ++j) {
                double e = std::exp(-std::max(ev(j), 0.0) * t_grid[i]);
                bsum += e * coef(j) * coef(j);
                asum += e;
            }
            b_acc[i].add(norm * bsum);
            a_acc[i].add(norm * asum);
            d_acc[i].add(norm * (bsum - asum));
        }
    }

    SurvivalTraceReport rep;
    rep.t = t_grid;
    rep.nu = nu;
    rep.radius = a;
    rep.alpha = alpha;
    rep.blowup = blowup;
    rep.depth = depth;
    rep.pad = pad;
    rep.n_clouds = n;
    rep.seed = seed;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        rep.survival_mean.push_back(b_acc[i].mean);
        rep.survival_stderr.push_back(b_acc[i].stderr_());
        rep.trace_mean.push_back(a_acc[i].mean);
        rep.trace_stderr.push_back(a_acc[i].stderr_());
        rep.diff_stderr.push_back(d_acc[i].stderr_());
        if (b_acc[i].mean > a_acc[i].mean + 3.0 * d_acc[i].stderr_() + 1e-12) rep.holds = false;
    }
    return rep;
}

}  // namespace gasket
