#include "gasket/cloud.hpp"

#include <cmath>
#include <string>

namespace gasket {

namespace {

double dist(std::pair<double, double> a, std::pair<double, double> b) {
    return std::hypot(a.first - b.first, a.second - b.second);
}

}  // namespace

std::vector<std::pair<double, double>> Cloud::center_points() const {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(centers.size());
    for (const auto& c : centers) pts.push_back(c.point());
    return pts;
}

Cloud sample_cloud(int blowup, double nu, double a, int sampling_depth, std::uint64_t seed) {
    if (nu < 0.0) throw DomainError("sample_cloud: negative intensity");
    if (!(a > 0.0)) throw DomainError("sample_cloud: radius must be positive");
    if (std::ldexp(1.0, blowup - sampling_depth) >= a / 4.0)
        throw DomainError("sample_cloud: sampling depth too coarse, need cell side < a/4");
    Cloud cloud;
    cloud.blowup = blowup;
    cloud.intensity = nu;
    cloud.radius = a;
    cloud.sampling_depth = sampling_depth;
    cloud.seed = seed;
    Rng rng(seed);
    const double mean = nu * std::pow(3.0, blowup);
    const long count = rng.poisson(mean);
    cloud.centers.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
        Address c;
        c.blowup = blowup;
        c.digits.reserve(static_cast<std::size_t>(sampling_depth));
        for (int d = 0; d < sampling_depth; ++d)
            c.digits.push_back(static_cast<std::uint8_t>(rng.below(3)));
        cloud.centers.push_back(std::move(c));
    }
    return cloud;
}

Cloud thin_cloud(const Cloud& cloud, double nu_prime, std::uint64_t thin_seed) {
    if (nu_prime < 0.0 || nu_prime > cloud.intensity)
        throw DomainError("thin_cloud: nu_prime must lie in [0, nu]");
    Cloud out = cloud;
    out.intensity = nu_prime;
    out.centers.clear();
    if (cloud.intensity == 0.0) return out;
    const double p = nu_prime / cloud.intensity;
    Rng rng(thin_seed);
    for (const auto& c : cloud.centers)
        if (rng.uniform() < p) out.centers.push_back(c);
    return out;
}

std::vector<int> free_vertices(const LevelGraph& g, const Cloud& cloud, double r) {
    if (g.blowup != cloud.blowup)
        throw DomainError("free_vertices: graph and cloud blowups differ");
    auto centers = cloud.center_points();
    std::vector<int> keep;
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        auto p = g.coords(v);
        bool free = true;
        for (const auto& c : centers) {
            if (dist(p, c) <= r) {
                free = false;
                break;
            }
        }
        if (free) keep.push_back(v);
    }
    return keep;
}

double measure_ball(int blowup, int depth, std::pair<double, double> center, double r) {
    const double cell_mass = cell_measure(depth, blowup);
    double total = 0.0;
    for (const auto& cell : enumerate_cells(blowup, depth))
        if (dist(cell.point(), center) <= r) total += cell_mass;
    return total;
}

Classification classify_points(const Cloud& cloud, const LevelGraph& g, const ClassifyParams& p) {
    if (!(p.b > cloud.radius)) throw DomainError("classify_points: need b > a");
    if (!(p.R > 3.0)) throw DomainError("classify_points: need R > 3");
    if (!(p.delta > 0.0 && p.eps > 0.0 && p.kappa > 0.0 && p.R0 > 0.0))
        throw DomainError("classify_points: delta, eps, kappa, R0 must be positive");
    if (g.blowup != cloud.blowup)
        throw DomainError("classify_points: graph and cloud blowups differ");

    Classification cls;
    cls.params = p;
    const auto centers = cloud.center_points();
    const double cell_mass = cell_measure(g.depth, g.blowup);
    // Cell anchors and their b*eps-cover flags, once per cloud.
    std::vector<std::pair<double, double>> anchors;
    anchors.reserve(g.cells.size());
    for (const auto& cell : g.cells) anchors.push_back(cell.point());
    std::vector<char> covered(anchors.size(), 0);
    const double swell = p.b * p.eps;
    for (std::size_t c = 0; c < anchors.size(); ++c)
        for (const auto& x : centers)
            if (dist(anchors[c], x) <= swell) {
                covered[c] = 1;
                break;
            }

    std::vector<double> scales;
    for (int l = 0;; ++l) {
        double rho = 10.0 * p.eps * p.b * std::pow(p.R, l);
        if (rho > p.R0) break;
        scales.push_back(rho);
        if (l > 64) break;
    }
    cls.n_admissible_scales = static_cast<int>(scales.size());

    cls.good.assign(centers.size(), true);
    for (std::size_t i = 0; i < centers.size(); ++i) {
        for (double rho : scales) {
            double mu_f = 0.0, mu_cap = 0.0;
            for (std::size_t c = 0; c < anchors.size(); ++c) {
                if (dist(anchors[c], centers[i]) <= rho) {
                    mu_f += cell_mass;
                    if (covered[c]) mu_cap += cell_mass;
                }
            }
            if (mu_cap < (p.delta / p.kappa) * mu_f) {
                cls.good[i] = false;
                break;
            }
        }
    }
    return cls;
}

std::vector<int> enlarged_free_set(const LevelGraph& g, const Cloud& cloud,
                                   const Classification& cls, double b, double eps) {
    if (cls.good.size() != cloud.centers.size())
        throw DomainError("enlarged_free_set: classification does not match cloud");
    const auto centers = cloud.center_points();
    const double swell = b * eps;
    std::vector<int> keep;
    for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
        auto pnt = g.coords(v);
        bool free = true;
        for (std::size_t i = 0; i < centers.size(); ++i) {
            if (cls.good[i] && dist(pnt, centers[i]) <= swell) {
                free = false;
                break;
            }
        }
        if (free) keep.push_back(v);
    }
    return keep;
}

double estimate_kappa(int blowup, int depth, double r0, int n_samples, std::uint64_t seed) {
    auto cells = enumerate_cells(blowup, depth);
    const double cell_side = std::ldexp(1.0, blowup - depth);
    Rng rng(seed);
    double kappa = 0.0;
    for (int s = 0; s < n_samples; ++s) {
        auto x = cells[static_cast<std::size_t>(rng.below(cells.size()))].point();
        // admissible (binary) radii with a resolvable inner ball
        for (double r = r0; r / 3.0 >= 2.0 * cell_side; r /= 2.0) {
            double outer = measure_ball(blowup, depth, x, r);
            double inner = measure_ball(blowup, depth, x, r / 3.0);
            if (inner > 0.0) kappa = std::max(kappa, outer / inner);
        }
    }
    return kappa;
}

}  // namespace gasket
