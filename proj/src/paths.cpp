#include "gasket/paths.hpp"

#include <cmath>
#include <string>

#include "gasket/operators.hpp"

namespace gasket {

namespace {

// Walk the simple random walk forward from `pos` by `steps` steps.
int advance_walk(const LevelGraph& g, int pos, long long steps, Rng& rng) {
    for (long long s = 0; s < steps; ++s) {
        const auto& nb = g.adjacency[static_cast<std::size_t>(pos)];
        pos = nb[static_cast<std::size_t>(rng.below(nb.size()))];
    }
    return pos;
}

double dist2(const LevelGraph& g, int a, int b) {
    auto [xa, ya] = g.coords(a);
    auto [xb, yb] = g.coords(b);
    return (xa - xb) * (xa - xb) + (ya - yb) * (ya - yb);
}

}  // namespace

PathSample simulate_stable_path(const LevelGraph& g, int x0, double horizon, double dt,
                                const SubordinatorSpec& spec, Rng& rng) {
    if (x0 < 0 || x0 >= static_cast<int>(g.vertices.size()))
        throw DomainError("simulate_stable_path: start vertex out of range");
    if (horizon < 0.0 || (horizon > 0.0 && !(dt > 0.0)))
        throw DomainError("simulate_stable_path: bad horizon/grid step");

    PathSample path;
    path.times.push_back(0.0);
    path.positions.push_back(x0);
    path.subordinator.push_back(0.0);
    if (horizon == 0.0) return path;

    const double walk_rate = std::pow(5.0, g.depth - g.blowup);
    double s_val = 0.0;
    long long step_done = 0;
    int pos = x0;
    const long n_grid = static_cast<long>(std::ceil(horizon / dt - 1e-12));
    for (long j = 1; j <= n_grid; ++j) {
        const double u = std::min(j * dt, horizon);
        const double du = u - path.times.back();
        s_val += sample_subordinator_increment(spec, du, rng);
        const double raw = s_val * walk_rate;
        if (raw > static_cast<double>(kStepGuardrail))
            throw ResourceError("simulate_stable_path: step count " + std::to_string(raw) +
                                " exceeds guardrail; reduce depth m or horizon t");
        const long long step = static_cast<long long>(raw);
        pos = advance_walk(g, pos, step - step_done, rng);
        step_done = step;
        path.times.push_back(u);
        path.positions.push_back(pos);
        path.subordinator.push_back(s_val);
    }
    return path;
}

PathSample simulate_stable_path(const LevelGraph& g, int x0, double horizon, double dt,
                                const SubordinatorSpec& spec) {
    Rng rng(spec.seed);
    return simulate_stable_path(g, x0, horizon, dt, spec, rng);
}

ExceedanceReport exit_time_exceedance(const LevelGraph& g, int x0, double t, double dt,
                                      const SubordinatorSpec& spec,
                                      const std::vector<double>& radii, long n_paths,
                                      std::uint64_t seed, long long max_steps) {
    if (radii.empty()) throw DomainError("exit_time_exceedance: no radii");
    ExceedanceReport rep;
    rep.radii = radii;
    rep.probability.assign(radii.size(), 0.0);
    rep.n_paths = n_paths;
    double rmax = 0.0;
    for (double r : radii) rmax = std::max(rmax, r);
    const double walk_rate = std::pow(5.0, g.depth - g.blowup);

    std::vector<long> exceed(radii.size(), 0);
    for (long p = 0; p < n_paths; ++p) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(p));
        double sup2 = 0.0;
        double s_val = 0.0;
        long long step_done = 0;
        int pos = x0;
        bool censored = false;
        const long n_grid = static_cast<long>(std::ceil(t / dt - 1e-12));
        for (long j = 1; j <= n_grid && sup2 <= rmax * rmax; ++j) {
            const double du = std::min(j * dt, t) - std::min((j - 1) * dt, t);
            s_val += sample_subordinator_increment(spec, du, rng);
            const double raw = s_val * walk_rate;
            if (raw > static_cast<double>(max_steps)) {
                censored = true;
                break;
            }
            const long long step = static_cast<long long>(raw);
            pos = advance_walk(g, pos, step - step_done, rng);
            step_done = step;
            sup2 = std::max(sup2, dist2(g, pos, x0));
        }
        if (censored) ++rep.n_censored;
        for (std::size_t i = 0; i < radii.size(); ++i)
            if (sup2 > radii[i] * radii[i]) ++exceed[i];
    }
    for (std::size_t i = 0; i < radii.size(); ++i)
        rep.probability[i] = static_cast<double>(exceed[i]) / static_cast<double>(n_paths);
    return rep;
}

KernelScalingReport kernel_scaling_check(const LevelGraph& coarse, const LevelGraph& fine,
                                         double alpha, double t,
                                         double time_factor_perturbation) {
    if (!(t > 0.0)) throw DomainError("kernel_scaling_check: t must be positive");
    if (coarse.vertices.size() != fine.vertices.size() ||
        coarse.depth != fine.depth || coarse.blowup != fine.blowup + 1)
        throw DomainError("kernel_scaling_check: graphs are not a blowup-isomorphic pair");
    for (std::size_t i = 0; i < coarse.vertices.size(); ++i)
        if (!(coarse.vertices[i] == fine.vertices[i]))
            throw DomainError("kernel_scaling_check: vertex lattices differ");

    KernelScalingReport rep;
    rep.dim = static_cast<int>(coarse.vertices.size());
    rep.kernel_scale = time_factor_perturbation * std::pow(5.0, 0.5 * alpha);

    auto frac = [&](const LevelGraph& g) {
        return fractional_power(laplacian(g), 0.5 * alpha);
    };
    Eigen::MatrixXd k_coarse = heat_kernel_mu(frac(coarse), coarse.weights, t);
    Eigen::MatrixXd k_fine = heat_kernel_mu(frac(fine), fine.weights, t / rep.kernel_scale);
    rep.max_deviation = (k_coarse - k_fine / 3.0).cwiseAbs().maxCoeff();
    return rep;
}

LatticePoint project_vertex(const LevelGraph& g, int v) {
    Address a = g.vertex_address(v);
    return project0(a).point_lattice();
}

}  // namespace gasket
