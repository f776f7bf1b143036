#pragma once

#include <cstdint>
#include <vector>

#include "gasket/graph.hpp"
#include "gasket/subordinator.hpp"

namespace gasket {

// Subordinated random-walk trajectory on a level graph, sampled on a uniform
// time grid. Position at grid time u is the walk position after
// floor(S_u * 5^m) steps.
struct PathSample {
    std::vector<double> times;        // 0, dt, ..., horizon
    std::vector<int> positions;       // vertex indices, piecewise constant in between
    std::vector<double> subordinator; // S at the grid times (S_0 = 0)
};

inline constexpr long long kStepGuardrail = 1'000'000'000LL;

PathSample simulate_stable_path(const LevelGraph& g, int x0, double horizon, double dt,
                                const SubordinatorSpec& spec, Rng& rng);
// Convenience overload seeding a fresh stream from spec.seed.
PathSample simulate_stable_path(const LevelGraph& g, int x0, double horizon, double dt,
                                const SubordinatorSpec& spec);

// Monte Carlo tail of the running supremum: for each radius r, the fraction of
// paths with max_{grid u <= t} |X_u - X_0| > r. Paths are abandoned early once
// the largest radius is exceeded; paths whose step count passes max_steps
// before exceeding are counted as censored (and as non-exceedances).
struct ExceedanceReport {
    std::vector<double> radii;
    std::vector<double> probability;  // exceedance fraction per radius
    long n_paths = 0;
    long n_censored = 0;
};

ExceedanceReport exit_time_exceedance(const LevelGraph& g, int x0, double t, double dt,
                                      const SubordinatorSpec& spec,
                                      const std::vector<double>& radii, long n_paths,
                                      std::uint64_t seed,
                                      long long max_steps = 10'000'000LL);

// Discrete form of the stable-kernel scaling p(t,2x,2y) = (1/3) p(t/5^(alpha/2), x, y):
// compares the mu-weighted heat kernels of the fractional generators on
// G^(1)@m and G^(0)@m (identical lattices, weights in ratio 3, generators in
// ratio 5) under the canonical vertex identification.
// time_factor_perturbation != 1 is a negative-control hook scaling 5^(alpha/2).
struct KernelScalingReport {
    double max_deviation = 0.0;
    double kernel_scale = 0.0;  // the 5^(alpha/2) time factor actually used
    int dim = 0;
};

KernelScalingReport kernel_scaling_check(const LevelGraph& coarse, const LevelGraph& fine,
                                         double alpha, double t,
                                         double time_factor_perturbation = 1.0);

// Projected lattice coordinates (unit-gasket frame) of a graph vertex.
LatticePoint project_vertex(const LevelGraph& g, int v);

}  // namespace gasket
