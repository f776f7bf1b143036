#pragma once

#include <cstdint>
#include <vector>

#include "gasket/cloud.hpp"
#include "gasket/paths.hpp"

namespace gasket {

// Monte Carlo estimate of a path functional, with full parameter provenance.
struct SausageEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long n_samples = 0;
    // mean/stderr of the raw sausage volume (diagnostic for dt sensitivity)
    double mean_volume = 0.0;
    double volume_stderr = 0.0;

    int x0 = 0;
    double t = 0.0;
    double nu = 0.0;
    double radius = 0.0;  // a
    double alpha = 1.0;
    int blowup = 0;
    int depth = 0;       // path graph depth
    int cell_depth = 0;  // resolution of the sausage cell union
    double dt = 0.0;
    std::uint64_t seed = 0;
    bool kill_at_boundary = false;
};

// mu-mass of the union of depth-`cell_depth` cells whose anchors lie within
// Euclidean distance a of some visited vertex (cell-set union, no double
// counting). Counting anchors makes the functional match the obstacle-cloud
// hit test exactly when cell_depth equals the cloud sampling depth.
double sausage_volume(const LevelGraph& g, const PathSample& path, double a, int cell_depth);

// MC mean of exp(-nu * sausage_volume) over independent paths from x0.
// With kill_at_boundary, paths touching the outer triangle contribute 0
// (matching survival_probability's interior killing).
SausageEstimate sausage_functional(const LevelGraph& g, int x0, double t, double nu, double a,
                                   double alpha, double dt, int cell_depth, long n_samples,
                                   std::uint64_t seed, bool kill_at_boundary = false);

// MC fraction of paths from x0 avoiding every obstacle ball and the outer
// boundary at all grid times up to t, for one fixed cloud.
SausageEstimate survival_probability(const LevelGraph& g, int x0, double t, const Cloud& cloud,
                                     double alpha, double dt, long n_samples, std::uint64_t seed);

// Deterministic per-cloud comparison of the mu-averaged survival
// B = 3^{-M} <sqrt(w), exp(-tH) sqrt(w)> against the normalized trace
// A = 3^{-M} sum exp(-lambda_n t), averaged over clouds.
struct SurvivalTraceReport {
    std::vector<double> t;
    std::vector<double> survival_mean;    // B-hat
    std::vector<double> survival_stderr;
    std::vector<double> trace_mean;       // A-hat
    std::vector<double> trace_stderr;
    std::vector<double> diff_stderr;      // stderr of (B - A), for the 3-sigma check
    bool holds = true;                    // B-hat <= A-hat + 3 diff stderr at every t
    double nu = 0.0, radius = 0.0, alpha = 1.0;
    int blowup = 0, depth = 0, pad = 0;
    long n_clouds = 0;
    std::uint64_t seed = 0;
};

SurvivalTraceReport averaged_survival_vs_trace(int blowup, int depth, int pad, double nu, double a,
                                               double alpha, const std::vector<double>& t_grid,
                                               long n_clouds, std::uint64_t seed);

}  // namespace gasket
