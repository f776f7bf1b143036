#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gasket/graph.hpp"
#include "gasket/rng.hpp"

namespace gasket {

// A sampled Poisson obstacle configuration on G^(M): center count is
// Poisson(nu * 3^M), centers are mu-uniform depth-m_s cell anchors.
struct Cloud {
    int blowup = 0;
    double intensity = 0.0;   // nu
    double radius = 0.0;      // a
    int sampling_depth = 0;   // m_s
    std::uint64_t seed = 0;
    std::vector<Address> centers;

    std::vector<std::pair<double, double>> center_points() const;
};

Cloud sample_cloud(int blowup, double nu, double a, int sampling_depth, std::uint64_t seed);

// Thinning coupling: keep each center independently with probability
// nu_prime / nu. The result is a Poisson(nu_prime mu) cloud whose centers are
// a subset of the input's, so obstacle monotonicity is pathwise.
Cloud thin_cloud(const Cloud& cloud, double nu_prime, std::uint64_t thin_seed);

// Vertices at Euclidean distance > r from every center (closed balls removed).
std::vector<int> free_vertices(const LevelGraph& g, const Cloud& cloud, double r);

// Cell-counting approximation of mu(B(x, r) closed) at the given depth:
// a cell counts iff its anchor lies within r.
double measure_ball(int blowup, int depth, std::pair<double, double> center, double r);

struct ClassifyParams {
    double R = 10.0;
    double b = 1.0;
    double delta = 0.5;
    double eps = 0.125;
    double kappa = 3.0;
    double R0 = 1.0;
};

// Good/bad classification: center i is good iff for every scale l >= 0 with
// 10 eps b R^l <= R0, the b*eps-swollen cloud covers at least delta/kappa of
// the measure of B(x_i, 10 eps b R^l). No admissible scale => vacuously good.
struct Classification {
    std::vector<bool> good;
    ClassifyParams params;
    int n_admissible_scales = 0;
};

Classification classify_points(const Cloud& cloud, const LevelGraph& g, const ClassifyParams& p);

// Theta_b: all vertices minus b*eps-balls around good centers only.
std::vector<int> enlarged_free_set(const LevelGraph& g, const Cloud& cloud,
                                   const Classification& cls, double b, double eps);

// Empirical doubling constant: max over sampled anchors x and admissible radii
// of mu(B(x,r)) / mu(B(x,r/3)), by cell counting.
double estimate_kappa(int blowup, int depth, double r0, int n_samples, std::uint64_t seed);

}  // namespace gasket
