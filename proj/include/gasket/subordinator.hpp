#pragma once

#include <cstdint>

#include "gasket/rng.hpp"

namespace gasket {

// alpha/2-stable subordinator with Laplace transform E[exp(-u S_t)] = exp(-t u^(alpha/2)).
struct SubordinatorSpec {
    double alpha = 1.0;       // stability index of the subordinated process, in (0,2)
    std::uint64_t seed = 0;

    double beta() const { return 0.5 * alpha; }
};

// One draw of S_1 (unit-time increment), Kanter/Chambers-Mallows-Stuck
// transform of a uniform angle and a unit exponential.
double sample_unit_subordinator(double beta, Rng& rng);

// One increment S_dt, via self-similarity S_dt = dt^(1/beta) S_1.
double sample_subordinator_increment(const SubordinatorSpec& spec, double dt, Rng& rng);

// Density eta_1(u) of S_1. Closed form for alpha = 1 (the 1/2-stable / Levy
// density); numerical Bromwich-contour (Talbot) inversion of exp(-s^beta)
// otherwise, with node doubling until 1e-8 relative agreement.
double unit_subordinator_density(double alpha, double u);

// eta_t(u) = t^(-2/alpha) eta_1(t^(-2/alpha) u).
double subordinator_density(double alpha, double t, double u);

}  // namespace gasket
