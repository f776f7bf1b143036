#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gasket/cloud.hpp"
#include "gasket/sausage.hpp"
#include "gasket/spectral.hpp"

using namespace gasket;

namespace {

PathSample constant_path(int v) {
    PathSample p;
    p.times = {0.0};
    p.positions = {v};
    p.subordinator = {0.0};
    return p;
}

}  // namespace

TEST_CASE("sausage volume of degenerate paths") {
    LevelGraph g = build_graph(0, 4);

    // Constant path: the volume is the cell-counted ball mass at the vertex.
    const int v = g.index_of({4, 4});
    REQUIRE(v >= 0);
    const double a = 0.3;
    const double vol = sausage_volume(g, constant_path(v), a, 4);
    CHECK(vol == doctest::Approx(measure_ball(0, 4, g.coords(v), a)).epsilon(1e-12));

    // Ball-volume envelope: vol / a^{d_f} bounded above and below.
    const double d_f = std::log(3.0) / std::log(2.0);
    for (double r : {0.3, 0.5, 0.8}) {
        const double ratio = sausage_volume(g, constant_path(v), r, 4) / std::pow(r, d_f);
        CHECK(ratio > 0.2);
        CHECK(ratio < 4.0);
    }

    // A path visiting every vertex with a above the cell side covers G^(0).
    PathSample all;
    all.times.push_back(0.0);
    for (std::size_t w = 0; w < g.vertices.size(); ++w) all.positions.push_back(static_cast<int>(w));
    while (all.times.size() < all.positions.size()) all.times.push_back(all.times.back() + 1.0);
    all.subordinator.assign(all.positions.size(), 0.0);
    CHECK(sausage_volume(g, all, 0.25, 4) == doctest::Approx(1.0).epsilon(1e-12));

    // Radius below cell resolution is rejected.
    CHECK_THROWS_AS(sausage_volume(g, constant_path(v), 0.05, 4), DomainError);
}

TEST_CASE("sausage volume grows along a path prefix") {
    LevelGraph g = build_graph(1, 4);
    SubordinatorSpec spec{1.0, 321};
    PathSample path = simulate_stable_path(g, 0, 0.4, 0.02, spec);
    double prev = 0.0;
    for (std::size_t cut = 1; cut <= path.positions.size(); cut += 4) {
        PathSample prefix;
        prefix.times.assign(path.times.begin(), path.times.begin() + static_cast<long>(cut));
        prefix.positions.assign(path.positions.begin(),
                                path.positions.begin() + static_cast<long>(cut));
        prefix.subordinator.assign(path.subordinator.begin(),
                                   path.subordinator.begin() + static_cast<long>(cut));
        const double vol = sausage_volume(g, prefix, 0.5, 4);
        CHECK(vol >= prev - 1e-12);
        prev = vol;
    }
}

TEST_CASE("sausage functional basics") {
    LevelGraph g = build_graph(1, 4);
    const int x0 = g.index_of({8, 4});
    REQUIRE(x0 >= 0);

    // nu = 0: the exponential functional is identically one.
    SausageEstimate free = sausage_functional(g, x0, 0.2, 0.0, 0.5, 1.0, 0.01, 4, 50, 7);
    CHECK(free.mean == doctest::Approx(1.0));
    CHECK(free.stderr_ == 0.0);
    CHECK(free.mean_volume > 0.0);

    // t = 0: mean of exp(-nu ball volume) at the start.
    SausageEstimate degen = sausage_functional(g, x0, 0.0, 2.0, 0.5, 1.0, 0.01, 4, 20, 7);
    const double ball = sausage_volume(g, constant_path(x0), 0.5, 4);
    CHECK(degen.mean == doctest::Approx(std::exp(-2.0 * ball)).epsilon(1e-12));

    // Deterministic for a fixed seed; estimates live in (0, 1].
    SausageEstimate e1 = sausage_functional(g, x0, 0.3, 1.0, 0.5, 1.0, 0.01, 4, 60, 99);
    SausageEstimate e2 = sausage_functional(g, x0, 0.3, 1.0, 0.5, 1.0, 0.01, 4, 60, 99);
    CHECK(e1.mean == e2.mean);
    CHECK(e1.mean > 0.0);
    CHECK(e1.mean <= 1.0);
}

TEST_CASE("pathwise antitonicity in t, nu, and a") {
    LevelGraph g = build_graph(1, 4);
    const int x0 = g.index_of({8, 4});
    const std::uint64_t seed = 1717;
    const long n = 40;

    // Same seed + same dt: shorter horizons are path prefixes, so the mean
    // functional decreases in t pathwise; likewise in nu and a.
    double prev_t = 2.0;
    for (double t : {0.1, 0.2, 0.4}) {
        const double cur = sausage_functional(g, x0, t, 1.0, 0.5, 1.0, 0.01, 4, n, seed).mean;
        CHECK(cur <= prev_t + 1e-12);
        prev_t = cur;
    }
    double prev_nu = 2.0;
    for (double nu : {0.5, 1.0, 2.0}) {
        const double cur = sausage_functional(g, x0, 0.2, nu, 0.5, 1.0, 0.01, 4, n, seed).mean;
        CHECK(cur <= prev_nu + 1e-12);
        prev_nu = cur;
    }
    double prev_a = 2.0;
    for (double a : {0.3, 0.5, 0.8}) {
        const double cur = sausage_functional(g, x0, 0.2, 1.0, a, 1.0, 0.01, 4, n, seed).mean;
        CHECK(cur <= prev_a + 1e-12);
        prev_a = cur;
    }
}

TEST_CASE("dt refinement leaves the mean volume nearly unchanged") {
    LevelGraph g = build_graph(1, 5);
    const int x0 = g.index_of({16, 8});
    REQUIRE(x0 >= 0);
    const double t = 0.5;
    SausageEstimate coarse = sausage_functional(g, x0, t, 1.0, 0.3, 1.0, t / 256, 4, 300, 5);
    SausageEstimate fine = sausage_functional(g, x0, t, 1.0, 0.3, 1.0, t / 512, 4, 300, 5);
    CHECK(std::abs(fine.mean_volume - coarse.mean_volume) <=
          0.02 * coarse.mean_volume + 3.0 * std::hypot(coarse.volume_stderr, fine.volume_stderr));
}

TEST_CASE("survival probability") {
    LevelGraph g = build_graph(1, 4);
    const int x0 = g.index_of({8, 4});

    // Full cover kills instantly.
    Cloud full;
    full.blowup = 1;
    full.radius = 0.5;
    full.sampling_depth = 7;
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        full.centers.push_back(g.vertex_address(static_cast<int>(v)));
    CHECK(survival_probability(g, x0, 0.1, full, 1.0, 0.01, 30, 4).mean == 0.0);

    // Empty cloud: survival decreases in t (same seeds, path prefixes) and
    // stays high for small horizons away from the boundary.
    Cloud empty;
    empty.blowup = 1;
    empty.radius = 0.1;
    empty.sampling_depth = 7;
    double prev = 2.0;
    for (double t : {0.02, 0.08, 0.32}) {
        const double cur = survival_probability(g, x0, t, empty, 1.0, 0.005, 200, 8).mean;
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    CHECK(survival_probability(g, x0, 0.02, empty, 1.0, 0.005, 200, 8).mean > 0.8);

    CHECK_THROWS_AS(survival_probability(build_graph(0, 4), x0, 0.1, empty, 1.0, 0.01, 10, 1),
                    DomainError);
}

TEST_CASE("fubini identity: sausage functional matches cloud survival") {
    // E exp(-nu mu(sausage)) equals the cloud-averaged survival probability
    // when the sausage cells sit at the cloud sampling depth.
    LevelGraph g = build_graph(1, 3);
    const int x0 = g.index_of({4, 2});
    REQUIRE(x0 >= 0);
    const double t = 0.3, dt = 0.03, nu = 1.0, a = 0.6;
    const int m_s = min_sampling_depth(1, a);

    SausageEstimate s =
        sausage_functional(g, x0, t, nu, a, 1.0, dt, m_s, 500, 42, /*kill_at_boundary=*/true);

    double mean = 0.0, m2 = 0.0;
    const int n_clouds = 30;
    for (int c = 0; c < n_clouds; ++c) {
        Cloud cloud = sample_cloud(1, nu, a, m_s, derive_seed(4242, static_cast<std::uint64_t>(c)));
        const double v = survival_probability(g, x0, t, cloud, 1.0, dt, 60,
                                              derive_seed(999, static_cast<std::uint64_t>(c)))
                             .mean;
        const double d = v - mean;
        mean += d / (c + 1);
        m2 += d * (v - mean);
    }
    const double cloud_se = std::sqrt(m2 / (n_clouds - 1) / n_clouds);
    CHECK(std::abs(s.mean - mean) <= 3.0 * std::hypot(s.stderr_, cloud_se) + 1e-12);
}

TEST_CASE("averaged survival stays below the averaged trace") {
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0};

    // Deterministic obstacle-free case on the unit gasket.
    SurvivalTraceReport free = averaged_survival_vs_trace(0, 3, 1, 0.0, 0.25, 1.0, grid, 1, 1);
    CHECK(free.holds);
    CHECK(free.n_clouds == 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(free.survival_stderr[i] == 0.0);
        CHECK(free.survival_mean[i] <= free.trace_mean[i] + 1e-12);
    }

    // Random clouds at unit scale.
    SurvivalTraceReport mc = averaged_survival_vs_trace(0, 3, 1, 1.0, 0.25, 1.0, grid, 25, 77);
    CHECK(mc.holds);
    CHECK(mc.n_clouds == 25);
}
