#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gasket/constants.hpp"
#include "gasket/fit.hpp"
#include "gasket/graph.hpp"
#include "gasket/operators.hpp"
#include "gasket/rng.hpp"

using namespace gasket;

namespace {

long long vertex_count_formula(int m) {
    // 3 (3^m + 1) / 2 for the unit gasket at depth m.
    long long p = 1;
    for (int i = 0; i < m; ++i) p *= 3;
    return 3 * (p + 1) / 2;
}

std::vector<int> random_subset(const LevelGraph& g, Rng& rng, std::size_t min_size) {
    std::vector<int> keep;
    while (keep.size() < min_size) {
        keep.clear();
        for (std::size_t v = 0; v < g.vertices.size(); ++v)
            if (rng.uniform() < 0.6) keep.push_back(static_cast<int>(v));
    }
    return keep;
}

}  // namespace

TEST_CASE("graph counts and connectivity") {
    for (int m = 0; m <= 4; ++m) {
        LevelGraph g = build_graph(0, m);
        CHECK(static_cast<long long>(g.vertices.size()) == vertex_count_formula(m));
        long long edges = 1;
        for (int i = 0; i < m + 1; ++i) edges *= 3;
        CHECK(static_cast<long long>(g.edges.size()) == edges);

        // Connectivity by breadth-first sweep.
        std::vector<char> seen(g.vertices.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.adjacency[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = 1;
                    stack.push_back(w);
                }
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; }));
        for (const auto& adj : g.adjacency) CHECK(adj.size() <= 4);
    }
    CHECK(build_graph(0, 1).vertices.size() == 6);
    CHECK(build_graph(0, 2).vertices.size() == 15);
    CHECK(build_graph(0, 2).edges.size() == 27);
}

TEST_CASE("vertex weights sum to the blowup mass") {
    for (int M = 0; M <= 2; ++M)
        for (int m = M; m <= M + 3; ++m) {
            LevelGraph g = build_graph(M, m);
            double total = 0.0;
            for (double w : g.weights) total += w;
            CHECK(total == doctest::Approx(std::pow(3.0, M)).epsilon(1e-12));
            // A corner vertex belongs to exactly one cell.
            int corner = g.index_of({0, 0});
            REQUIRE(corner >= 0);
            CHECK(g.weights[static_cast<std::size_t>(corner)] ==
                  doctest::Approx(cell_measure(m, M) / 3.0).epsilon(1e-12));
        }
}

TEST_CASE("blowup graphs share combinatorics, spectra scale by 5") {
    for (int m = 2; m <= 4; ++m) {
        LevelGraph g0 = build_graph(0, m);
        LevelGraph g1 = build_graph(1, m);
        REQUIRE(g0.vertices.size() == g1.vertices.size());
        CHECK(g0.edges == g1.edges);
        for (std::size_t v = 0; v < g0.vertices.size(); ++v)
            CHECK(g0.vertices[v] == g1.vertices[v]);

        auto ev0 = spectrum(dirichlet_restrict(laplacian(g0), g0.interior_vertices()));
        auto ev1 = spectrum(dirichlet_restrict(laplacian(g1), g1.interior_vertices()));
        REQUIRE(ev0.size() == ev1.size());
        for (std::size_t i = 0; i < ev0.size(); ++i)
            CHECK(ev0[i] == doctest::Approx(5.0 * ev1[i]).epsilon(1e-10));

        // After the fractional power the ratio becomes 5^(alpha/2).
        for (double alpha : {0.5, 1.5}) {
            auto f0 = spectrum(dirichlet_restrict(fractional_power(laplacian(g0), 0.5 * alpha),
                                                  g0.interior_vertices()),
                               1);
            auto f1 = spectrum(dirichlet_restrict(fractional_power(laplacian(g1), 0.5 * alpha),
                                                  g1.interior_vertices()),
                               1);
            CHECK(f0.front() ==
                  doctest::Approx(std::pow(5.0, 0.5 * alpha) * f1.front()).epsilon(1e-10));
        }
    }
}

TEST_CASE("laplacian basics") {
    LevelGraph tri = build_graph(0, 0);
    SymmetricOperator L = laplacian(tri);
    auto ev = spectrum(L);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(3.0).epsilon(1e-12));

    // Zero row sums before restriction, symmetry, and the constant kernel.
    for (int m = 1; m <= 3; ++m) {
        SymmetricOperator op = laplacian(build_graph(0, m));
        const Eigen::MatrixXd& A = op.matrix();
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(A.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * A.cwiseAbs().maxCoeff());
        CHECK(spectrum(op, 1).front() == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("dirichlet restriction") {
    LevelGraph tri = build_graph(0, 0);
    SymmetricOperator L = laplacian(tri);
    SymmetricOperator killed = dirichlet_restrict(L, {0, 1});
    auto ev = spectrum(killed);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(killed.matrix()(0, 0) == doctest::Approx(2.0));
    CHECK(killed.matrix()(0, 1) == doctest::Approx(-1.0));

    std::vector<int> all{0, 1, 2};
    CHECK((dirichlet_restrict(L, all).matrix() - L.matrix()).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(dirichlet_restrict(L, {}), DomainError);

    // Cauchy interlacing: shrinking the keep set never lowers the bottom
    // eigenvalue, on random nested subsets.
    LevelGraph g = build_graph(0, 3);
    SymmetricOperator op = laplacian(g);
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> big = random_subset(g, rng, 8);
        std::vector<int> small;
        for (int v : big)
            if (rng.uniform() < 0.7) small.push_back(v);
        if (small.empty()) continue;
        double lb = spectrum(dirichlet_restrict(op, big), 1).front();
        double ls = spectrum(dirichlet_restrict(op, small), 1).front();
        CHECK(ls >= lb - 1e-10);
    }
}

TEST_CASE("fractional power spectral calculus") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 4.0;
    d(1, 1) = 9.0;
    SymmetricOperator D(d, 0);
    SymmetricOperator half = fractional_power(D, 0.5);
    CHECK(half.matrix()(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(half.matrix()(1, 1) == doctest::Approx(3.0).epsilon(1e-12));

    Eigen::MatrixXd h(2, 2);
    h << 2.0, -1.0, -1.0, 2.0;
    SymmetricOperator H(h, 0);
    SymmetricOperator Hhalf = fractional_power(H, 0.5);
    // Closed form from the (1,3) eigenpair: (H^{1/2})_00 = (1 + sqrt 3)/2.
    CHECK(Hhalf.matrix()(0, 0) == doctest::Approx(0.5 * (1.0 + std::sqrt(3.0))).epsilon(1e-12));
    // Restricted power stays below the power of the restriction.
    CHECK(Hhalf.matrix()(0, 0) < std::sqrt(h(0, 0)));

    // Homogeneity (c A)^{1/2} = sqrt(c) A^{1/2}.
    SymmetricOperator scaled = fractional_power(SymmetricOperator(5.0 * h, 0), 0.5);
    CHECK((scaled.matrix() - std::sqrt(5.0) * Hhalf.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::MatrixXd neg = -Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(fractional_power(SymmetricOperator(neg, 0), 0.5), NumericError);
}

TEST_CASE("spectrum basics") {
    Eigen::MatrixXd h(2, 2);
    h << 2.0, -1.0, -1.0, 2.0;
    auto ev = spectrum(SymmetricOperator(h, 0));
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-12));

    auto id = spectrum(SymmetricOperator(Eigen::MatrixXd::Identity(4, 4), 0));
    for (double v : id) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));

    auto ev5 = spectrum(SymmetricOperator(5.0 * h, 0));
    for (std::size_t i = 0; i < ev.size(); ++i)
        CHECK(ev5[i] == doctest::Approx(5.0 * ev[i]).epsilon(1e-12));

    CHECK(spectrum(SymmetricOperator(h, 0), 1).size() == 1);
}

TEST_CASE("heat trace against an independent matrix exponential") {
    Eigen::MatrixXd one(1, 1);
    one(0, 0) = 1.0;
    CHECK(heat_trace(SymmetricOperator(one, 0), 1.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    Eigen::MatrixXd h(2, 2);
    h << 2.0, -1.0, -1.0, 2.0;
    SymmetricOperator H(h, 0);
    CHECK(heat_trace(H, 1.0) ==
          doctest::Approx(std::exp(-1.0) + std::exp(-3.0)).epsilon(1e-12));
    CHECK(heat_trace(H, 1e-9) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(heat_trace(H, 0.0), DomainError);

    // Oracle: scaling-and-squaring matrix exponential (independent of the
    // eigendecomposition route) on 20 random Dirichlet restrictions.
    LevelGraph g = build_graph(0, 3);
    SymmetricOperator lap = laplacian(g);
    SymmetricOperator frac = fractional_power(lap, 0.5);
    Rng rng(417);
    for (int trial = 0; trial < 20; ++trial) {
        const SymmetricOperator& base = trial % 2 == 0 ? lap : frac;
        SymmetricOperator sub = dirichlet_restrict(base, random_subset(g, rng, 4));
        const double t = 0.05 + 0.4 * rng.uniform();
        Eigen::MatrixXd expm = (-t * sub.matrix()).exp();
        CHECK(heat_trace(sub, t) == doctest::Approx(expm.trace()).epsilon(1e-10));
    }
}

TEST_CASE("weighted heat kernel diagonal") {
    LevelGraph g = build_graph(0, 2);
    SymmetricOperator op =
        dirichlet_restrict(fractional_power(laplacian(g), 0.5), g.interior_vertices());
    std::vector<double> w;
    for (int v : g.interior_vertices()) w.push_back(g.weights[static_cast<std::size_t>(v)]);
    const double t = 0.3;
    Eigen::MatrixXd K = heat_kernel_mu(op, w, t);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    double weighted = 0.0;
    for (int i = 0; i < op.dim(); ++i) {
        CHECK(heat_kernel_mu_diag(op, w, t, i) == doctest::Approx(K(i, i)).epsilon(1e-12));
        weighted += w[static_cast<std::size_t>(i)] * K(i, i);
    }
    CHECK(weighted == doctest::Approx(heat_trace(op, t)).epsilon(1e-10));
}

TEST_CASE("on-diagonal decay exponent of the stable kernel") {
    // The mu-weighted diagonal (= trace, since mu(G^(0)) = 1) of the free
    // fractional generator decays like t^{-d_s/alpha} in the scaling window.
    // The window is selected by trace value: below trace ~ 2.5 the zero mode's
    // equilibrium plateau flattens the curve, and above trace ~ N/8 lattice
    // discreteness saturates it near the vertex count N, so the fit keeps the
    // times where 2.5 <= trace <= N/8.
    const double target = -constants(1.0).d_s / 1.0;
    for (int m : {4, 5, 6}) {
        LevelGraph g = build_graph(0, m);
        SymmetricOperator op = fractional_power(laplacian(g), 0.5);
        const double n_vertices = static_cast<double>(g.vertices.size());
        std::vector<double> xs, ys;
        const double t_lo = std::pow(5.0, -m), t_hi = 1.0;
        for (int i = 0; i < 40; ++i) {
            const double t = t_lo * std::pow(t_hi / t_lo, i / 39.0);
            const double tr = heat_trace(op, t);
            if (tr < 2.5 || tr > n_vertices / 8.0) continue;
            xs.push_back(std::log(t));
            ys.push_back(std::log(tr));
        }
        REQUIRE(xs.size() >= 4);
        LinearFit lf = linear_fit(xs, ys);
        CHECK(std::abs(lf.slope - target) <= 0.10 * std::abs(target));
    }
}

TEST_CASE("size guardrails") {
    CHECK_THROWS_AS(build_graph(7, 8), ResourceError);
    CHECK_THROWS_AS(build_graph(0, 12), ResourceError);
    CHECK(dense_dim_guardrail() >= 1000);
}
