#include "gasket/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gasket/constants.hpp"

namespace gasket {

namespace {

double sq_dist(std::pair<double, double> a, std::pair<double, double> b) {
    return (a.first - b.first) * (a.first - b.first) +
           (a.second - b.second) * (a.second - b.second);
}

std::vector<double> clamped_eigenvalues(const SymmetricOperator& op) {
    std::vector<double> ev = spectrum(op);
    for (double& v : ev) v = std::max(v, 0.0);
    return ev;
}

}  // namespace

double KilledSpectrum::normalization() const { return std::pow(3.0, -blowup); }

double ids_cdf(const EmpiricalIDS& ids, double lambda) {
    if (lambda < 0.0) throw DomainError("ids_cdf: lambda must be >= 0");
    const auto& ev = ids.spectrum.eigenvalues;
    auto it = std::upper_bound(ev.begin(), ev.end(), lambda);
    return ids.spectrum.normalization() * static_cast<double>(it - ev.begin());
}

double laplace_transform(const EmpiricalIDS& ids, double t) {
    if (!(t > 0.0)) throw DomainError("laplace_transform: t must be positive");
    double s = 0.0;
    for (double ev : ids.spectrum.eigenvalues) s += std::exp(-ev * t);
    return ids.spectrum.normalization() * s;
}

struct SpectralContext::Impl {
    LevelGraph region;
    int pad = 0;
    double alpha = 1.0;
    std::vector<int> interior;       // region vertex indices
    SymmetricOperator stable;        // fractional ambient generator on interior
    SymmetricOperator brownian;      // ambient Laplacian on interior
    std::vector<std::pair<double, double>> interior_coords;

    // Spectrum of the stable operator restricted to `positions` (into interior).
    std::vector<double> stable_spectrum_on(const std::vector<int>& positions) const {
        return clamped_eigenvalues(dirichlet_restrict(stable, positions));
    }
};

SpectralContext::SpectralContext(int blowup, int depth, int pad, double alpha) {
    if (pad < 0) throw DomainError("SpectralContext: pad must be >= 0");
    constants(alpha);  // validates alpha in (0,2)
    auto impl = std::make_shared<Impl>();
    impl->pad = pad;
    impl->alpha = alpha;
    impl->region = build_graph(blowup, depth);
    impl->interior = impl->region.interior_vertices();
    for (int v : impl->interior) impl->interior_coords.push_back(impl->region.coords(v));

    // Padded ambient G^(M+pad)@(m+pad) has the same lattice spacing as the
    // region, and the region occupies the corner-0 sector, so region lattice
    // coordinates are valid ambient lattice coordinates as-is.
    LevelGraph ambient = build_graph(blowup + pad, depth + pad);
    std::vector<int> amb_idx;
    amb_idx.reserve(impl->interior.size());
    for (int v : impl->interior) {
        int a = ambient.index_of(impl->region.vertices[static_cast<std::size_t>(v)]);
        if (a < 0) throw NumericError("SpectralContext: region vertex missing from ambient graph");
        amb_idx.push_back(a);
    }

    SymmetricOperator lap = laplacian(ambient);
    const Eigen::VectorXd& theta = lap.eigenvalues();
    if (theta.size() > 0 && theta(0) < -1e-10)
        throw NumericError("SpectralContext: negative ambient eigenvalue " +
                           std::to_string(theta(0)));
    Eigen::VectorXd powered(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i)
        powered(i) = theta(i) <= 0.0 ? 0.0 : std::pow(theta(i), 0.5 * alpha);
    const Eigen::MatrixXd& V = lap.eigenvectors();
    const int k = static_cast<int>(amb_idx.size());
    Eigen::MatrixXd rows(k, V.cols());
    for (int i = 0; i < k; ++i) rows.row(i) = V.row(amb_idx[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd frac = rows * powered.asDiagonal() * rows.transpose();
    frac = 0.5 * (frac + frac.transpose().eval());
    impl->stable = SymmetricOperator(std::move(frac), lap.time_scale_exponent());
    impl->brownian = dirichlet_restrict(lap, amb_idx);
    impl_ = std::move(impl);
}

const LevelGraph& SpectralContext::region() const { return impl_->region; }
int SpectralContext::pad() const { return impl_->pad; }
double SpectralContext::alpha() const { return impl_->alpha; }
const std::vector<int>& SpectralContext::interior() const { return impl_->interior; }
const SymmetricOperator& SpectralContext::stable_interior() const { return impl_->stable; }
const SymmetricOperator& SpectralContext::brownian_interior() const { return impl_->brownian; }

std::vector<int> SpectralContext::free_interior(const Cloud& cloud, double radius) const {
    if (cloud.blowup != impl_->region.blowup)
        throw DomainError("SpectralContext: cloud blowup does not match region");
    const double r = radius < 0.0 ? cloud.radius : radius;
    auto centers = cloud.center_points();
    std::vector<int> keep;
    for (std::size_t i = 0; i < impl_->interior.size(); ++i) {
        bool free = true;
        for (const auto& c : centers)
            if (sq_dist(impl_->interior_coords[i], c) <= r * r) {
                free = false;
                break;
            }
        if (free) keep.push_back(static_cast<int>(i));
    }
    return keep;
}

KilledSpectrum SpectralContext::killed_spectrum(const Cloud& cloud, double radius) const {
    KilledSpectrum ks;
    ks.blowup = impl_->region.blowup;
    ks.depth = impl_->region.depth;
    ks.pad = impl_->pad;
    ks.alpha = impl_->alpha;
    ks.radius = radius < 0.0 ? cloud.radius : radius;
    ks.cloud_seed = cloud.seed;
    auto keep = free_interior(cloud, radius);
    if (!keep.empty()) ks.eigenvalues = impl_->stable_spectrum_on(keep);
    return ks;
}

std::vector<double> SpectralContext::killed_brownian_spectrum(const Cloud& cloud,
                                                              double radius) const {
    auto keep = free_interior(cloud, radius);
    if (keep.empty()) return {};
    return clamped_eigenvalues(dirichlet_restrict(impl_->brownian, keep));
}

KilledSpectrum killed_spectrum(const LevelGraph& g, const Cloud& cloud, double a, double alpha,
                               int pad) {
    SpectralContext ctx(g.blowup, g.depth, pad, alpha);
    return ctx.killed_spectrum(cloud, a);
}

int min_sampling_depth(int blowup, double a) {
    if (!(a > 0.0)) throw DomainError("min_sampling_depth: radius must be positive");
    int m_s = blowup;
    while (std::ldexp(1.0, blowup - m_s) >= a / 4.0) ++m_s;
    return m_s;
}

std::vector<KilledSpectrum> ensemble_spectra(const SpectralContext& ctx, double nu, double a,
                                             long n_clouds, std::uint64_t seed,
                                             int sampling_depth) {
    if (n_clouds < 1) throw DomainError("ensemble_spectra: need n_clouds >= 1");
    const long n = nu == 0.0 ? 1 : n_clouds;  // obstacle-free is deterministic
    std::vector<KilledSpectrum> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long c = 0; c < n; ++c) {
        Cloud cloud = sample_cloud(ctx.region().blowup, nu, a, sampling_depth,
                                   derive_seed(seed, static_cast<std::uint64_t>(c)));
        out.push_back(ctx.killed_spectrum(cloud));
    }
    return out;
}

LaplaceCurve curve_from_spectra(const std::vector<KilledSpectrum>& spectra,
                                const std::vector<double>& t_grid, double nu,
                                std::uint64_t seed) {
    if (spectra.empty()) throw DomainError("curve_from_spectra: no spectra");
    LaplaceCurve curve;
    curve.t = t_grid;
    curve.nu = nu;
    curve.radius = spectra.front().radius;
    curve.alpha = spectra.front().alpha;
    curve.blowup = spectra.front().blowup;
    curve.depth = spectra.front().depth;
    curve.pad = spectra.front().pad;
    curve.n_clouds = static_cast<long>(spectra.size());
    curve.seed = seed;
    const double n = static_cast<double>(spectra.size());
    for (double t : t_grid) {
        double mean = 0.0, m2 = 0.0;
        long k = 0;
        for (const auto& sp : spectra) {
            double v = laplace_transform(EmpiricalIDS{sp}, t);
            ++k;
            double d = v - mean;
            mean += d / static_cast<double>(k);
            m2 += d * (v - mean);
        }
        curve.value.push_back(mean);
        curve.stderr_.push_back(spectra.size() > 1 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0);
    }
    return curve;
}

double ensemble_ids_cdf(const std::vector<KilledSpectrum>& spectra, double lambda) {
    if (spectra.empty()) throw DomainError("ensemble_ids_cdf: no spectra");
    double s = 0.0;
    for (const auto& sp : spectra) s += ids_cdf(EmpiricalIDS{sp}, lambda);
    return s / static_cast<double>(spectra.size());
}

LaplaceCurve averaged_laplace(int blowup, int depth, int pad, double nu, double a, double alpha,
                              const std::vector<double>& t_grid, long n_clouds,
                              std::uint64_t seed) {
    SpectralContext ctx(blowup, depth, pad, alpha);
    auto spectra = ensemble_spectra(ctx, nu, a, n_clouds, seed, min_sampling_depth(blowup, a));
    return curve_from_spectra(spectra, t_grid, nu, seed);
}

namespace {

// Shared evaluator for the variational functional: one graph and one
// fractional operator per (alpha, depth), reused across candidates.
class VariationalEvaluator {
  public:
    VariationalEvaluator(double alpha, int depth)
        : graph_(build_graph(0, depth)),
          op_(fractional_power(laplacian(graph_), 0.5 * alpha)),
          coef_(std::pow(2.0, -constants(alpha).d_alpha)) {}

    int depth() const { return graph_.depth; }

    VariationalResult evaluate(const CandidateSet& cand) const {
        if (cand.cells.empty())
            throw DomainError("variational_functional: candidate set is empty");
        if (cand.cell_depth < 0 || cand.cell_depth > graph_.depth)
            throw DomainError("variational_functional: cell depth must lie in [0, m]");
        long n_cells_k = 1;
        for (int i = 0; i < cand.cell_depth; ++i) n_cells_k *= 3;
        std::vector<char> selected(static_cast<std::size_t>(n_cells_k), 0);
        for (int c : cand.cells) {
            if (c < 0 || c >= n_cells_k)
                throw DomainError("variational_functional: cell index out of range");
            selected[static_cast<std::size_t>(c)] = 1;
        }
        // Depth-m cells inherit selection from their depth-k ancestor: the
        // digit-lex index divides exactly.
        long ratio = 1;
        for (int i = cand.cell_depth; i < graph_.depth; ++i) ratio *= 3;
        std::vector<char> in_u(graph_.vertices.size(), 0);
        for (std::size_t cell = 0; cell < graph_.cells.size(); ++cell) {
            if (!selected[static_cast<std::size_t>(static_cast<long>(cell) / ratio)]) continue;
            for (int v : graph_.cell_corners[cell]) in_u[static_cast<std::size_t>(v)] = 1;
        }
        std::vector<int> keep;
        for (std::size_t v = 0; v < in_u.size(); ++v)
            if (in_u[v]) keep.push_back(static_cast<int>(v));

        VariationalResult r;
        r.best = cand;
        std::sort(r.best.cells.begin(), r.best.cells.end());
        r.best.cells.erase(std::unique(r.best.cells.begin(), r.best.cells.end()),
                           r.best.cells.end());
        r.mu = static_cast<double>(r.best.cells.size()) / static_cast<double>(n_cells_k);
        r.lambda0 = std::max(spectrum(dirichlet_restrict(op_, keep), 1).front(), 0.0);
        r.value = r.lambda0 + coef_ * r.mu;
        return r;
    }

  private:
    LevelGraph graph_;
    SymmetricOperator op_;
    double coef_;
};

}  // namespace

VariationalResult variational_functional(const std::vector<CandidateSet>& candidates, double alpha,
                                         int depth) {
    if (candidates.empty()) throw DomainError("variational_functional: empty candidate family");
    VariationalEvaluator eval(alpha, depth);
    VariationalResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& cand : candidates) {
        VariationalResult r = eval.evaluate(cand);
        if (r.value < best.value) best = r;
    }
    return best;
}

VariationalResult minimize_variational(double alpha, int depth, int cell_depth, int n_restarts,
                                       std::uint64_t seed) {
    if (n_restarts < 1) throw DomainError("minimize_variational: need n_restarts >= 1");
    VariationalEvaluator eval(alpha, depth);
    long n_cells = 1;
    for (int i = 0; i < cell_depth; ++i) n_cells *= 3;

    auto to_candidate = [&](const std::vector<char>& mask) {
        CandidateSet c;
        c.cell_depth = cell_depth;
        for (long i = 0; i < n_cells; ++i)
            if (mask[static_cast<std::size_t>(i)]) c.cells.push_back(static_cast<int>(i));
        return c;
    };

    VariationalResult best;
    best.value = std::numeric_limits<double>::infinity();
    Rng rng(seed);
    for (int restart = 0; restart < n_restarts; ++restart) {
        std::vector<char> mask(static_cast<std::size_t>(n_cells), 0);
        if (restart == 0) {
            std::fill(mask.begin(), mask.end(), 1);  // full set
        } else if (restart == 1) {
            mask[0] = 1;  // single corner cell
        } else {
            do {
                for (auto& b : mask) b = rng.uniform() < 0.5 ? 1 : 0;
            } while (std::none_of(mask.begin(), mask.end(), [](char b) { return b != 0; }));
        }
        VariationalResult cur = eval.evaluate(to_candidate(mask));
        for (bool improved = true; improved;) {
            improved = false;
            for (long i = 0; i < n_cells; ++i) {
                std::size_t ui = static_cast<std::size_t>(i);
                mask[ui] ^= 1;
                if (std::none_of(mask.begin(), mask.end(), [](char b) { return b != 0; })) {
                    mask[ui] ^= 1;
                    continue;
                }
                VariationalResult trial = eval.evaluate(to_candidate(mask));
                if (trial.value < cur.value - 1e-14) {
                    cur = trial;
                    improved = true;
                } else {
                    mask[ui] ^= 1;
                }
            }
        }
        if (cur.value < best.value) best = cur;
    }
    return best;
}

double min_R(double c3, double c4, double K, double delta, double s) {
    if (!(c3 > 0.0 && c4 > 0.0 && K > 0.0 && delta > 0.0 && s > 0.0))
        throw DomainError("min_R: all inputs must be positive");
    const double rhs = std::pow(1.0 + 2.0 * c3 * std::exp(K) * (1.0 + c4 * (1.0 + K / delta)),
                                1.0 / s);
    const double floor3 = 3.0 * (1.0 + 1e-9);  // strict R > 3 requirement
    return std::max(floor3, rhs);
}

EnlargementReport check_enlargement(const SpectralContext& ctx, const Cloud& cloud,
                                    const ClassifyParams& params, double cutoff, double slack) {
    if (!(cutoff > 0.0 && slack > 0.0))
        throw DomainError("check_enlargement: cutoff and slack must be positive");
    EnlargementReport rep;
    rep.cutoff = cutoff;
    rep.slack = slack;
    rep.b = params.b;
    rep.eps = params.eps;
    rep.n_centers = static_cast<long>(cloud.centers.size());

    Classification cls = classify_points(cloud, ctx.region(), params);
    for (bool g : cls.good)
        if (g) ++rep.n_good;

    const double inf = std::numeric_limits<double>::infinity();
    KilledSpectrum theta = ctx.killed_spectrum(cloud, cloud.radius * params.eps);
    rep.lambda_theta = theta.eigenvalues.empty() ? inf : theta.eigenvalues.front();

    // b*eps-balls around good centers only; restrict to the context interior.
    std::vector<int> enlarged =
        enlarged_free_set(ctx.region(), cloud, cls, params.b, params.eps);
    std::vector<int> pos_of(ctx.region().vertices.size(),
                            -1);  // region vertex -> interior position
    for (std::size_t i = 0; i < ctx.interior().size(); ++i)
        pos_of[static_cast<std::size_t>(ctx.interior()[i])] = static_cast<int>(i);
    std::vector<int> keep;
    for (int v : enlarged)
        if (pos_of[static_cast<std::size_t>(v)] >= 0)
            keep.push_back(pos_of[static_cast<std::size_t>(v)]);
    if (keep.empty()) {
        rep.lambda_b = inf;
    } else {
        auto ev = spectrum(dirichlet_restrict(ctx.stable_interior(), keep), 1);
        rep.lambda_b = std::max(ev.front(), 0.0);
    }

    rep.holds = std::min(rep.lambda_b, cutoff) <= std::min(rep.lambda_theta, cutoff) + slack +
                                                      1e-12;
    return rep;
}

}  // namespace gasket
