#include "gasket/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gasket/constants.hpp"
#include "gasket/operators.hpp"

namespace gasket {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("linear_fit: need at least two matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("linear_fit: degenerate abscissae");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += r * r;
    }
    f.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    f.slope_se = x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
    return f;
}

int m0_scale(double t, double nu, double alpha) {
    if (!(t > 0.0 && nu > 0.0)) throw DomainError("m0_scale: t and nu must be positive");
    const double d_alpha = constants(alpha).d_alpha;
    // Nudge so exact powers of 2^{d_alpha} land on the closed lower boundary.
    return static_cast<int>(std::floor(std::log2(t / nu) / d_alpha + 1e-12));
}

double tauberian_convert(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("tauberian_convert: gamma must lie in (0,1)");
    return gamma / (1.0 - gamma);
}

FitReport fit_stretched_exponential(const LaplaceCurve& curve, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw DomainError("fit_stretched_exponential: gamma must lie in (0,1)");
    if (curve.t.size() != curve.value.size() || curve.t.empty())
        throw DomainError("fit_stretched_exponential: malformed curve");
    double t_min = curve.t.front(), t_max = curve.t.front();
    for (double t : curve.t) {
        t_min = std::min(t_min, t);
        t_max = std::max(t_max, t);
    }
    const double cut = 0.5 * (t_min + t_max);
    std::vector<double> xs, ys, ts;
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
        if (curve.t[i] < cut) continue;
        if (!(curve.value[i] > 0.0))
            throw DomainError("fit_stretched_exponential: nonpositive curve value");
        ts.push_back(curve.t[i]);
        xs.push_back(std::pow(curve.t[i], gamma));
        ys.push_back(std::log(curve.value[i]));
    }
    if (xs.size() < 2)
        throw DomainError("fit_stretched_exponential: too few points in the upper half-window");
    LinearFit lf = linear_fit(xs, ys);
    FitReport rep;
    rep.gamma = gamma;
    rep.c_hat = -lf.slope;
    rep.intercept = lf.intercept;
    rep.r2 = lf.r2;
    rep.t_lo = ts.front();
    rep.t_hi = ts.back();
    rep.fit_x = xs;
    for (std::size_t i = 0; i < xs.size(); ++i)
        rep.residual.push_back(ys[i] - (lf.intercept + lf.slope * xs[i]));
    rep.slope = lf.slope;
    rep.slope_ci = 2.0 * lf.slope_se;
    return rep;
}

FitReport lifschitz_slope(const std::vector<double>& lambda, const std::vector<double>& l_values,
                          double alpha) {
    if (lambda.size() != l_values.size())
        throw DomainError("lifschitz_slope: mismatched tables");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] > 0.0) || !(l_values[i] > 0.0) || !(l_values[i] < 1.0)) continue;
        xs.push_back(std::log(lambda[i]));
        ys.push_back(std::log(-std::log(l_values[i])));
    }
    if (xs.size() < 2) throw DomainError("lifschitz_slope: empty usable IDS range");
    LinearFit lf = linear_fit(xs, ys);
    const double target = -constants(alpha).d_s / alpha;
    FitReport rep;
    rep.gamma = -target;  // reference exponent d_s/alpha
    rep.r2 = lf.r2;
    rep.intercept = lf.intercept;
    rep.t_lo = std::exp(xs.front());
    rep.t_hi = std::exp(xs.back());
    rep.fit_x = xs;
    for (std::size_t i = 0; i < xs.size(); ++i)
        rep.residual.push_back(ys[i] - (lf.intercept + lf.slope * xs[i]));
    rep.slope = lf.slope;
    rep.slope_ci = 2.0 * lf.slope_se;
    // Slopes near zero are the polynomial (obstacle-free) shape; require at
    // least half the Lifschitz exponent to call the tail stretched.
    rep.stretched = lf.slope <= 0.5 * target;
    return rep;
}

double brownian_principal(int depth) {
    LevelGraph g = build_graph(0, depth);
    SymmetricOperator lap = laplacian(g);
    return spectrum(dirichlet_restrict(lap, g.interior_vertices()), 1).front();
}

double lambda_bm_estimate(int depth) {
    if (depth < 2) throw DomainError("lambda_bm_estimate: need depth >= 2");
    const double fine = brownian_principal(depth);
    const double coarse = brownian_principal(depth - 1);
    // First-order Richardson extrapolation in 5^{-m}.
    return fine + (fine - coarse) / 4.0;
}

namespace {

double point_segment_dist(std::pair<double, double> p, std::pair<double, double> a,
                          std::pair<double, double> b) {
    const double vx = b.first - a.first, vy = b.second - a.second;
    const double wx = p.first - a.first, wy = p.second - a.second;
    const double vv = vx * vx + vy * vy;
    double s = vv == 0.0 ? 0.0 : std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0);
    const double dx = wx - s * vx, dy = wy - s * vy;
    return std::hypot(dx, dy);
}

// Distance from p to the closed upward triangle with the given corners.
double point_triangle_dist(std::pair<double, double> p,
                           const std::array<std::pair<double, double>, 3>& c) {
    // Inside test via cross products (corners are counter-clockwise).
    bool inside = true;
    for (int i = 0; i < 3; ++i) {
        auto a = c[static_cast<std::size_t>(i)];
        auto b = c[static_cast<std::size_t>((i + 1) % 3)];
        double cross = (b.first - a.first) * (p.second - a.second) -
                       (b.second - a.second) * (p.first - a.first);
        if (cross < 0.0) {
            inside = false;
            break;
        }
    }
    if (inside) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        d = std::min(d, point_segment_dist(p, c[static_cast<std::size_t>(i)],
                                           c[static_cast<std::size_t>((i + 1) % 3)]));
    return d;
}

}  // namespace

double fit_volume_constant(int depth, double a_min, double a_max, int n_radii) {
    if (!(a_min > 0.0 && a_max >= a_min) || n_radii < 1)
        throw DomainError("fit_volume_constant: bad radius grid");
    if (a_min < 2.0 * std::ldexp(1.0, -depth))
        throw DomainError("fit_volume_constant: radii below cell resolution");
    const double d_f = constants(1.0).d_f;
    const double cell_mass = cell_measure(depth, 0);
    auto anchors = enumerate_cells(0, depth);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(anchors.size());
    for (const auto& cell : anchors) pts.push_back(cell.point());

    // Triangles T: the unit gasket itself and its three depth-1 cells.
    std::vector<std::array<std::pair<double, double>, 3>> tris;
    std::vector<double> mu_t;
    for (int k : {0, 1}) {
        const double side = std::ldexp(1.0, -k);
        for (const auto& cell : enumerate_cells(0, k)) {
            auto [ax, ay] = cell.point();
            tris.push_back({{{ax, ay},
                             {ax + side, ay},
                             {ax + 0.5 * side, ay + 0.5 * std::sqrt(3.0) * side}}});
            mu_t.push_back(cell_measure(k, 0));
        }
    }

    double c_max = 0.0;
    for (int j = 0; j < n_radii; ++j) {
        const double a =
            n_radii == 1 ? a_min
                         : a_min * std::pow(a_max / a_min,
                                            static_cast<double>(j) /
                                                static_cast<double>(n_radii - 1));
        for (std::size_t ti = 0; ti < tris.size(); ++ti) {
            double vol = 0.0;
            for (const auto& p : pts)
                if (point_triangle_dist(p, tris[ti]) <= a) vol += cell_mass;
            c_max = std::max(c_max, (vol - mu_t[ti]) / std::pow(a, d_f));
        }
    }
    return c_max;
}

CertificateReport lower_bound_certificate(const LaplaceCurve& curve, double lambda_bm, double nu,
                                          double a, double alpha, double c_vol) {
    if (!(lambda_bm > 0.0)) throw DomainError("lower_bound_certificate: need lambda_bm > 0");
    if (!(nu > 0.0)) throw DomainError("lower_bound_certificate: need nu > 0");
    const FractalConstants fc = constants(alpha);
    const double gamma = fc.d_f / fc.d_alpha;
    const double nu_exp = 0.5 * alpha * fc.d_w / fc.d_alpha;

    CertificateReport rep;
    rep.c1 = std::pow(5.0, 0.5 * alpha) * std::pow(lambda_bm, 0.5 * alpha) + 1.0;
    rep.lambda_bm = lambda_bm;
    rep.nu = nu;
    rep.radius = a;
    rep.alpha = alpha;
    rep.c_vol = c_vol;
    for (std::size_t i = 0; i < curve.t.size(); ++i) {
        const double t = curve.t[i];
        if (m0_scale(t, nu, alpha) < 1) continue;
        const double bound = std::exp(-rep.c1 * std::pow(t, gamma) * std::pow(nu, nu_exp)) *
                             std::exp(-nu * c_vol * std::pow(a, fc.d_f)) *
                             std::pow(nu / t, gamma);
        rep.t.push_back(t);
        rep.value.push_back(curve.value[i]);
        rep.bound.push_back(bound);
        rep.margin.push_back(curve.value[i] - bound);
        if (curve.value[i] < bound) rep.all_nonnegative = false;
    }
    return rep;
}

}  // namespace gasket
