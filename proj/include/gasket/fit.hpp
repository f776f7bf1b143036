#pragma once

#include <vector>

#include "gasket/spectral.hpp"

namespace gasket {

// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_se = 0.0;  // standard error of the slope
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct FitReport {
    double gamma = 0.0;      // exponent used
    double c_hat = 0.0;      // fitted constant
    double intercept = 0.0;
    double r2 = 0.0;
    double t_lo = 0.0, t_hi = 0.0;        // fitted window
    std::vector<double> fit_x;            // abscissae used
    std::vector<double> residual;         // per-point residuals of the linear fit
    double slope = 0.0, slope_ci = 0.0;   // Lifschitz-slope fields (ci = 2 se)
    bool stretched = true;  // slope consistent with stretched-exponential decay
};

// M0 = floor(log2(t/nu) / d_alpha); the unique integer with
// 2^M0 <= (t/nu)^{1/d_alpha} < 2^{M0+1}.
int m0_scale(double t, double nu, double alpha);

// gamma / (1 - gamma); maps d_f/d_alpha to d_s/alpha exactly.
double tauberian_convert(double gamma);

// Least-squares fit of log(value) = intercept - c_hat * t^gamma over the upper
// half of the curve's time range (large-time asymptotics only).
FitReport fit_stretched_exponential(const LaplaceCurve& curve, double gamma);

// Fits log(-log l) against log lambda on the given table; slope near
// -d_s/alpha indicates the stretched-exponential (Lifschitz) tail, slope near
// 0 the polynomial free tail. Points with l outside (0,1) are rejected.
FitReport lifschitz_slope(const std::vector<double>& lambda, const std::vector<double>& l_values,
                          double alpha);

// Dirichlet Brownian principal eigenvalue of G^(0) at one depth, and its
// Richardson extrapolation in 5^{-m} from depths m-1 and m.
double brownian_principal(int depth);
double lambda_bm_estimate(int depth);

// Empirical constant c in mu(T^a) <= mu(T) + c a^{d_f}: max over the unit
// gasket's depth <= 1 cells and a geometric grid of radii of
// (mu(T^a) - mu(T)) / a^{d_f}, measured by depth-`depth` cell counting.
double fit_volume_constant(int depth, double a_min, double a_max, int n_radii);

// Pointwise check of the explicit annealed lower bound
//   L(t) >= exp(-C1 t^{d_f/d_alpha} nu^{(alpha/2) d_w/d_alpha})
//           * exp(-nu c_vol a^{d_f}) * (nu/t)^{d_f/d_alpha},
// with C1 = 5^{alpha/2} lambda_bm^{alpha/2} + 1, at every grid time whose
// confinement scale M0(t) is at least 1.
struct CertificateReport {
    double c1 = 0.0;
    std::vector<double> t;       // qualifying grid times only
    std::vector<double> value;   // curve values there
    std::vector<double> bound;   // certified lower bounds
    std::vector<double> margin;  // value - bound
    bool all_nonnegative = true;
    double lambda_bm = 0.0, nu = 0.0, radius = 0.0, alpha = 1.0, c_vol = 0.0;
};

CertificateReport lower_bound_certificate(const LaplaceCurve& curve, double lambda_bm, double nu,
                                          double a, double alpha, double c_vol);

}  // namespace gasket
