#pragma once

#include <vector>

#include "hyplab/parallel.hpp"

// Rayleigh-quotient laboratory in the exact hyperbolic normal form
// g = d rho^2 / rho^2-style collar coordinates: rho = 2 e^{-d(0,.)} in (0, 2],
// dv = rho^{-n-1} (1 - rho^2/4)^n dv_{S^n} drho, |grad rho|_{g} = rho.
// Test functions rho^s * phi_{eps,delta}(rho) reproduce the closed bound F(s).
namespace hyplab {

struct CutoffParams {
    double eps;
    double delta;
    double rho0 = 1.0;

    CutoffParams(double e, double d, double r0 = 1.0);
    double lower_breakpoint() const { return eps * delta / (1.0 + delta); }
};

struct RayleighParams {
    int n;
    double p;
    double s;

    RayleighParams(int n_, double p_, double s_);
    double s_lower() const { return (n - p) / p; }
    double s_upper() const { return n / p; }
};

struct QuadratureSpec {
    int nodes = 64;          // panel order of the fine estimate; >= 64 required
    double rel_tol = 1e-13;  // panel acceptance threshold relative to scale
};

struct RayleighReport {
    double numerator = 0.0;
    double denominator = 0.0;
    double quotient = 0.0;
    double quadrature_error_estimate = 0.0;
    bool converged = true;  // error estimate <= 1e-6 * value
};

struct IteratedLimitReport {
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<double> delta_limits;  // inner limits per eps_i, i = 2..8
};

// 1 for rho >= eps, 0 below eps*delta/(1+delta), affine slope (1+delta)/eps between.
double cutoff_phi(double rho, const CutoffParams& c);

// (1 - rho^2/4)^n on the collar (0, 1].
double normal_form_density(double rho, int n);

// Vol(S^n) = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
double sphere_volume(int n);

RayleighReport rayleigh_q(const RayleighParams& rp, const CutoffParams& cp,
                          const QuadratureSpec& quad = {});

// Inner extrapolation delta -> 0 at fixed eps over delta_j = 2^{-j}, j in
// [jmin, jmax]; generalized Richardson with the ladder {i*beta + j},
// beta = p(1+s) - n (the collar correction exponents).
double delta_limit(const RayleighParams& rp, double eps, int jmin = 4, int jmax = 12);

// Double limit: delta -> 0 inner (j = 4..12), then eps -> 0 over
// eps_i = 2^{-i}, i = 2..8 with the ladder {i*alpha + 2j}, alpha = n - ps.
IteratedLimitReport iterated_limit(const RayleighParams& rp,
                                   ExecMode mode = ExecMode::parallel);

// F(s) = s^p (s+1-n/p) + (1+s)^p (n/p - s) on the closed s-interval.
double closed_form_F(int n, double p, double s);

// (n kappa / p)^p
double sharp_upper_bound(int n, double p, double kappa = 1.0);

}  // namespace hyplab
