#pragma once

#include <utility>
#include <vector>

#include "hyplab/parallel.hpp"

// First p-Dirichlet eigenvalues of geodesic balls in H^{n+1}(-kappa^2) by
// Rayleigh-quotient minimization over P1 mesh functions of the radial profile:
//   minimize  int_0^R |f'|^p w dt / int_0^R |f|^p w dt,  w = (sinh(kappa t)/kappa)^n,
// with f(R) = 0 and the regularity condition f'(0) = 0 imposed by constraining
// the first two nodes to coincide (flat first element).
namespace hyplab {

struct RadialProblem {
    int n;
    double p;
    double kappa;
    double R;
    int mesh;

    RadialProblem(int n_, double p_, double kappa_, double R_, int mesh_);
};

struct EigenResult {
    double lambda = 0.0;
    double residual = 0.0;   // discrete Euler-Lagrange defect (sup norm)
    int iterations = 0;
    std::vector<double> eigenfunction;  // values at nodes t_i = i R/mesh, i = 0..mesh
};

// Discrete quotient at a given nodal profile (f[mesh] forced to zero, f[0]
// snapped to f[1]); used for oracles and post-solve consistency checks.
double discrete_quotient(const RadialProblem& prob, const std::vector<double>& profile);

// Upper bound from the interpolated Euclidean Bessel mode
// f(t) = t^{-(n-1)/2} J_{(n-1)/2}(j_{(n-1)/2,1} t / R).
double bessel_profile_quotient(const RadialProblem& prob);

EigenResult ball_first_eigenvalue(const RadialProblem& prob);

std::vector<EigenResult> monotonicity_scan(int n, double p, double kappa,
                                           const std::vector<double>& radii, int mesh,
                                           ExecMode mode = ExecMode::parallel);

struct ScalingReport {
    double lambda_kappa = 0.0;  // lambda(n, p, kappa, R)
    double lambda_unit = 0.0;   // lambda(n, p, 1, kappa R)
    double kappa_power = 0.0;   // kappa^p
    double rel_error = 0.0;     // |lambda_kappa - kappa^p lambda_unit| / value
};

ScalingReport scaling_check(const RadialProblem& prob);

struct SandwichReport {
    double mckean = 0.0;        // (n/p)^p at kappa = 1
    double extrapolated = 0.0;  // large-R limit from the 1/R^2 fit
    double sharp = 0.0;         // (n/p)^p
    double max_gap = 0.0;
    bool agrees = false;        // all three within 5e-2
    std::vector<std::pair<double, double>> samples;  // (R, lambda(R))
};

SandwichReport sandwich_report(int n, double p, int mesh = 600,
                               ExecMode mode = ExecMode::parallel);

}  // namespace hyplab
