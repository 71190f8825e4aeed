#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hyplab {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre rule of given order (nodes by Newton iteration on P_n).
const GaussRule& gauss_legendre(int order);

// Fixed-order panel integral of f over [a, b].
double gl_panel(const std::function<double(double)>& f, double a, double b, int order = 32);

// Adaptive Gauss-Legendre: bisect panels until the 16 vs 32 point estimates
// agree to rel_tol (relative to the running total scale). Integrands here are
// smooth away from panel endpoints, so this converges quickly.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13, int max_depth = 48);

}  // namespace hyplab
