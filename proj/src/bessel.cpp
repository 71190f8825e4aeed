#include "hyplab/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace hyplab {

double bessel_j(double nu, double x) {
    // J_nu(x) = sum_m (-1)^m / (m! Gamma(m+nu+1)) (x/2)^{2m+nu}
    const double h = 0.5 * x;
    double term = std::pow(h, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= -h * h / (m * (m + nu));
        sum += term;
        if (std::fabs(term) < 1e-17 * (std::fabs(sum) + 1e-300)) break;
    }
    return sum;
}

double bessel_first_zero(double nu) {
    if (nu < 0.0) throw std::invalid_argument("bessel_first_zero: nu >= 0 required");
    // j_{nu,1} lies in (nu + 1.8, nu + 3.4) for the orders used here (nu <= 5).
    double lo = nu + 1.8, hi = nu + 3.4;
    if (bessel_j(nu, lo) <= 0.0 || bessel_j(nu, hi) >= 0.0)
        throw std::runtime_error("bessel_first_zero: bracket failed");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bessel_j(nu, mid) > 0.0 ? lo : hi) = mid;
        if (hi - lo < 1e-14) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace hyplab
