#pragma once

namespace hyplab {

// Bessel function of the first kind J_nu by the ascending series; accurate
// for the small arguments used here (x up to ~10).
double bessel_j(double nu, double x);

// First positive zero j_{nu,1} by bisection on the series.
double bessel_first_zero(double nu);

}  // namespace hyplab
