#include "doctest.h"
#include "hyplab/bessel.hpp"

#include <cmath>
#include <initializer_list>

using namespace hyplab;

TEST_CASE("half-integer order reduces to elementary functions") {
    // J_{1/2}(x) = sqrt(2/(pi x)) sin x, so its first zero is exactly pi
    for (double x : {0.3, 1.0, 2.2, 3.0}) {
        const double closed = std::sqrt(2.0 / (M_PI * x)) * std::sin(x);
        CHECK(bessel_j(0.5, x) == doctest::Approx(closed).epsilon(1e-13));
    }
    CHECK(bessel_first_zero(0.5) == doctest::Approx(M_PI).epsilon(1e-12));

    // J_{3/2}(x) = sqrt(2/(pi x)) (sin x / x - cos x)
    for (double x : {0.7, 1.9, 3.5}) {
        const double closed = std::sqrt(2.0 / (M_PI * x)) * (std::sin(x) / x - std::cos(x));
        CHECK(bessel_j(1.5, x) == doctest::Approx(closed).epsilon(1e-12));
    }
}

TEST_CASE("first zeros match reference constants") {
    // Abramowitz & Stegun table values
    CHECK(bessel_first_zero(0.0) == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(bessel_first_zero(1.0) == doctest::Approx(3.831705970207512).epsilon(1e-12));
    CHECK(bessel_j(0.0, bessel_first_zero(0.0)) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("series satisfies the defining recurrence") {
    // 2 nu / x J_nu = J_{nu-1} + J_{nu+1}
    for (double nu : {1.0, 1.5, 2.0}) {
        for (double x : {0.8, 1.7, 2.9}) {
            const double lhs = 2.0 * nu / x * bessel_j(nu, x);
            const double rhs = bessel_j(nu - 1.0, x) + bessel_j(nu + 1.0, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}
