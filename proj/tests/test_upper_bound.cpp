#include "doctest.h"
#include "hyplab/upper_bound.hpp"

#include <cmath>
#include <stdexcept>

using namespace hyplab;

TEST_CASE("cutoff profile has the stated breakpoints and slope") {
    const CutoffParams c(0.25, 0.125);
    const double lo = c.lower_breakpoint();
    CHECK(lo == doctest::Approx(0.25 * 0.125 / 1.125));
    CHECK(cutoff_phi(0.25, c) == 1.0);
    CHECK(cutoff_phi(0.9, c) == 1.0);
    CHECK(cutoff_phi(lo, c) == doctest::Approx(0.0));
    CHECK(cutoff_phi(lo * 0.5, c) == 0.0);
    // midpoint of the ramp
    const double mid = 0.5 * (lo + 0.25);
    CHECK(cutoff_phi(mid, c) == doctest::Approx((1.0 + 0.125) / 0.25 * (mid - lo)).epsilon(1e-13));
    CHECK_THROWS_AS(CutoffParams(0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(CutoffParams(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("collar density and sphere volumes") {
    CHECK(normal_form_density(1.0, 3) == doctest::Approx(std::pow(0.75, 3)).epsilon(1e-15));
    CHECK(normal_form_density(0.5, 2) == doctest::Approx(std::pow(1.0 - 0.0625, 2)).epsilon(1e-15));
    CHECK_THROWS_AS(normal_form_density(0.0, 2), std::domain_error);
    CHECK(sphere_volume(1) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_volume(2) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
    CHECK(sphere_volume(3) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("closed-form bound equals the flat-space constant at the endpoints") {
    struct Case { int n; double p; };
    for (const Case c : {Case{2, 2.0}, Case{3, 2.0}, Case{3, 1.5}, Case{4, 3.0}}) {
        const double target = std::pow(double(c.n) / c.p, c.p);
        const double lo = (c.n - c.p) / c.p;
        const double hi = double(c.n) / c.p;
        CHECK(closed_form_F(c.n, c.p, lo) == doctest::Approx(target).epsilon(1e-12));
        CHECK(closed_form_F(c.n, c.p, hi) == doctest::Approx(target).epsilon(1e-12));
        // interior values sit above the endpoint constant
        for (int i = 1; i < 20; ++i) {
            const double s = lo + i * (hi - lo) / 20.0;
            CHECK(closed_form_F(c.n, c.p, s) >= target - 1e-12);
        }
        CHECK_THROWS_AS(closed_form_F(c.n, c.p, lo - 0.01), std::domain_error);
        CHECK_THROWS_AS(closed_form_F(c.n, c.p, hi + 0.01), std::domain_error);
    }
    CHECK(sharp_upper_bound(2, 2.0) == doctest::Approx(1.0));
    CHECK(sharp_upper_bound(3, 2.0) == doctest::Approx(2.25));
    CHECK(sharp_upper_bound(2, 2.0, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("frozen values of the closed-form bound at reference arguments") {
    // hand-expanded: F(s) = s^p (s+1-n/p) + (1+s)^p (n/p-s)
    // n=2, p=2, s=3/4: (9/16)(3/4) + (49/16)(1/4) = 27/64 + 49/64 = 76/64
    CHECK(closed_form_F(2, 2.0, 0.75) == doctest::Approx(1.1875).epsilon(1e-15));
    // n=3, p=2, s=1: 1*(1/2) + 4*(1/2) = 5/2
    CHECK(closed_form_F(3, 2.0, 1.0) == doctest::Approx(2.5).epsilon(1e-15));
    // n=2, p=2, s=1/2: (1/4)(1/2) + (9/4)(1/2) = 1.25
    CHECK(closed_form_F(2, 2.0, 0.5) == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("rayleigh quotient converges and is consistent with its parts") {
    const RayleighParams rp(2, 2.0, 0.75);
    const CutoffParams cp(std::pow(2.0, -4), std::pow(2.0, -8));
    const RayleighReport rep = rayleigh_q(rp, cp);
    CHECK(rep.converged);
    CHECK(rep.numerator > 0.0);
    CHECK(rep.denominator > 0.0);
    CHECK(rep.quotient == doctest::Approx(rep.numerator / rep.denominator).epsilon(1e-15));
    // a fixed cutoff cannot beat the extrapolated limit by much
    CHECK(rep.quotient > 1.0);
    CHECK(rep.quotient < 2.0);

    QuadratureSpec bad;
    bad.nodes = 32;
    CHECK_THROWS_AS(rayleigh_q(rp, cp, bad), std::invalid_argument);
    CHECK_THROWS_AS(RayleighParams(2, 2.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(RayleighParams(2, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("inner limit stabilizes across eps and the double limit hits the bound") {
    // the inner limits still carry O(eps^(n-ps)) cutoff mass, so they only
    // approach each other as eps shrinks; the double limit removes the rest
    const RayleighParams rp(2, 2.0, 0.75);
    const double d1 = delta_limit(rp, std::pow(2.0, -4));
    const double d2 = delta_limit(rp, std::pow(2.0, -6));
    CHECK(std::abs(d1 - 1.1875) < 0.5);
    CHECK(std::abs(d2 - 1.1875) < std::abs(d1 - 1.1875));

    const IteratedLimitReport rep = iterated_limit(rp, ExecMode::serial);
    CHECK(rep.delta_limits.size() >= 5);
    CHECK(rep.value == doctest::Approx(1.1875).epsilon(2e-3));
    CHECK(rep.error_estimate < 1e-2);
}

TEST_CASE("iterated limit tracks the closed form at other parameters") {
    const RayleighParams rp(3, 2.0, 1.0);
    const IteratedLimitReport rep = iterated_limit(rp);
    CHECK(rep.value == doctest::Approx(closed_form_F(3, 2.0, 1.0)).epsilon(5e-3));
}

TEST_CASE("serial and parallel evaluation produce identical digits") {
    const RayleighParams rp(2, 2.0, 0.6);
    const IteratedLimitReport a = iterated_limit(rp, ExecMode::serial);
    const IteratedLimitReport b = iterated_limit(rp, ExecMode::parallel);
    CHECK(a.value == b.value);
    REQUIRE(a.delta_limits.size() == b.delta_limits.size());
    for (std::size_t i = 0; i < a.delta_limits.size(); ++i)
        CHECK(a.delta_limits[i] == b.delta_limits[i]);
}
