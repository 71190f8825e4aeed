#include "doctest.h"
#include "hyplab/ball.hpp"
#include "hyplab/submanifold.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hyplab;

namespace {

// graph over a 2-chart with genuinely anisotropic curvature (nonzero
// traceless second fundamental form), for the non-umbilic identity tests
Immersion curved_graph() {
    return jet_immersion(2, 3, [](const std::vector<Jet>& x) {
        const Jet q = 0.1 * x[0] * x[0] - 0.07 * x[1] * x[1] + 0.05 * x[0] * x[1] + 0.1;
        return std::vector<Jet>{x[0], x[1], q};
    });
}

double traceless_norm_sq(const SubmanifoldSample& s) {
    double acc = 0.0;
    for (const Mat& t : s.traceless_B) {
        const Mat m = matmul(s.h_inv, t);
        const Mat mm = matmul(m, m);
        for (std::size_t i = 0; i < mm.rows; ++i) acc += mm(i, i);
    }
    return acc;
}

}  // namespace

TEST_CASE("totally geodesic slices carry vanishing second fundamental form") {
    const CatalogEntry e = make_catalog_entry(CatalogKind::totally_geodesic, 2, 4);
    for (const Vec& x : {Vec{0.0, 0.0}, Vec{0.3, -0.2}, Vec{0.55, 0.4}}) {
        const SubmanifoldSample s = sample_geometry(e.immersion, x);
        CHECK(s.codim == 2);
        for (const Mat& b : s.B)
            for (double v : b.a) CHECK(std::abs(v) <= 1e-13);
        CHECK(s.mean_curvature_norm <= 1e-13);
        // induced metric is the chart-ball hyperbolic metric
        double n2 = 0.0;
        for (double c : x) n2 += c * c;
        const double l = 2.0 / (1.0 - n2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                CHECK(s.h(i, j) == doctest::Approx(i == j ? l * l : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("normal frames are orthonormal in the ambient metric") {
    const CatalogEntry e = make_catalog_entry(CatalogKind::equidistant, 2, 3, 0.35);
    const SubmanifoldSample s = sample_geometry(e.immersion, Vec{0.25, -0.3});
    const double l = conformal_factor(s.point);
    REQUIRE(s.normal_frame.cols == 1);
    double g_nn = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        g_nn += l * l * s.normal_frame(i, 0) * s.normal_frame(i, 0);
    CHECK(g_nn == doctest::Approx(1.0).epsilon(1e-12));
    // normals are orthogonal to every tangent column
    for (std::size_t a = 0; a < 2; ++a) {
        double g_tn = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            g_tn += l * l * s.normal_frame(i, 0) * s.tangent_frame(i, a);
        CHECK(g_tn == doctest::Approx(0.0).epsilon(1e-12));
    }
    // mean curvature is the metric trace of B
    double tr = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) tr += s.h_inv(a, b) * s.B[0](a, b);
    CHECK(s.H[0] == doctest::Approx(tr).epsilon(1e-13));
}

TEST_CASE("catalog mean curvatures match their closed forms") {
    const double t = 0.3;
    const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, t);
    CHECK(eq.expected_mean_curvature == doctest::Approx(2.0 * std::tanh(t)));
    for (const Vec& x : {Vec{0.0, 0.0}, Vec{0.4, 0.1}, Vec{-0.2, 0.5}}) {
        const SubmanifoldSample s = sample_geometry(eq.immersion, x);
        CHECK(s.mean_curvature_norm == doctest::Approx(2.0 * std::tanh(t)).epsilon(1e-10));
    }
    const CatalogEntry ho = make_catalog_entry(CatalogKind::horosphere, 2, 3);
    for (const Vec& x : {Vec{0.0, 0.0}, Vec{1.5, -0.7}, Vec{4.0, 2.0}}) {
        const SubmanifoldSample s = sample_geometry(ho.immersion, x);
        CHECK(s.mean_curvature_norm == doctest::Approx(2.0).epsilon(1e-10));
    }
}

TEST_CASE("finite-difference immersions reproduce the jet geometry") {
    const double t = 0.4;
    const double ch = std::cosh(t), sh = std::sinh(t);
    Immersion fd = fd_immersion(2, 3, [ch, sh](const Vec& x) {
        const double n2 = x[0] * x[0] + x[1] * x[1];
        const double den = (1.0 - n2) + ch * (1.0 + n2);
        return Vec{2.0 * ch * x[0] / den, 2.0 * ch * x[1] / den, sh * (1.0 - n2) / den};
    }, 1e-5);
    const SubmanifoldSample s = sample_geometry(fd, Vec{0.2, 0.3});
    CHECK(s.mean_curvature_norm == doctest::Approx(2.0 * std::tanh(t)).epsilon(1e-6));
}

TEST_CASE("degenerate charts are rejected") {
    Immersion bad = jet_immersion(2, 3, [](const std::vector<Jet>& x) {
        return std::vector<Jet>{x[0], x[0], Jet::constant(0.0, 2)};
    });
    CHECK_THROWS_AS(sample_geometry(bad, Vec{0.1, 0.1}), std::runtime_error);
}

TEST_CASE("second fundamental form obeys the conformal change law") {
    const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, 0.3);
    for (const Vec& x : {Vec{0.2, 0.1}, Vec{-0.4, 0.3}, Vec{0.6, 0.0}}) {
        const SubmanifoldSample s = sample_geometry(eq.immersion, x);
        for (auto kind :
             {DefiningFunctionKind::r1, DefiningFunctionKind::r2, DefiningFunctionKind::rho})
            CHECK(conformal_2ff_residual(s, kind) <= 1e-10);
    }
    // non-umbilic graph: the law holds with a genuinely anisotropic B
    const SubmanifoldSample g = sample_geometry(curved_graph(), Vec{0.15, -0.2});
    CHECK(traceless_norm_sq(g) > 1e-4);
    CHECK(conformal_2ff_residual(g, DefiningFunctionKind::r2) <= 1e-10);
}

TEST_CASE("the change law is insensitive to the normal orientation") {
    SubmanifoldSample s = sample_geometry(curved_graph(), Vec{0.15, -0.2});
    const double before = conformal_2ff_residual(s, DefiningFunctionKind::r2);
    // flip the normal together with its form components
    for (std::size_t i = 0; i < s.normal_frame.rows; ++i) s.normal_frame(i, 0) *= -1.0;
    for (double& v : s.B[0].a) v *= -1.0;
    for (double& v : s.traceless_B[0].a) v *= -1.0;
    s.H[0] *= -1.0;
    const double after = conformal_2ff_residual(s, DefiningFunctionKind::r2);
    CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("traceless density identity holds at and above the critical power") {
    const SubmanifoldSample g = sample_geometry(curved_graph(), Vec{0.25, 0.1});
    for (auto kind : {DefiningFunctionKind::r2, DefiningFunctionKind::rho}) {
        CHECK(traceless_conformal_identity(g, kind, 2.0) <= 1e-10);
        CHECK(traceless_conformal_identity(g, kind, 4.0) <= 1e-10);
    }
    CHECK_THROWS_AS(traceless_conformal_identity(g, DefiningFunctionKind::r2, 1.0),
                    std::invalid_argument);
    // umbilic catalog entries make the identity 0 = 0; the graph does not
    const SubmanifoldSample tg =
        sample_geometry(make_catalog_entry(CatalogKind::totally_geodesic, 2, 3).immersion,
                        Vec{0.3, 0.2});
    CHECK(traceless_norm_sq(tg) <= 1e-20);
}

TEST_CASE("boundary angles of equidistants extrapolate to the offset slope") {
    const double t = 0.4;
    const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, t);
    const std::vector<Vec> path = catalog_boundary_path(eq, Vec{1.0, 0.5});
    REQUIRE(path.size() >= 4);
    const BoundaryAngleReport rep = boundary_angles(eq.immersion, path, DefiningFunctionKind::r2);
    REQUIRE(rep.cos_theta_limit.size() == 1);
    CHECK(rep.cos_theta_limit[0] == doctest::Approx(std::tanh(t)).epsilon(1e-6));
    CHECK(rep.mean_match <= 1e-6);
    CHECK(rep.projection_match <= 1e-6);
    CHECK(rep.p_norm_sq_limit == doctest::Approx(std::tanh(t) * std::tanh(t)).epsilon(1e-5));
    CHECK(rep.nonoblique_angle == doctest::Approx(std::acos(std::tanh(t))).epsilon(1e-5));
    // cosines are sign-adapted pointwise
    for (const Vec& c : rep.cos_theta) CHECK(c[0] >= -1e-12);
}

TEST_CASE("totally geodesic and horospherical boundary behavior") {
    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 3);
    const BoundaryAngleReport rtg = boundary_angles(
        tg.immersion, catalog_boundary_path(tg, Vec{0.6, -1.0}), DefiningFunctionKind::r2);
    CHECK(std::abs(rtg.cos_theta_limit[0]) <= 1e-8);
    CHECK(std::abs(rtg.p_norm_sq_limit) <= 1e-8);
    CHECK(rtg.nonoblique_angle == doctest::Approx(M_PI / 2).epsilon(1e-6));

    const CatalogEntry ho = make_catalog_entry(CatalogKind::horosphere, 2, 3);
    const BoundaryAngleReport rho = boundary_angles(
        ho.immersion, catalog_boundary_path(ho, Vec{1.0, 0.0}), DefiningFunctionKind::r2);
    CHECK(rho.p_norm_sq_limit == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(rho.cos_theta_limit[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rho.mean_match <= 1e-6);

    CHECK_THROWS_AS(boundary_angles(tg.immersion, {Vec{0.1, 0.1}}, DefiningFunctionKind::r2),
                    std::invalid_argument);
}

TEST_CASE("asymptotic sectional curvature interpolates between -1 and 0") {
    const Vec W{1.0, 0.0}, Z{0.0, 1.0};

    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 3);
    const SectionalReport rtg =
        asymptotic_sectional(tg.immersion, catalog_boundary_path(tg, Vec{0.5, 0.8}), W, Z);
    for (double v : rtg.values) CHECK(v == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(rtg.limit == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(rtg.gap <= 1e-6);

    const double t = 0.3;
    const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, t);
    const SectionalReport req =
        asymptotic_sectional(eq.immersion, catalog_boundary_path(eq, Vec{1.0, 0.3}), W, Z);
    const double sech = 1.0 / std::cosh(t);
    CHECK(req.limit == doctest::Approx(-sech * sech).epsilon(1e-8));
    CHECK(req.gap <= 1e-6);

    const CatalogEntry ho = make_catalog_entry(CatalogKind::horosphere, 2, 3);
    const SectionalReport rho =
        asymptotic_sectional(ho.immersion, catalog_boundary_path(ho, Vec{1.0, 1.0}), W, Z);
    for (double v : rho.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(rho.limit == doctest::Approx(0.0).epsilon(1e-8));

    CHECK_THROWS_AS(
        asymptotic_sectional(tg.immersion, catalog_boundary_path(tg, Vec{0.5, 0.8}), W, 2.0 * W),
        std::invalid_argument);
}

TEST_CASE("restricted eigenfunction on a geodesic slice obeys the product rule") {
    // Y = span of the first two coordinates in the 4-ball; base off the slice
    // at height b, so cosh d(base, y(x)) = cosh(2 atanh b) cosh(2 atanh |x|).
    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 4);
    const double b = 0.4;
    const LeeEigenfunction u{BallPoint(Vec{0.0, 0.0, b, 0.0})};
    const double c0 = (1.0 + b * b) / (1.0 - b * b);

    const std::vector<Vec> samples{Vec{0.0, 0.0}, Vec{0.3, -0.1}, Vec{-0.25, 0.45}, Vec{0.5, 0.2}};
    for (const Vec& x : samples) {
        const double r2 = x[0] * x[0] + x[1] * x[1];
        const double expected = c0 * (1.0 + r2) / (1.0 - r2);
        const SubmanifoldSample s = sample_geometry(tg.immersion, x);
        CHECK(u.value(s.point) == doctest::Approx(expected).epsilon(1e-13));
    }

    const RestrictedLeeReport rep =
        restricted_lee(tg.immersion, u, hyperbolic_exact_field(u), samples);
    CHECK(rep.beta <= 1e-12);
    CHECK(rep.max_discrepancy <= 1e-4);
    REQUIRE(rep.restricted.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r2 = samples[i][0] * samples[i][0] + samples[i][1] * samples[i][1];
        const double expected = 2.0 * c0 * (1.0 + r2) / (1.0 - r2);
        CHECK(rep.restricted[i] == doctest::Approx(expected).epsilon(1e-10));
        CHECK(rep.intrinsic[i] == doctest::Approx(expected).epsilon(1e-4));
    }
}

TEST_CASE("synthetic ambient fields contribute exactly their normal trace") {
    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 4);
    const LeeEigenfunction u{BallPoint(Vec{0.0, 0.0, 0.4, 0.0})};
    const std::vector<Vec> samples{Vec{0.1, 0.2}, Vec{-0.3, 0.3}};
    const RestrictedLeeReport rep =
        restricted_lee(tg.immersion, u, synthetic_normal_multiple(0.37), samples);
    CHECK(rep.beta == doctest::Approx(0.37 * 2.0).epsilon(1e-12));
}

TEST_CASE("restricted eigenfunction rejects a sample at the base point") {
    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 4);
    const LeeEigenfunction u{BallPoint(Vec{0.3, 0.1, 0.0, 0.0})};
    CHECK_THROWS_AS(
        restricted_lee(tg.immersion, u, hyperbolic_exact_field(u), {Vec{0.3, 0.1}}),
        std::runtime_error);
}

TEST_CASE("barta quotients of geodesic slices stay above the certificate floor") {
    for (int k : {1, 2, 3}) {
        const int dim = k + 1;
        const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, dim, dim + 1);
        const LeeEigenfunction u{BallPoint(Vec(std::size_t(dim + 1), 0.0))};
        std::vector<Vec> samples;
        for (double r : {0.0, 0.3, 0.6, 0.85, 0.95}) {
            Vec x(std::size_t(dim), 0.0);
            x[0] = r;
            samples.push_back(x);
        }
        const BartaReport rep = barta_certificate(tg.immersion, u, k / 2.0, 0.0, 0.0, samples);
        CHECK(rep.floor == doctest::Approx(k * k / 4.0).epsilon(1e-14));
        CHECK(rep.min_quotient >= k * k / 4.0 - 1e-8);
        // at the base the quotient is s * dim, the pole of the family
        CHECK(rep.quotients[0] == doctest::Approx(k / 2.0 * dim).epsilon(1e-8));
    }
    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 3);
    const LeeEigenfunction u{BallPoint(Vec{0.0, 0.0, 0.0})};
    CHECK_THROWS_AS(barta_certificate(tg.immersion, u, -0.5, 0.0, 0.0, {Vec{0.1, 0.1}}),
                    std::invalid_argument);
}

TEST_CASE("equidistant certificates reproduce the curvature-adjusted window") {
    // alpha = 2 tanh t for surfaces, k = 1; the optimal certificate value
    // ((k - alpha)/2)^2 stays below the geodesic-slice window (1/4) sech^2 t.
    std::vector<Vec> samples{Vec{0.0, 0.0}, Vec{0.3, 0.0}, Vec{0.0, 0.55}, Vec{-0.5, 0.3}};
    for (double t : {0.1, 0.2, 0.3, 0.4, 0.5}) {
        const double alpha = 2.0 * std::tanh(t);
        const double s = (1.0 - alpha) / 2.0;
        REQUIRE(s > 0.0);
        const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, t);
        const LeeEigenfunction u{BallPoint(Vec{0.0, 0.0, 0.0})};
        const BartaReport rep = barta_certificate(eq.immersion, u, s, alpha, 0.0, samples);
        CHECK(rep.optimal_value == doctest::Approx(s * s).epsilon(1e-14));
        CHECK(rep.min_quotient >= rep.floor - 1e-8);
        const double sech = 1.0 / std::cosh(t);
        CHECK(rep.optimal_value <= 0.25 * sech * sech + 1e-12);
    }
}

TEST_CASE("stable hypersurfaces yield nonnegative quadratic forms") {
    auto bump = [](double w) {
        return [w](const Vec& x) {
            double n2 = 0.0;
            for (double c : x) n2 += c * c;
            const double q = 1.0 - n2 / (w * w);
            return q > 0.0 ? q * q : 0.0;
        };
    };
    const std::vector<std::function<double(const Vec&)>> tests{bump(0.45), bump(0.3)};
    const Vec lo{-0.5, -0.5}, hi{0.5, 0.5};

    const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, 0.25);
    const StabilityReport rep = stability_check(eq.immersion, 0.0, tests, lo, hi, 20);
    const double tt = std::tanh(0.25);
    CHECK(rep.threshold == doctest::Approx(0.25 + 2.0));
    CHECK(rep.max_b_norm_sq == doctest::Approx(2.0 * tt * tt).epsilon(1e-8));
    CHECK(rep.bound_applies);
    for (double q : rep.q_values) CHECK(q >= 0.0);

    // synthetic override pushes |B|^2 past the threshold and the form negative
    const CatalogEntry tg = make_catalog_entry(CatalogKind::totally_geodesic, 2, 3);
    const StabilityReport neg = stability_check(
        tg.immersion, 0.0, tests, lo, hi, 20, [](const Vec&) { return 12.0; });
    CHECK_FALSE(neg.bound_applies);
    CHECK(neg.q_values[0] < 0.0);

    const CatalogEntry high = make_catalog_entry(CatalogKind::totally_geodesic, 2, 4);
    CHECK_THROWS_AS(stability_check(high.immersion, 0.0, tests, lo, hi, 8), std::invalid_argument);
}

TEST_CASE("catalog parsing and path construction") {
    const CatalogEntry e = parse_catalog_spec("kind=equidistant dim=2 ambient=3 t=0.3");
    CHECK(e.kind == CatalogKind::equidistant);
    CHECK(e.intrinsic_dim == 2);
    CHECK(e.ambient_dim == 3);
    CHECK(e.parameter == doctest::Approx(0.3));
    CHECK(e.expected_cos_angle == doctest::Approx(std::tanh(0.3)));
    CHECK_THROWS_AS(parse_catalog_spec("kind=cylinder dim=2 ambient=3"), std::runtime_error);
    CHECK_THROWS_AS(parse_catalog_spec("kind=horosphere dim=2 ambient=3 radius=1"),
                    std::runtime_error);
    CHECK_THROWS_AS(make_catalog_entry(CatalogKind::equidistant, 2, 4, 0.3),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_catalog_entry(CatalogKind::totally_geodesic, 3, 3),
                    std::invalid_argument);

    const std::vector<Vec> path = catalog_boundary_path(e, Vec{1.0, 0.0}, 3, 10);
    REQUIRE(path.size() == 8);
    CHECK(path.front()[0] == doctest::Approx(1.0 - std::pow(2.0, -3)));
    CHECK(path.back()[0] == doctest::Approx(1.0 - std::pow(2.0, -10)));
    CHECK_THROWS_AS(catalog_boundary_path(e, Vec{0.0, 0.0}), std::invalid_argument);

    const CatalogEntry ho = make_catalog_entry(CatalogKind::horosphere, 2, 3);
    const std::vector<Vec> hpath = catalog_boundary_path(ho, Vec{2.0, 0.0}, 3, 6);
    CHECK(hpath.front()[0] == doctest::Approx(8.0));  // chart radius 2^3 along the direction
}

TEST_CASE("serial and parallel boundary reports coincide bitwise") {
    const CatalogEntry eq = make_catalog_entry(CatalogKind::equidistant, 2, 3, 0.35);
    const std::vector<Vec> path = catalog_boundary_path(eq, Vec{0.7, 0.7});
    const BoundaryAngleReport a =
        boundary_angles(eq.immersion, path, DefiningFunctionKind::r2, ExecMode::serial);
    const BoundaryAngleReport b =
        boundary_angles(eq.immersion, path, DefiningFunctionKind::r2, ExecMode::parallel);
    CHECK(a.cos_theta_limit[0] == b.cos_theta_limit[0]);
    CHECK(a.p_norm_sq_limit == b.p_norm_sq_limit);
    CHECK(a.mean_match == b.mean_match);
}
