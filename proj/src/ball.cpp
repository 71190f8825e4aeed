#include "hyplab/ball.hpp"

#include <cmath>

namespace hyplab {

namespace {
constexpr double kBoundaryGuard = 1e-12;
}

BallPoint::BallPoint(Vec coords) : y(std::move(coords)) {
    if (y.empty()) throw std::invalid_argument("BallPoint: empty coordinates");
    if (norm(y) >= 1.0 - kBoundaryGuard)
        throw std::invalid_argument("BallPoint: |y| must stay below 1 - 1e-12");
}

double BallPoint::radius() const { return norm(y); }

double conformal_factor(const BallPoint& p) { return 2.0 / (1.0 - dot(p.y, p.y)); }

double hyperbolic_distance(const BallPoint& a, const BallPoint& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("hyperbolic_distance: dimension mismatch");
    const Vec d = a.y - b.y;
    const double arg = 1.0 + 2.0 * dot(d, d) / ((1.0 - dot(a.y, a.y)) * (1.0 - dot(b.y, b.y)));
    return std::acosh(std::fmax(arg, 1.0));
}

double defining_value(DefiningFunctionKind kind, const BallPoint& p) {
    const double t = p.radius();
    switch (kind) {
        case DefiningFunctionKind::r1: return 1.0 - t;
        case DefiningFunctionKind::r2: return (1.0 - t) / (1.0 + t);
        case DefiningFunctionKind::rho: return 2.0 * (1.0 - t) / (1.0 + t);
    }
    throw std::invalid_argument("defining_value: unknown kind");
}

Vec defining_gradient(DefiningFunctionKind kind, const BallPoint& p) {
    const double t = p.radius();
    if (t < 1e-14)
        throw std::invalid_argument("defining_gradient: radial defining functions have no gradient at the origin");
    // d r/d t times the unit radial direction y/t.
    double drdt = 0.0;
    switch (kind) {
        case DefiningFunctionKind::r1: drdt = -1.0; break;
        case DefiningFunctionKind::r2: drdt = -2.0 / ((1.0 + t) * (1.0 + t)); break;
        case DefiningFunctionKind::rho: drdt = -4.0 / ((1.0 + t) * (1.0 + t)); break;
    }
    return (drdt / t) * p.y;
}

double special_check(DefiningFunctionKind kind, const BallPoint& p) {
    const double r = defining_value(kind, p);
    const double lam = conformal_factor(p);
    const Vec g = defining_gradient(kind, p);
    return dot(g, g) / (r * lam * r * lam);
}

Vec ScalarField::fd_gradient(const Vec& y) const {
    const auto central = [&](double h) {
        Vec g(y.size());
        Vec yp = y;
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double yi = y[i];
            yp[i] = yi + h;
            const double fp = value(yp);
            yp[i] = yi - h;
            const double fm = value(yp);
            yp[i] = yi;
            g[i] = (fp - fm) / (2.0 * h);
        }
        return g;
    };
    Vec g = central(fd_step);
    if (richardson) {
        const Vec g2 = central(0.5 * fd_step);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = (4.0 * g2[i] - g[i]) / 3.0;
    }
    return g;
}

Mat ScalarField::fd_hessian(const Vec& y) const {
    const auto central = [&](double h) {
        const std::size_t m = y.size();
        Mat H(m, m);
        const double f0 = value(y);
        Vec yp = y;
        for (std::size_t i = 0; i < m; ++i) {
            const double yi = y[i];
            yp[i] = yi + h;
            const double fp = value(yp);
            yp[i] = yi - h;
            const double fm = value(yp);
            yp[i] = yi;
            H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                const double yi = y[i], yj = y[j];
                yp[i] = yi + h; yp[j] = yj + h;
                const double fpp = value(yp);
                yp[j] = yj - h;
                const double fpm = value(yp);
                yp[i] = yi - h; yp[j] = yj + h;
                const double fmp = value(yp);
                yp[j] = yj - h;
                const double fmm = value(yp);
                yp[i] = yi; yp[j] = yj;
                H(i, j) = H(j, i) = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            }
        return H;
    };
    Mat H = central(fd_step);
    if (richardson) {
        const Mat H2 = central(0.5 * fd_step);
        for (std::size_t k = 0; k < H.a.size(); ++k) H.a[k] = (4.0 * H2.a[k] - H.a[k]) / 3.0;
    }
    return H;
}

Vec ScalarField::gradient(const Vec& y) const {
    return exact_gradient ? exact_gradient(y) : fd_gradient(y);
}

Mat ScalarField::hessian(const Vec& y) const {
    return exact_hessian ? exact_hessian(y) : fd_hessian(y);
}

Mat covariant_hessian(const ScalarField& f, const BallPoint& p) {
    const std::size_t m = p.dim();
    const Vec df = f.gradient(p.y);
    Mat H = f.hessian(p.y);
    const double lam = conformal_factor(p);
    const Vec s = lam * p.y;  // grad log lambda
    const double sdf = dot(s, df);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            H(i, j) -= s[j] * df[i] + s[i] * df[j];
            if (i == j) H(i, j) += sdf;
        }
    return H;
}

double laplacian(const ScalarField& f, const BallPoint& p) {
    const Mat H = covariant_hessian(f, p);
    const double lam = conformal_factor(p);
    double tr = 0.0;
    for (std::size_t i = 0; i < p.dim(); ++i) tr += H(i, i);
    return tr / (lam * lam);
}

double LeeEigenfunction::value(const BallPoint& p) const {
    const double c = 2.0 / (1.0 - dot(base.y, base.y));
    const Vec d = p.y - base.y;
    return 1.0 + c * dot(d, d) / (1.0 - dot(p.y, p.y));
}

Vec LeeEigenfunction::gradient(const BallPoint& p) const {
    const double c = 2.0 / (1.0 - dot(base.y, base.y));
    const double A = dot(p.y - base.y, p.y - base.y);
    const double B = 1.0 - dot(p.y, p.y);
    const Vec Ai = 2.0 * (p.y - base.y);
    const Vec Bi = -2.0 * p.y;
    Vec g(p.dim());
    for (std::size_t i = 0; i < p.dim(); ++i) g[i] = c * (Ai[i] * B - A * Bi[i]) / (B * B);
    return g;
}

Mat LeeEigenfunction::hessian(const BallPoint& p) const {
    const std::size_t m = p.dim();
    const double c = 2.0 / (1.0 - dot(base.y, base.y));
    const double A = dot(p.y - base.y, p.y - base.y);
    const double B = 1.0 - dot(p.y, p.y);
    const Vec Ai = 2.0 * (p.y - base.y);
    const Vec Bi = -2.0 * p.y;
    // A_ij = 2 delta, B_ij = -2 delta; symmetric closed form:
    // d2u = c [ A_ij B^2 - A B_ij B - B(A_i B_j + A_j B_i) + 2 A B_i B_j ] / B^3
    Mat H(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double v = -B * (Ai[i] * Bi[j] + Ai[j] * Bi[i]) + 2.0 * A * Bi[i] * Bi[j];
            if (i == j) v += 2.0 * B * B + 2.0 * A * B;
            H(i, j) = c * v / (B * B * B);
        }
    return H;
}

ScalarField LeeEigenfunction::as_field() const {
    const LeeEigenfunction u = *this;
    ScalarField f;
    f.value = [u](const Vec& y) { return u.value(BallPoint(y)); };
    f.exact_gradient = [u](const Vec& y) { return u.gradient(BallPoint(y)); };
    f.exact_hessian = [u](const Vec& y) { return u.hessian(BallPoint(y)); };
    return f;
}

double LeeEigenfunction::gradient_ratio(const BallPoint& p) const {
    const Vec g = gradient(p);
    const double lam = conformal_factor(p);
    const double uval = value(p);
    return dot(g, g) / (lam * lam * uval * uval);
}

double lee_value(const LeeEigenfunction& u, const BallPoint& p) { return u.value(p); }

double lee_residual(const LeeEigenfunction& u, const BallPoint& p) {
    const ScalarField f = u.as_field();
    const double n_plus_1 = static_cast<double>(p.dim());
    return laplacian(f, p) - n_plus_1 * u.value(p);
}

Mat trace_free_hessian(const LeeEigenfunction& u, const BallPoint& p) {
    const ScalarField f = u.as_field();
    Mat H = covariant_hessian(f, p);
    const double lam = conformal_factor(p);
    const double ug = u.value(p) * lam * lam;
    for (std::size_t i = 0; i < p.dim(); ++i) H(i, i) -= ug;
    return H;
}

double form_norm_gH(const Mat& form, const BallPoint& p) {
    const double lam = conformal_factor(p);
    double s = 0.0;
    for (double v : form.a) s += v * v;
    return std::sqrt(s) / (lam * lam);
}

Mat conformal_ricci(const ScalarField& psi, const Vec& y) {
    const std::size_t m = y.size();
    const Vec dp = psi.gradient(y);
    const Mat Hp = psi.hessian(y);
    double lap = 0.0;
    for (std::size_t i = 0; i < m; ++i) lap += Hp(i, i);
    const double g2 = dot(dp, dp);
    Mat R(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            R(i, j) = -(double(m) - 2.0) * (Hp(i, j) - dp[i] * dp[j]);
            if (i == j) R(i, j) -= lap + (double(m) - 2.0) * g2;
        }
    return R;
}

double conformal_scalar_curvature(const ScalarField& psi, const Vec& y) {
    const Mat R = conformal_ricci(psi, y);
    double tr = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) tr += R(i, i);
    return std::exp(-2.0 * psi.value(y)) * tr;
}

RoundnessReport compactified_roundness_check(const LeeEigenfunction& u, int theta_samples) {
    if (norm(u.base.y) > 1e-14)
        throw std::invalid_argument("compactified_roundness_check: origin base required");
    const std::size_t m = u.base.dim();
    const double n = static_cast<double>(m) - 1.0;
    RoundnessReport rep;

    // psi = log(lambda/u) with exact derivatives: grad log lambda = lambda*y,
    // hess log lambda = lambda^2 y x y + lambda I.
    ScalarField psi;
    const LeeEigenfunction uc = u;
    psi.value = [uc](const Vec& y) {
        const BallPoint p(y);
        return std::log(conformal_factor(p) / uc.value(p));
    };
    psi.exact_gradient = [uc](const Vec& y) {
        const BallPoint p(y);
        const double lam = conformal_factor(p);
        const double uv = uc.value(p);
        const Vec du = uc.gradient(p);
        Vec g(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) g[i] = lam * y[i] - du[i] / uv;
        return g;
    };
    psi.exact_hessian = [uc](const Vec& y) {
        const BallPoint p(y);
        const double lam = conformal_factor(p);
        const double uv = uc.value(p);
        const Vec du = uc.gradient(p);
        const Mat d2u = uc.hessian(p);
        Mat H(y.size(), y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            for (std::size_t j = 0; j < y.size(); ++j) {
                H(i, j) = lam * lam * y[i] * y[j] - d2u(i, j) / uv + du[i] * du[j] / (uv * uv);
                if (i == j) H(i, j) += lam;
            }
        return H;
    };

    for (int s = 1; s <= theta_samples; ++s) {
        // theta in (0, ~1.55]: d = arctanh(sin theta) stays within the guard.
        const double theta = 1.55 * s / theta_samples;
        const double d = std::atanh(std::sin(theta));
        const double t = std::tanh(0.5 * d);
        Vec y(m, 0.0);
        y[0] = t;
        const BallPoint p(y);
        const double lam = conformal_factor(p);
        const double uv = u.value(p);

        // g_u in polar form: radial coefficient (dt/dtheta)^2 u^{-2} lambda^2,
        // angular coefficient t^2 u^{-2} lambda^2 / sin^2 theta; both must be 1.
        const double dd_dtheta = 1.0 / std::cos(theta);
        const double dt_dtheta = 0.5 * (1.0 - t * t) * dd_dtheta;
        const double radial = (lam / uv) * (lam / uv) * dt_dtheta * dt_dtheta;
        const double angular = (lam / uv) * (lam / uv) * t * t / (std::sin(theta) * std::sin(theta));
        rep.max_component_deviation =
            std::fmax(rep.max_component_deviation, std::fmax(std::fabs(radial - 1.0), std::fabs(angular - 1.0)));

        // scalar identity R_{g_u} = n(n+1)(u^2 - |grad u|^2_{g_H}) = n(n+1)
        const Vec du = u.gradient(p);
        const double grad2 = dot(du, du) / (lam * lam);
        rep.max_scalar_deviation =
            std::fmax(rep.max_scalar_deviation, std::fabs(n * (n + 1.0) * (uv * uv - grad2) - n * (n + 1.0)));

        // E_{g_u} = (n-1) b(u)/u, both in Cartesian components
        const Mat ric = conformal_ricci(psi, y);
        const double scal = conformal_scalar_curvature(psi, y);
        const double gu = (lam / uv) * (lam / uv);
        const Mat b = trace_free_hessian(u, p);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                double e = ric(i, j);
                if (i == j) e -= scal / double(m) * gu;
                rep.max_tracefree_ricci = std::fmax(rep.max_tracefree_ricci, std::fabs(e));
                rep.max_identity_gap =
                    std::fmax(rep.max_identity_gap, std::fabs(e - (n - 1.0) * b(i, j) / uv));
            }
    }
    return rep;
}

}  // namespace hyplab
