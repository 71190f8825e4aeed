#include "hyplab/radial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hyplab/bessel.hpp"
#include "hyplab/quadrature.hpp"
#include "hyplab/upper_bound.hpp"

namespace hyplab {

RadialProblem::RadialProblem(int n_, double p_, double kappa_, double R_, int mesh_)
    : n(n_), p(p_), kappa(kappa_), R(R_), mesh(mesh_) {
    if (n < 1) throw std::invalid_argument("RadialProblem: n >= 1 required");
    if (!(p > 1.0)) throw std::invalid_argument("RadialProblem: p > 1 required");
    if (!(kappa > 0.0)) throw std::invalid_argument("RadialProblem: kappa > 0 required");
    if (!(R > 0.0)) throw std::invalid_argument("RadialProblem: R > 0 required");
    if (mesh < 100) throw std::invalid_argument("RadialProblem: mesh >= 100 required");
}

namespace {

constexpr int kGaussOrder = 8;

// Per-element quadrature tables: values of w(t) = (sinh(kappa t)/kappa)^n at
// the Gauss points, scaled by the Gauss weights and the element half-length.
struct FemTables {
    double h = 0.0;
    int m = 0;
    std::vector<double> wq;     // m x kGaussOrder, quadrature weight * density
    std::vector<double> shape;  // kGaussOrder barycentric coordinates in [0,1]
    std::vector<double> We;     // per-element integral of w
};

FemTables build_tables(const RadialProblem& prob) {
    FemTables T;
    T.m = prob.mesh;
    T.h = prob.R / prob.mesh;
    const GaussRule& g = gauss_legendre(kGaussOrder);
    T.shape.resize(kGaussOrder);
    for (int q = 0; q < kGaussOrder; ++q) T.shape[q] = 0.5 * (g.x[q] + 1.0);
    T.wq.assign(static_cast<std::size_t>(T.m) * kGaussOrder, 0.0);
    T.We.assign(T.m, 0.0);
    for (int e = 0; e < T.m; ++e) {
        const double tl = e * T.h;
        for (int q = 0; q < kGaussOrder; ++q) {
            const double t = tl + T.h * T.shape[q];
            const double w = std::pow(std::sinh(prob.kappa * t) / prob.kappa, prob.n);
            const double val = 0.5 * T.h * g.w[q] * w;
            T.wq[static_cast<std::size_t>(e) * kGaussOrder + q] = val;
            T.We[e] += val;
        }
    }
    return T;
}

// Nodal profile with the two boundary constraints applied in place.
void apply_constraints(std::vector<double>& f) {
    f.back() = 0.0;
    f.front() = f[1];
}

double quotient(const FemTables& T, double p, const std::vector<double>& f,
                double* numerator = nullptr, double* denominator = nullptr) {
    double N = 0.0, D = 0.0;
    for (int e = 0; e < T.m; ++e) {
        const double df = (f[e + 1] - f[e]) / T.h;
        N += std::pow(std::fabs(df), p) * T.We[e];
        for (int q = 0; q < kGaussOrder; ++q) {
            const double fv = f[e] * (1.0 - T.shape[q]) + f[e + 1] * T.shape[q];
            D += std::pow(std::fabs(fv), p) * T.wq[static_cast<std::size_t>(e) * kGaussOrder + q];
        }
    }
    if (numerator) *numerator = N;
    if (denominator) *denominator = D;
    return N / D;
}

// Gradient of log(N/D) with respect to the free nodes f_1..f_{m-1} (node 0 is
// slaved to node 1, node m to zero).
std::vector<double> log_quotient_gradient(const FemTables& T, double p,
                                          const std::vector<double>& f, double* q_out) {
    const int m = T.m;
    std::vector<double> gN(m + 1, 0.0), gD(m + 1, 0.0);
    double N = 0.0, D = 0.0;
    for (int e = 0; e < m; ++e) {
        const double df = (f[e + 1] - f[e]) / T.h;
        N += std::pow(std::fabs(df), p) * T.We[e];
        const double dN = p * std::pow(std::fabs(df), p - 1.0) * (df >= 0.0 ? 1.0 : -1.0) * T.We[e] / T.h;
        gN[e] -= dN;
        gN[e + 1] += dN;
        for (int q = 0; q < kGaussOrder; ++q) {
            const double sq = T.shape[q];
            const double fv = f[e] * (1.0 - sq) + f[e + 1] * sq;
            const double wq = T.wq[static_cast<std::size_t>(e) * kGaussOrder + q];
            D += std::pow(std::fabs(fv), p) * wq;
            const double dD = p * std::pow(std::fabs(fv), p - 1.0) * (fv >= 0.0 ? 1.0 : -1.0) * wq;
            gD[e] += dD * (1.0 - sq);
            gD[e + 1] += dD * sq;
        }
    }
    if (q_out) *q_out = N / D;
    std::vector<double> g(m - 1, 0.0);
    for (int i = 1; i < m; ++i) g[i - 1] = gN[i] / N - gD[i] / D;
    g[0] += gN[0] / N - gD[0] / D;  // node 0 rides on node 1
    return g;
}

// Tridiagonal stiffness/mass in the constrained basis psi_1 = hat_0 + hat_1,
// psi_i = hat_i (2 <= i <= m-1).
struct Tridiag {
    std::vector<double> diag, off;  // off[i] couples i and i+1
};

void assemble_p2(const FemTables& T, Tridiag& A, Tridiag& M) {
    const int m = T.m;
    const int nd = m - 1;
    A.diag.assign(nd, 0.0);
    A.off.assign(nd - 1, 0.0);
    M.diag.assign(nd, 0.0);
    M.off.assign(nd - 1, 0.0);
    const auto dof = [m](int node) { return node == 0 ? 0 : (node == m ? -1 : node - 1); };
    for (int e = 0; e < m; ++e) {
        const int a = dof(e), b = dof(e + 1);
        double M00 = 0.0, M01 = 0.0, M11 = 0.0;
        for (int q = 0; q < kGaussOrder; ++q) {
            const double sq = T.shape[q];
            const double wq = T.wq[static_cast<std::size_t>(e) * kGaussOrder + q];
            M00 += wq * (1.0 - sq) * (1.0 - sq);
            M01 += wq * (1.0 - sq) * sq;
            M11 += wq * sq * sq;
        }
        const double Ae = T.We[e] / (T.h * T.h);
        if (a >= 0) M.diag[a] += M00;
        if (b >= 0) M.diag[b] += M11;
        if (a >= 0 && b >= 0) {
            if (a == b) {
                M.diag[a] += 2.0 * M01;  // element 0: both nodes map to dof 0
            } else {
                M.off[std::min(a, b)] += M01;
            }
        }
        if (e == 0) continue;  // flat first element: no stiffness contribution
        if (a >= 0) A.diag[a] += Ae;
        if (b >= 0) A.diag[b] += Ae;
        if (a >= 0 && b >= 0 && a != b) A.off[std::min(a, b)] -= Ae;
    }
}

// LDL^T factorization and solve for a symmetric tridiagonal SPD matrix.
struct TriFactor {
    std::vector<double> d, l;
};

TriFactor factor(const Tridiag& A) {
    const std::size_t n = A.diag.size();
    TriFactor F;
    F.d.resize(n);
    F.l.resize(n > 0 ? n - 1 : 0);
    F.d[0] = A.diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        F.l[i - 1] = A.off[i - 1] / F.d[i - 1];
        F.d[i] = A.diag[i] - F.l[i - 1] * A.off[i - 1];
        if (!(F.d[i] > 0.0)) throw std::runtime_error("radial solver: stiffness factorization lost positivity");
    }
    return F;
}

std::vector<double> tri_solve(const TriFactor& F, std::vector<double> b) {
    const std::size_t n = F.d.size();
    for (std::size_t i = 1; i < n; ++i) b[i] -= F.l[i - 1] * b[i - 1];
    for (std::size_t i = 0; i < n; ++i) b[i] /= F.d[i];
    for (std::size_t i = n - 1; i-- > 0;) b[i] -= F.l[i] * b[i + 1];
    return b;
}

std::vector<double> tri_apply(const Tridiag& A, const std::vector<double>& x) {
    const std::size_t n = A.diag.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = A.diag[i] * x[i];
        if (i > 0) y[i] += A.off[i - 1] * x[i - 1];
        if (i + 1 < n) y[i] += A.off[i] * x[i + 1];
    }
    return y;
}

double tri_inner(const Tridiag& A, const std::vector<double>& x, const std::vector<double>& y) {
    const std::vector<double> Ax = tri_apply(A, x);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += Ax[i] * y[i];
    return s;
}

std::vector<double> expand_profile(const std::vector<double>& dofs, int m) {
    std::vector<double> f(m + 1, 0.0);
    for (int i = 1; i < m; ++i) f[i] = dofs[i - 1];
    apply_constraints(f);
    return f;
}

struct P2Solution {
    double lambda = 0.0;
    std::vector<double> dofs;
    int iterations = 0;
    double residual = 0.0;
};

P2Solution inverse_iteration(const Tridiag& A, const Tridiag& M) {
    const std::size_t nd = A.diag.size();
    const TriFactor F = factor(A);
    std::vector<double> x(nd, 1.0);
    double lambda = 0.0, prev = 0.0;
    int it = 0;
    for (it = 1; it <= 500; ++it) {
        x = tri_solve(F, tri_apply(M, x));
        const double mn = std::sqrt(tri_inner(M, x, x));
        for (auto& v : x) v /= mn;
        lambda = tri_inner(A, x, x);  // Rayleigh quotient with ||x||_M = 1
        if (it > 3 && std::fabs(lambda - prev) <= 1e-15 * lambda) break;
        prev = lambda;
    }
    // sign convention: profile positive
    double mx = 0.0;
    for (double v : x) mx = std::fabs(v) > std::fabs(mx) ? v : mx;
    if (mx < 0.0)
        for (auto& v : x) v = -v;
    P2Solution sol;
    sol.lambda = lambda;
    sol.dofs = x;
    sol.iterations = it;
    const std::vector<double> r = tri_apply(A, x);
    const std::vector<double> mxv = tri_apply(M, x);
    double rn = 0.0;
    for (std::size_t i = 0; i < nd; ++i) rn = std::fmax(rn, std::fabs(r[i] - lambda * mxv[i]));
    sol.residual = rn;
    return sol;
}

}  // namespace

double discrete_quotient(const RadialProblem& prob, const std::vector<double>& profile) {
    if (profile.size() != static_cast<std::size_t>(prob.mesh) + 1)
        throw std::invalid_argument("discrete_quotient: profile needs mesh+1 nodes");
    const FemTables T = build_tables(prob);
    std::vector<double> f = profile;
    apply_constraints(f);
    return quotient(T, prob.p, f);
}

double bessel_profile_quotient(const RadialProblem& prob) {
    const double nu = 0.5 * (prob.n - 1);
    const double j1 = bessel_first_zero(nu);
    std::vector<double> f(prob.mesh + 1, 0.0);
    for (int i = 0; i <= prob.mesh; ++i) {
        const double t = prob.R * i / prob.mesh;
        const double x = j1 * t / prob.R;
        f[i] = (i == 0) ? 0.0 : std::pow(t, -nu) * bessel_j(nu, x);
    }
    // limit value at t=0: (j1/(2R))^nu / Gamma(nu+1)
    f[0] = std::pow(0.5 * j1 / prob.R, nu) / std::tgamma(nu + 1.0);
    return discrete_quotient(prob, f);
}

EigenResult ball_first_eigenvalue(const RadialProblem& prob) {
    const FemTables T = build_tables(prob);
    Tridiag A, M;
    assemble_p2(T, A, M);
    const P2Solution p2 = inverse_iteration(A, M);

    EigenResult out;
    if (prob.p == 2.0) {
        out.lambda = p2.lambda;
        out.iterations = p2.iterations;
        out.residual = p2.residual;
        out.eigenfunction = expand_profile(p2.dofs, prob.mesh);
    } else {
        // Normalized descent on log(N/D), preconditioned by the p=2 stiffness;
        // the direction is rescaled to the iterate's M-norm so the kappa
        // scaling correspondence stays exactly proportional in floating point.
        const TriFactor F = factor(A);
        std::vector<double> x = p2.dofs;
        for (auto& v : x) v = std::fabs(v);
        {
            const double mn = std::sqrt(tri_inner(M, x, x));
            for (auto& v : x) v /= mn;
        }
        std::vector<double> f = expand_profile(x, prob.mesh);
        double q = quotient(T, prob.p, f);
        int stall = 0;
        int it = 0;
        std::vector<double> grad;
        for (it = 1; it <= 4000; ++it) {
            grad = log_quotient_gradient(T, prob.p, f, &q);
            std::vector<double> d = tri_solve(F, grad);
            for (auto& v : d) v = -v;
            const double dn = std::sqrt(tri_inner(M, d, d));
            const double xn = std::sqrt(tri_inner(M, x, x));
            if (dn == 0.0) break;
            const double scale = xn / dn;
            for (auto& v : d) v *= scale;
            double slope = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) slope += grad[i] * d[i];
            double step = 1.0;
            bool accepted = false;
            const double logq = std::log(q);
            for (int bt = 0; bt < 60; ++bt) {
                std::vector<double> xt(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) xt[i] = x[i] + step * d[i];
                const std::vector<double> ft = expand_profile(xt, prob.mesh);
                const double qt = quotient(T, prob.p, ft);
                if (std::log(qt) <= logq + 1e-4 * step * slope) {
                    x = xt;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            const double mn = std::sqrt(tri_inner(M, x, x));
            for (auto& v : x) v /= mn;
            f = expand_profile(x, prob.mesh);
            const double qn = quotient(T, prob.p, f);
            const double rel = std::fabs(qn - q) / qn;
            q = qn;
            if (rel <= 1e-10) {
                if (++stall >= 10) break;
            } else {
                stall = 0;
            }
        }
        if (it > 4000) {
            std::ostringstream msg;
            msg << "ball_first_eigenvalue: descent did not converge; last quotient " << q;
            throw std::runtime_error(msg.str());
        }
        out.lambda = q;
        out.iterations = it;
        grad = log_quotient_gradient(T, prob.p, f, &q);
        double rn = 0.0;
        for (double v : grad) rn = std::fmax(rn, std::fabs(v));
        out.residual = rn;
        out.eigenfunction = f;
    }

    // Post-solve sandwich: McKean below, interpolated Euclidean mode above.
    const double mckean = sharp_upper_bound(prob.n, prob.p, prob.kappa);
    const double upper = bessel_profile_quotient(prob);
    if (out.lambda < mckean - 1e-8 || out.lambda > upper + 1e-12) {
        std::ostringstream msg;
        msg << "ball_first_eigenvalue: lambda " << out.lambda << " escapes [" << mckean << ", "
            << upper << "]";
        throw std::runtime_error(msg.str());
    }
    return out;
}

std::vector<EigenResult> monotonicity_scan(int n, double p, double kappa,
                                           const std::vector<double>& radii, int mesh,
                                           ExecMode mode) {
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw std::invalid_argument("monotonicity_scan: radii must increase strictly");
    return parallel_map<EigenResult>(
        radii.size(),
        [&](std::size_t i) { return ball_first_eigenvalue(RadialProblem(n, p, kappa, radii[i], mesh)); },
        mode);
}

ScalingReport scaling_check(const RadialProblem& prob) {
    ScalingReport rep;
    rep.lambda_kappa = ball_first_eigenvalue(prob).lambda;
    rep.lambda_unit =
        ball_first_eigenvalue(RadialProblem(prob.n, prob.p, 1.0, prob.kappa * prob.R, prob.mesh)).lambda;
    rep.kappa_power = std::pow(prob.kappa, prob.p);
    rep.rel_error = std::fabs(rep.lambda_kappa - rep.kappa_power * rep.lambda_unit) /
                    (rep.kappa_power * rep.lambda_unit);
    return rep;
}

SandwichReport sandwich_report(int n, double p, int mesh, ExecMode mode) {
    SandwichReport rep;
    rep.mckean = sharp_upper_bound(n, p, 1.0);
    rep.sharp = rep.mckean;
    const std::vector<double> radii{4.0, 6.0, 8.0, 10.0, 12.0};
    const std::vector<EigenResult> res = monotonicity_scan(n, p, 1.0, radii, mesh, mode);
    // least squares fit lambda(R) = a + b/R^2
    double s11 = 0.0, s1x = 0.0, sxx = 0.0, s1y = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double xv = 1.0 / (radii[i] * radii[i]);
        const double yv = res[i].lambda;
        rep.samples.emplace_back(radii[i], yv);
        s11 += 1.0;
        s1x += xv;
        sxx += xv * xv;
        s1y += yv;
        sxy += xv * yv;
    }
    const double det = s11 * sxx - s1x * s1x;
    rep.extrapolated = (s1y * sxx - s1x * sxy) / det;
    rep.max_gap = std::fmax(std::fabs(rep.extrapolated - rep.sharp),
                            std::fmax(std::fabs(rep.mckean - rep.sharp),
                                      std::fabs(rep.extrapolated - rep.mckean)));
    rep.agrees = rep.max_gap <= 5e-2;
    return rep;
}

}  // namespace hyplab
