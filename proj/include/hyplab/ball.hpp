#pragma once

#include <functional>
#include <stdexcept>

#include "hyplab/linalg.hpp"

// Poincare ball model of H^{n+1}(-1): g_H = lambda^2 * delta with
// lambda(y) = 2/(1-|y|^2). Cartesian-frame tensors throughout.
namespace hyplab {

struct BallPoint {
    Vec y;

    explicit BallPoint(Vec coords);
    std::size_t dim() const { return y.size(); }  // ambient dimension n+1
    double radius() const;                        // |y|
};

double conformal_factor(const BallPoint& p);

// arccosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)))
double hyperbolic_distance(const BallPoint& a, const BallPoint& b);

// r1 = 1-|y|, r2 = (1-|y|)/(1+|y|), rho = 2*r2 = 2*exp(-d(0,y)).
enum class DefiningFunctionKind { r1, r2, rho };

double defining_value(DefiningFunctionKind kind, const BallPoint& p);
Vec defining_gradient(DefiningFunctionKind kind, const BallPoint& p);  // Euclidean partials
// |dr|^2 with respect to the compactified metric r^2 g_H, i.e. (r*lambda)^{-2} |grad r|^2.
double special_check(DefiningFunctionKind kind, const BallPoint& p);

// Scalar field with optional exact derivatives; central finite differences
// (step fd_step, optional Richardson step-halving) fill in what is missing.
struct ScalarField {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> exact_gradient;  // may be empty
    std::function<Mat(const Vec&)> exact_hessian;   // may be empty
    double fd_step = 1e-4;
    bool richardson = false;

    double operator()(const Vec& y) const { return value(y); }
    Vec gradient(const Vec& y) const;
    Mat hessian(const Vec& y) const;
    Vec fd_gradient(const Vec& y) const;
    Mat fd_hessian(const Vec& y) const;
};

// Hessian of g_H: (cov hess f)_ij = d2f_ij - Gamma^k_ij dk f, with the
// conformal Christoffels Gamma^k_ij = d_ik s_j + d_jk s_i - d_ij s_k,
// s = grad log lambda = lambda * y.
Mat covariant_hessian(const ScalarField& f, const BallPoint& p);
double laplacian(const ScalarField& f, const BallPoint& p);

// u = cosh d(base, .) = 1 + c|y-base|^2/(1-|y|^2), c = 2/(1-|base|^2);
// all derivatives in closed rational form.
struct LeeEigenfunction {
    BallPoint base;

    explicit LeeEigenfunction(BallPoint b) : base(std::move(b)) {}
    double value(const BallPoint& p) const;
    Vec gradient(const BallPoint& p) const;  // Euclidean partials
    Mat hessian(const BallPoint& p) const;   // Euclidean second partials
    ScalarField as_field() const;
    // |grad u|^2_{g_H} / u^2 = tanh^2 d <= 1
    double gradient_ratio(const BallPoint& p) const;
};

double lee_value(const LeeEigenfunction& u, const BallPoint& p);
// Delta_{g_H} u - (n+1) u
double lee_residual(const LeeEigenfunction& u, const BallPoint& p);
// b(u) = cov hess u - u g_H (Cartesian components)
Mat trace_free_hessian(const LeeEigenfunction& u, const BallPoint& p);
// Frobenius norm of a Cartesian bilinear form with respect to g_H.
double form_norm_gH(const Mat& form, const BallPoint& p);

// Ricci tensor of the conformally flat metric G = e^{2 psi} delta in dim m,
// from flat derivatives of psi:
//   Ric = -(m-2)(Hess psi - dpsi x dpsi) - (Lap psi + (m-2)|dpsi|^2) delta.
Mat conformal_ricci(const ScalarField& psi, const Vec& y);
double conformal_scalar_curvature(const ScalarField& psi, const Vec& y);

struct RoundnessReport {
    double max_component_deviation = 0.0;  // g_u components vs dtheta^2 + sin^2 theta g_S
    double max_scalar_deviation = 0.0;     // |n(n+1)(u^2 - |grad u|^2) - n(n+1)|
    double max_tracefree_ricci = 0.0;      // max |E_{g_u}| component
    double max_identity_gap = 0.0;         // max |E_{g_u} - (n-1) b(u)/u| component
};

// For the origin-based eigenfunction, g_u = u^{-2} g_H is the round unit
// sphere metric under tanh d = sin theta; checked on a theta grid together
// with the trace-free Ricci identity E_{g_u} = (n-1) b(u)/u.
RoundnessReport compactified_roundness_check(const LeeEigenfunction& u, int theta_samples);

}  // namespace hyplab
