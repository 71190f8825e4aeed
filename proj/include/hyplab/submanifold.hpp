#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hyplab/ball.hpp"
#include "hyplab/jet.hpp"
#include "hyplab/linalg.hpp"
#include "hyplab/parallel.hpp"

// Immersed submanifolds of the ball: induced metric, second fundamental form,
// mean curvature, boundary angles, asymptotic curvature, restricted
// eigenfunction identities, Barta quotients, and the stability form.
namespace hyplab {

// Chart parameters x in R^{chart_dim} mapped to ball coordinates; chart_dim
// is the intrinsic dimension. Exact derivatives come from a jet map; a plain
// map falls back to central finite differences.
struct Immersion {
    int chart_dim = 0;
    int ambient_dim = 0;
    std::function<std::vector<Jet>(const std::vector<Jet>&)> jet_map;
    std::function<Vec(const Vec&)> plain_map;  // used when jet_map is empty
    double fd_step = 1e-5;

    Vec map(const Vec& chart) const;
    Mat jacobian(const Vec& chart) const;                     // ambient_dim x chart_dim
    std::vector<Mat> second_derivatives(const Vec& chart) const;  // per ambient coordinate
};

Immersion jet_immersion(int chart_dim, int ambient_dim,
                        std::function<std::vector<Jet>(const std::vector<Jet>&)> jet_map);
Immersion fd_immersion(int chart_dim, int ambient_dim, std::function<Vec(const Vec&)> plain_map,
                       double fd_step = 1e-5);

struct SubmanifoldSample {
    Vec chart;
    BallPoint point;
    Mat tangent_frame;             // jacobian columns
    std::vector<Mat> map_hessian;  // flat second derivatives, per ambient coordinate
    Mat normal_frame;              // g_H-orthonormal columns spanning the normal space
    Mat h;                         // induced metric
    Mat h_inv;
    std::vector<Mat> B;            // B[a'](alpha, beta)
    Vec H;                         // H^{a'} = h^{ab} B_{ab}^{a'}  (trace convention)
    std::vector<Mat> traceless_B;  // B - (H/dim) h
    double mean_curvature_norm = 0.0;  // sqrt(sum H^{a'}^2)
    int chart_dim = 0;
    int codim = 0;
};

// Frame, induced metric, second fundamental form, and mean curvature at one
// chart point. Throws when the jacobian drops below full column rank.
SubmanifoldSample sample_geometry(const Immersion& imm, const Vec& chart_pt);

// Max componentwise residual of B = Bbar/r + mubar(r) hbar / r^2 with the
// barred quantities recomputed in r^2 g_H.
double conformal_2ff_residual(const SubmanifoldSample& sample, DefiningFunctionKind kind);

// Pointwise residual of |Bo|^q_h sqrt(det h) = r^{q-dim} |Bobar|^q_hbar sqrt(det hbar)
// for the traceless part Bo; q >= intrinsic dimension.
double traceless_conformal_identity(const SubmanifoldSample& sample, DefiningFunctionKind kind,
                                    double q);

struct BoundaryAngleReport {
    std::vector<Vec> cos_theta;     // per path point, per normal, sign-adapted
    std::vector<double> p_norm_sq;  // per path point
    Vec cos_theta_limit;            // extrapolated to the boundary
    double p_norm_sq_limit = 0.0;
    double nonoblique_angle = 0.0;  // arccos |P|
    Vec mean_ratio_limit;           // extrapolated H^{a'}/dim, same sign adaptation
    double mean_match = 0.0;        // max |cos limit - mean ratio limit|
    double c_ratio_sq = 0.0;        // sum of squared mean ratios
    double projection_match = 0.0;  // ||P|^2 limit - c_ratio_sq|
};

// cos Theta_{a'} = dr(mubar_{a'}) along a chart path approaching the
// boundary, extrapolated against the defining-function values; normals are
// flipped so the cosines are nonnegative. Needs at least 4 path points.
BoundaryAngleReport boundary_angles(const Immersion& imm, const std::vector<Vec>& path,
                                    DefiningFunctionKind kind,
                                    ExecMode mode = ExecMode::parallel);

struct SectionalReport {
    std::vector<double> values;  // per path point
    double limit = 0.0;          // extrapolated to the boundary
    double expected = 0.0;       // -(1 - C^2/dim^2), C = extrapolated |H|
    double gap = 0.0;
};

// Sectional curvature of the chart plane span{W, Z} via the Gauss equation,
// extrapolated along the path as in boundary_angles.
SectionalReport asymptotic_sectional(const Immersion& imm, const std::vector<Vec>& path,
                                     const Vec& W, const Vec& Z,
                                     ExecMode mode = ExecMode::parallel);

enum class FieldTag { hyperbolic_exact, synthetic };

// Symmetric bilinear form b(u)/u in the ambient Cartesian frame.
struct AmbientHessianField {
    FieldTag tag = FieldTag::hyperbolic_exact;
    std::function<Mat(const BallPoint&)> provider;
};

// b(u)/u from the exact trace-free Hessian; identically zero for the ball.
AmbientHessianField hyperbolic_exact_field(const LeeEigenfunction& u);
// c times the ambient metric, so the normal-bundle trace is c * codim.
AmbientHessianField synthetic_normal_multiple(double c);

struct RestrictedLeeReport {
    std::vector<double> intrinsic;   // chart finite-difference Laplacian
    std::vector<double> restricted;  // dim * u + H^{a'} u_{a'} - T
    double max_discrepancy = 0.0;
    double beta = 0.0;  // max over samples of T / u
};

// Laplacian of the restricted eigenfunction computed two ways at each
// sample, plus the normal-trace functional beta.
RestrictedLeeReport restricted_lee(const Immersion& imm, const LeeEigenfunction& u,
                                   const AmbientHessianField& field,
                                   const std::vector<Vec>& samples, double fd_step = 1e-3,
                                   ExecMode mode = ExecMode::parallel);

struct BartaReport {
    std::vector<double> quotients;  // -Lap(u^-s)/u^-s per sample
    double min_quotient = 0.0;
    double floor = 0.0;          // s (k - s - alpha - beta), k = dim - 1
    double optimal_value = 0.0;  // ((k - alpha - beta)/2)^2
};

// Barta test-function quotients for u^{-s}; throws if any sample dips below
// floor - 1e-8.
BartaReport barta_certificate(const Immersion& imm, const LeeEigenfunction& u, double s,
                              double alpha, double beta, const std::vector<Vec>& samples,
                              ExecMode mode = ExecMode::parallel);

struct StabilityReport {
    double max_b_norm_sq = 0.0;  // over the quadrature grid
    double threshold = 0.0;      // (n - 1 - beta_hat)^2/4 + n, n = chart dim
    bool bound_applies = false;  // max_b_norm_sq <= threshold
    std::vector<double> q_values;  // one per test function
};

// Q(f) = integral of |grad f|^2_h - (|B|^2 - n) f^2 over a chart box, by
// tensor Gauss quadrature. Hypersurfaces only. When the curvature bound
// holds, nonnegativity of every Q(f) is asserted. b2_override substitutes a
// synthetic |B|^2 field (negative controls).
StabilityReport stability_check(const Immersion& imm, double beta_hat,
                                const std::vector<std::function<double(const Vec&)>>& test_functions,
                                const Vec& box_lo, const Vec& box_hi, int points_per_axis = 16,
                                std::function<double(const Vec&)> b2_override = nullptr,
                                ExecMode mode = ExecMode::parallel);

enum class CatalogKind { totally_geodesic, equidistant, horosphere };

struct CatalogEntry {
    CatalogKind kind = CatalogKind::totally_geodesic;
    int intrinsic_dim = 0;
    int ambient_dim = 0;
    double parameter = 0.0;  // offset distance t for equidistants
    Immersion immersion;
    double expected_mean_curvature = 0.0;  // asymptotic |H|
    double expected_cos_angle = 0.0;       // C / dim
    double expected_sectional = 0.0;       // -(1 - C^2/dim^2)
};

CatalogEntry make_catalog_entry(CatalogKind kind, int intrinsic_dim, int ambient_dim,
                                double parameter = 0.0);

// Plain-text form: "kind=equidistant dim=2 ambient=3 t=0.3".
CatalogEntry parse_catalog_spec(const std::string& text);

// Chart path approaching the boundary for catalog entries: coordinates along
// direction with chart radii 1 - 2^{-j} (chart balls) or 2^j (horosphere).
std::vector<Vec> catalog_boundary_path(const CatalogEntry& entry, const Vec& direction,
                                       int j_lo = 3, int j_hi = 10);

}  // namespace hyplab
