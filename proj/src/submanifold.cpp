#include "hyplab/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hyplab/extrapolation.hpp"
#include "hyplab/quadrature.hpp"

namespace hyplab {

namespace {

std::string chart_string(const Vec& x) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

}  // namespace

Vec Immersion::map(const Vec& chart) const {
    if (static_cast<int>(chart.size()) != chart_dim)
        throw std::invalid_argument("Immersion::map: chart point has wrong dimension");
    if (jet_map) {
        const std::vector<Jet> out = jet_map(jet_point(chart));
        Vec y(out.size());
        for (std::size_t i = 0; i < out.size(); ++i) y[i] = out[i].v;
        return y;
    }
    return plain_map(chart);
}

Mat Immersion::jacobian(const Vec& chart) const {
    if (jet_map) {
        const std::vector<Jet> out = jet_map(jet_point(chart));
        Mat J(out.size(), chart.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t a = 0; a < chart.size(); ++a) J(i, a) = out[i].g[a];
        return J;
    }
    Mat J(ambient_dim, chart.size());
    for (std::size_t a = 0; a < chart.size(); ++a) {
        Vec xp = chart, xm = chart;
        xp[a] += fd_step;
        xm[a] -= fd_step;
        const Vec yp = plain_map(xp), ym = plain_map(xm);
        for (int i = 0; i < ambient_dim; ++i) J(i, a) = (yp[i] - ym[i]) / (2.0 * fd_step);
    }
    return J;
}

std::vector<Mat> Immersion::second_derivatives(const Vec& chart) const {
    const std::size_t d = chart.size();
    std::vector<Mat> out(ambient_dim, Mat(d, d));
    if (jet_map) {
        const std::vector<Jet> jets = jet_map(jet_point(chart));
        for (int i = 0; i < ambient_dim; ++i) out[i] = jets[i].h;
        return out;
    }
    const Vec y0 = plain_map(chart);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a; b < d; ++b) {
            Vec d2(ambient_dim, 0.0);
            if (a == b) {
                Vec xp = chart, xm = chart;
                xp[a] += fd_step;
                xm[a] -= fd_step;
                const Vec yp = plain_map(xp), ym = plain_map(xm);
                for (int i = 0; i < ambient_dim; ++i)
                    d2[i] = (yp[i] - 2.0 * y0[i] + ym[i]) / (fd_step * fd_step);
            } else {
                Vec xpp = chart, xpm = chart, xmp = chart, xmm = chart;
                xpp[a] += fd_step; xpp[b] += fd_step;
                xpm[a] += fd_step; xpm[b] -= fd_step;
                xmp[a] -= fd_step; xmp[b] += fd_step;
                xmm[a] -= fd_step; xmm[b] -= fd_step;
                const Vec ypp = plain_map(xpp), ypm = plain_map(xpm);
                const Vec ymp = plain_map(xmp), ymm = plain_map(xmm);
                for (int i = 0; i < ambient_dim; ++i)
                    d2[i] = (ypp[i] - ypm[i] - ymp[i] + ymm[i]) / (4.0 * fd_step * fd_step);
            }
            for (int i = 0; i < ambient_dim; ++i) {
                out[i](a, b) = d2[i];
                out[i](b, a) = d2[i];
            }
        }
    return out;
}

Immersion jet_immersion(int chart_dim, int ambient_dim,
                        std::function<std::vector<Jet>(const std::vector<Jet>&)> jet_map) {
    Immersion imm;
    imm.chart_dim = chart_dim;
    imm.ambient_dim = ambient_dim;
    imm.jet_map = std::move(jet_map);
    return imm;
}

Immersion fd_immersion(int chart_dim, int ambient_dim, std::function<Vec(const Vec&)> plain_map,
                       double fd_step) {
    Immersion imm;
    imm.chart_dim = chart_dim;
    imm.ambient_dim = ambient_dim;
    imm.plain_map = std::move(plain_map);
    imm.fd_step = fd_step;
    return imm;
}

namespace {

// Euclidean-orthonormal basis of the normal space, built from the canonical
// basis by modified Gram-Schmidt against the tangent columns.
Mat euclidean_normal_directions(const Mat& J) {
    const std::size_t m = J.rows, d = J.cols;
    std::vector<Vec> basis;
    for (std::size_t a = 0; a < d; ++a) {
        Vec v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = J(i, a);
        for (const Vec& b : basis) v = v - dot(v, b) * b;
        const double nv = norm(v);
        if (nv < 1e-12) throw std::runtime_error("normal frame: degenerate tangent columns");
        basis.push_back((1.0 / nv) * v);
    }
    std::vector<Vec> normals;
    for (std::size_t k = 0; k < m && normals.size() < m - d; ++k) {
        Vec v(m, 0.0);
        v[k] = 1.0;
        for (const Vec& b : basis) v = v - dot(v, b) * b;
        for (const Vec& b : normals) v = v - dot(v, b) * b;
        const double nv = norm(v);
        if (nv < 1e-6) continue;
        normals.push_back((1.0 / nv) * v);
    }
    if (normals.size() != m - d)
        throw std::runtime_error("normal frame: could not complete the basis");
    Mat N(m, m - d);
    for (std::size_t k = 0; k < normals.size(); ++k)
        for (std::size_t i = 0; i < m; ++i) N(i, k) = normals[k][i];
    return N;
}

struct ConformalFrameData {
    Mat h;
    std::vector<Mat> B;  // with respect to the conformal-unit normals
    Vec H;
};

// Induced metric and second fundamental form of the sample in the conformal
// metric factor^2 * delta, sigma = Euclidean gradient of log(factor); normals
// are the stored Euclidean directions scaled to conformal-unit length.
ConformalFrameData conformal_frame(const SubmanifoldSample& s, const Mat& unit_normals,
                                   double factor, const Vec& sigma) {
    const std::size_t d = s.chart_dim, codim = s.codim, m = s.point.dim();
    ConformalFrameData out;
    out.h = Mat(d, d);
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            double e = 0.0;
            for (std::size_t i = 0; i < m; ++i) e += s.tangent_frame(i, a) * s.tangent_frame(i, b);
            out.h(a, b) = factor * factor * e;
        }
    out.B.assign(codim, Mat(d, d));
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            double sJa = 0.0, sJb = 0.0, JaJb = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                sJa += sigma[i] * s.tangent_frame(i, a);
                sJb += sigma[i] * s.tangent_frame(i, b);
                JaJb += s.tangent_frame(i, a) * s.tangent_frame(i, b);
            }
            for (std::size_t k = 0; k < codim; ++k) {
                double w_mu = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wi = s.map_hessian[i](a, b) + sJb * s.tangent_frame(i, a) +
                                      sJa * s.tangent_frame(i, b) - JaJb * sigma[i];
                    w_mu += wi * unit_normals(i, k);
                }
                out.B[k](a, b) = factor * w_mu;
            }
        }
    const Mat hinv = inverse(out.h);
    out.H.assign(codim, 0.0);
    for (std::size_t k = 0; k < codim; ++k)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) out.H[k] += hinv(a, b) * out.B[k](a, b);
    return out;
}

Mat euclidean_unit_normals(const SubmanifoldSample& s) {
    const double lam = conformal_factor(s.point);
    Mat N = s.normal_frame;
    for (auto& v : N.a) v *= lam;
    return N;
}

double tensor_norm_sq(const Mat& hinv, const std::vector<Mat>& T) {
    const std::size_t d = hinv.rows;
    double total = 0.0;
    for (const Mat& t : T) {
        // trace((h^{-1} t)^2) for symmetric t
        Mat ht(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                double v = 0.0;
                for (std::size_t k = 0; k < d; ++k) v += hinv(i, k) * t(k, j);
                ht(i, j) = v;
            }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) total += ht(i, j) * ht(j, i);
    }
    return total;
}

std::vector<Mat> traceless_part(const std::vector<Mat>& B, const Vec& H, const Mat& h) {
    std::vector<Mat> out = B;
    const double dim = static_cast<double>(h.rows);
    for (std::size_t k = 0; k < out.size(); ++k)
        for (std::size_t i = 0; i < h.rows; ++i)
            for (std::size_t j = 0; j < h.cols; ++j) out[k](i, j) -= H[k] * h(i, j) / dim;
    return out;
}

}  // namespace

SubmanifoldSample sample_geometry(const Immersion& imm, const Vec& chart_pt) {
    SubmanifoldSample s{chart_pt, BallPoint(imm.map(chart_pt)), Mat(), {}, Mat(), Mat(), Mat(),
                        {},       Vec(),                        {},    0.0,   imm.chart_dim,
                        imm.ambient_dim - imm.chart_dim};
    s.tangent_frame = imm.jacobian(chart_pt);
    if (smallest_singular_value(s.tangent_frame) <= 1e-8)
        throw std::runtime_error("sample_geometry: rank-deficient jacobian at chart " +
                                 chart_string(chart_pt));
    s.map_hessian = imm.second_derivatives(chart_pt);

    const double lam = conformal_factor(s.point);
    Mat unit_normals = euclidean_normal_directions(s.tangent_frame);
    s.normal_frame = unit_normals;
    for (auto& v : s.normal_frame.a) v /= lam;  // g_H-unit columns

    Vec sigma = s.point.y;
    for (auto& v : sigma) v *= lam;
    const ConformalFrameData data = conformal_frame(s, unit_normals, lam, sigma);
    s.h = data.h;
    s.h_inv = inverse(s.h);
    s.B = data.B;
    s.H = data.H;
    s.traceless_B = traceless_part(s.B, s.H, s.h);
    double hn = 0.0;
    for (double v : s.H) hn += v * v;
    s.mean_curvature_norm = std::sqrt(hn);
    return s;
}

double conformal_2ff_residual(const SubmanifoldSample& sample, DefiningFunctionKind kind) {
    const double r = defining_value(kind, sample.point);
    const Vec dr = defining_gradient(kind, sample.point);
    const double lam = conformal_factor(sample.point);
    const Mat unit_normals = euclidean_unit_normals(sample);

    Vec sigma_bar = sample.point.y;
    for (std::size_t i = 0; i < sigma_bar.size(); ++i) sigma_bar[i] = lam * sigma_bar[i] + dr[i] / r;
    const ConformalFrameData barred = conformal_frame(sample, unit_normals, r * lam, sigma_bar);

    double res = 0.0;
    for (int k = 0; k < sample.codim; ++k) {
        // mubar(r) = dr(mu)/ (r lam), the gbar-unit normal derivative of r
        double mubar_r = 0.0;
        for (std::size_t i = 0; i < dr.size(); ++i) mubar_r += dr[i] * unit_normals(i, k);
        mubar_r /= r * lam;
        for (int a = 0; a < sample.chart_dim; ++a)
            for (int b = 0; b < sample.chart_dim; ++b) {
                const double rhs =
                    barred.B[k](a, b) / r + mubar_r * barred.h(a, b) / (r * r);
                res = std::fmax(res, std::fabs(sample.B[k](a, b) - rhs));
            }
    }
    return res;
}

double traceless_conformal_identity(const SubmanifoldSample& sample, DefiningFunctionKind kind,
                                    double q) {
    const double dim = sample.chart_dim;
    if (q < dim) throw std::invalid_argument("traceless_conformal_identity: q >= dim required");
    const double r = defining_value(kind, sample.point);
    const Vec dr = defining_gradient(kind, sample.point);
    const double lam = conformal_factor(sample.point);
    const Mat unit_normals = euclidean_unit_normals(sample);

    Vec sigma_bar = sample.point.y;
    for (std::size_t i = 0; i < sigma_bar.size(); ++i) sigma_bar[i] = lam * sigma_bar[i] + dr[i] / r;
    const ConformalFrameData barred = conformal_frame(sample, unit_normals, r * lam, sigma_bar);
    const std::vector<Mat> Bo_bar = traceless_part(barred.B, barred.H, barred.h);

    const double lhs = std::pow(tensor_norm_sq(sample.h_inv, sample.traceless_B), 0.5 * q) *
                       std::sqrt(det(sample.h));
    const double rhs = std::pow(r, q - dim) *
                       std::pow(tensor_norm_sq(inverse(barred.h), Bo_bar), 0.5 * q) *
                       std::sqrt(det(barred.h));
    return std::fabs(lhs - rhs);
}

namespace {

struct AngleSample {
    double r = 0.0;
    Vec cos_theta;
    Vec mean_ratio;
    double p_sq = 0.0;
};

AngleSample angle_sample(const Immersion& imm, const Vec& chart, DefiningFunctionKind kind) {
    const SubmanifoldSample s = sample_geometry(imm, chart);
    const double r = defining_value(kind, s.point);
    const Vec dr = defining_gradient(kind, s.point);
    const double lam = conformal_factor(s.point);
    const Mat unit_normals = euclidean_unit_normals(s);
    AngleSample out;
    out.r = r;
    out.cos_theta.assign(s.codim, 0.0);
    out.mean_ratio.assign(s.codim, 0.0);
    for (int k = 0; k < s.codim; ++k) {
        double c = 0.0;
        for (std::size_t i = 0; i < dr.size(); ++i) c += dr[i] * unit_normals(i, k);
        c /= r * lam;
        double mr = s.H[k] / s.chart_dim;
        if (c < 0.0) {  // orient the normal toward increasing r
            c = -c;
            mr = -mr;
        }
        out.cos_theta[k] = c;
        out.mean_ratio[k] = mr;
        out.p_sq += c * c;
    }
    return out;
}

}  // namespace

BoundaryAngleReport boundary_angles(const Immersion& imm, const std::vector<Vec>& path,
                                    DefiningFunctionKind kind, ExecMode mode) {
    if (path.size() < 4)
        throw std::invalid_argument("boundary_angles: need >= 4 path points to extrapolate");
    const std::vector<AngleSample> samples = parallel_map<AngleSample>(
        path.size(), [&](std::size_t i) { return angle_sample(imm, path[i], kind); }, mode);

    BoundaryAngleReport rep;
    std::vector<double> xs;
    for (const AngleSample& s : samples) {
        xs.push_back(s.r);
        rep.cos_theta.push_back(s.cos_theta);
        rep.p_norm_sq.push_back(s.p_sq);
    }
    const int codim = static_cast<int>(samples.front().cos_theta.size());
    rep.cos_theta_limit.assign(codim, 0.0);
    rep.mean_ratio_limit.assign(codim, 0.0);
    for (int k = 0; k < codim; ++k) {
        std::vector<double> cys, mys;
        for (const AngleSample& s : samples) {
            cys.push_back(s.cos_theta[k]);
            mys.push_back(s.mean_ratio[k]);
        }
        rep.cos_theta_limit[k] = neville_at_zero(xs, cys);
        rep.mean_ratio_limit[k] = neville_at_zero(xs, mys);
    }
    rep.p_norm_sq_limit = neville_at_zero(xs, rep.p_norm_sq);
    const double p = std::sqrt(std::clamp(rep.p_norm_sq_limit, 0.0, 1.0));
    rep.nonoblique_angle = std::acos(p);
    for (int k = 0; k < codim; ++k) {
        rep.mean_match =
            std::fmax(rep.mean_match, std::fabs(rep.cos_theta_limit[k] - rep.mean_ratio_limit[k]));
        rep.c_ratio_sq += rep.mean_ratio_limit[k] * rep.mean_ratio_limit[k];
    }
    rep.projection_match = std::fabs(rep.p_norm_sq_limit - rep.c_ratio_sq);
    return rep;
}

SectionalReport asymptotic_sectional(const Immersion& imm, const std::vector<Vec>& path,
                                     const Vec& W, const Vec& Z, ExecMode mode) {
    if (path.size() < 4)
        throw std::invalid_argument("asymptotic_sectional: need >= 4 path points to extrapolate");
    struct Row {
        double r, sec, mean_norm;
    };
    const std::vector<Row> rows = parallel_map<Row>(
        path.size(),
        [&](std::size_t idx) {
            const SubmanifoldSample s = sample_geometry(imm, path[idx]);
            const std::size_t d = s.h.rows;
            double hWW = 0.0, hZZ = 0.0, hWZ = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) {
                    hWW += s.h(a, b) * W[a] * W[b];
                    hZZ += s.h(a, b) * Z[a] * Z[b];
                    hWZ += s.h(a, b) * W[a] * Z[b];
                }
            const double gram = hWW * hZZ - hWZ * hWZ;
            if (gram <= 1e-12 * hWW * hZZ)
                throw std::invalid_argument("asymptotic_sectional: degenerate plane at chart " +
                                            chart_string(path[idx]));
            double num = 0.0;
            for (int k = 0; k < s.codim; ++k) {
                double BWW = 0.0, BZZ = 0.0, BWZ = 0.0;
                for (std::size_t a = 0; a < d; ++a)
                    for (std::size_t b = 0; b < d; ++b) {
                        BWW += s.B[k](a, b) * W[a] * W[b];
                        BZZ += s.B[k](a, b) * Z[a] * Z[b];
                        BWZ += s.B[k](a, b) * W[a] * Z[b];
                    }
                num += BWW * BZZ - BWZ * BWZ;
            }
            return Row{defining_value(DefiningFunctionKind::r2, s.point), -1.0 + num / gram,
                       s.mean_curvature_norm};
        },
        mode);

    SectionalReport rep;
    std::vector<double> xs, secs, means;
    for (const Row& r : rows) {
        xs.push_back(r.r);
        secs.push_back(r.sec);
        means.push_back(r.mean_norm);
        rep.values.push_back(r.sec);
    }
    rep.limit = neville_at_zero(xs, secs);
    const double C = neville_at_zero(xs, means);
    const double dim = static_cast<double>(imm.chart_dim);
    rep.expected = -(1.0 - C * C / (dim * dim));
    rep.gap = std::fabs(rep.limit - rep.expected);
    return rep;
}

AmbientHessianField hyperbolic_exact_field(const LeeEigenfunction& u) {
    AmbientHessianField f;
    f.tag = FieldTag::hyperbolic_exact;
    f.provider = [u](const BallPoint& p) {
        Mat b = trace_free_hessian(u, p);
        const double uv = u.value(p);
        for (auto& v : b.a) v /= uv;
        return b;
    };
    return f;
}

AmbientHessianField synthetic_normal_multiple(double c) {
    AmbientHessianField f;
    f.tag = FieldTag::synthetic;
    f.provider = [c](const BallPoint& p) {
        const double lam = conformal_factor(p);
        Mat m = Mat::identity(p.dim());
        for (auto& v : m.a) v *= c * lam * lam;
        return m;
    };
    return f;
}

namespace {

// Chart Laplacian of u restricted to the immersion, by central finite
// differences of the pullback and of the induced metric.
double intrinsic_fd_laplacian(const Immersion& imm, const LeeEigenfunction& u, const Vec& chart,
                              double step) {
    const std::size_t d = chart.size();
    const auto uhat = [&](const Vec& x) { return u.value(BallPoint(imm.map(x))); };
    const auto metric = [&](const Vec& x) {
        const Mat J = imm.jacobian(x);
        const BallPoint p(imm.map(x));
        const double lam2 = conformal_factor(p) * conformal_factor(p);
        Mat h(d, d);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                double e = 0.0;
                for (std::size_t i = 0; i < J.rows; ++i) e += J(i, a) * J(i, b);
                h(a, b) = lam2 * e;
            }
        return h;
    };

    const double u0 = uhat(chart);
    Vec du(d, 0.0);
    Mat d2u(d, d);
    std::vector<Mat> dh(d, Mat(d, d));
    for (std::size_t a = 0; a < d; ++a) {
        Vec xp = chart, xm = chart;
        xp[a] += step;
        xm[a] -= step;
        const double up = uhat(xp), um = uhat(xm);
        du[a] = (up - um) / (2.0 * step);
        d2u(a, a) = (up - 2.0 * u0 + um) / (step * step);
        const Mat hp = metric(xp), hm = metric(xm);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) dh[a](i, j) = (hp(i, j) - hm(i, j)) / (2.0 * step);
    }
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b) {
            Vec xpp = chart, xpm = chart, xmp = chart, xmm = chart;
            xpp[a] += step; xpp[b] += step;
            xpm[a] += step; xpm[b] -= step;
            xmp[a] -= step; xmp[b] += step;
            xmm[a] -= step; xmm[b] -= step;
            const double v = (uhat(xpp) - uhat(xpm) - uhat(xmp) + uhat(xmm)) / (4.0 * step * step);
            d2u(a, b) = v;
            d2u(b, a) = v;
        }

    const Mat h = metric(chart);
    const Mat hinv = inverse(h);
    double lap = 0.0;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
            double gamma_du = 0.0;  // Gamma^c_{ab} du_c
            for (std::size_t c = 0; c < d; ++c) {
                double gl = 0.0;  // Gamma_{e,ab}
                for (std::size_t e = 0; e < d; ++e)
                    gl += hinv(c, e) * 0.5 * (dh[a](e, b) + dh[b](e, a) - dh[e](a, b));
                gamma_du += gl * du[c];
            }
            lap += hinv(a, b) * (d2u(a, b) - gamma_du);
        }
    return lap;
}

}  // namespace

RestrictedLeeReport restricted_lee(const Immersion& imm, const LeeEigenfunction& u,
                                   const AmbientHessianField& field, const std::vector<Vec>& samples,
                                   double fd_step, ExecMode mode) {
    if (samples.empty()) throw std::invalid_argument("restricted_lee: no samples");
    struct Row {
        double intrinsic, restricted, tu;
    };
    const std::vector<Row> rows = parallel_map<Row>(
        samples.size(),
        [&](std::size_t idx) {
            const SubmanifoldSample s = sample_geometry(imm, samples[idx]);
            if (hyperbolic_distance(s.point, u.base) < 1e-8)
                throw std::runtime_error("restricted_lee: base point lies on the submanifold");
            const double uv = u.value(s.point);
            const Vec grad = u.gradient(s.point);
            const Mat bmat = field.provider(s.point);
            double tu = 0.0, hgrad = 0.0;
            for (int k = 0; k < s.codim; ++k) {
                Vec mu(s.point.dim());
                for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = s.normal_frame(i, k);
                tu += dot(mu, matvec(bmat, mu));  // field(mu, mu), g-unit normals
                hgrad += s.H[k] * dot(grad, mu);
            }
            const double restricted = s.chart_dim * uv + hgrad - tu * uv;
            const double intrinsic = intrinsic_fd_laplacian(imm, u, samples[idx], fd_step);
            return Row{intrinsic, restricted, tu};
        },
        mode);

    RestrictedLeeReport rep;
    rep.beta = -1e300;
    for (const Row& r : rows) {
        rep.intrinsic.push_back(r.intrinsic);
        rep.restricted.push_back(r.restricted);
        rep.max_discrepancy = std::fmax(rep.max_discrepancy, std::fabs(r.intrinsic - r.restricted));
        rep.beta = std::fmax(rep.beta, r.tu);
    }
    return rep;
}

BartaReport barta_certificate(const Immersion& imm, const LeeEigenfunction& u, double s,
                              double alpha, double beta, const std::vector<Vec>& samples,
                              ExecMode mode) {
    if (!(s > 0.0)) throw std::invalid_argument("barta_certificate: s > 0 required");
    if (samples.empty()) throw std::invalid_argument("barta_certificate: no samples");
    const double k = imm.chart_dim - 1.0;
    BartaReport rep;
    rep.floor = s * (k - s - alpha - beta);
    const double opt = 0.5 * (k - alpha - beta);
    rep.optimal_value = opt * opt;

    rep.quotients = parallel_map<double>(
        samples.size(),
        [&](std::size_t idx) {
            const SubmanifoldSample smp = sample_geometry(imm, samples[idx]);
            const double uv = u.value(smp.point);
            if (!(uv > 0.0))
                throw std::runtime_error("barta_certificate: nonpositive value at chart " +
                                         chart_string(samples[idx]));
            const Vec grad = u.gradient(smp.point);
            double hgrad = 0.0;
            for (int kk = 0; kk < smp.codim; ++kk) {
                Vec mu(smp.point.dim());
                for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = smp.normal_frame(i, kk);
                hgrad += smp.H[kk] * dot(grad, mu);
            }
            const double lap = smp.chart_dim * uv + hgrad;
            Vec du(smp.chart_dim, 0.0);
            for (int a = 0; a < smp.chart_dim; ++a)
                for (std::size_t i = 0; i < smp.point.dim(); ++i)
                    du[a] += grad[i] * smp.tangent_frame(i, a);
            double grad_sq = 0.0;
            for (int a = 0; a < smp.chart_dim; ++a)
                for (int b = 0; b < smp.chart_dim; ++b) grad_sq += smp.h_inv(a, b) * du[a] * du[b];
            return s * lap / uv - s * (s + 1.0) * grad_sq / (uv * uv);
        },
        mode);

    rep.min_quotient = rep.quotients.front();
    for (std::size_t i = 0; i < rep.quotients.size(); ++i) {
        rep.min_quotient = std::fmin(rep.min_quotient, rep.quotients[i]);
        if (rep.quotients[i] < rep.floor - 1e-8) {
            std::ostringstream msg;
            msg << "barta_certificate: quotient " << rep.quotients[i] << " below floor "
                << rep.floor << " at sample " << i;
            throw std::runtime_error(msg.str());
        }
    }
    return rep;
}

StabilityReport stability_check(const Immersion& imm, double beta_hat,
                                const std::vector<std::function<double(const Vec&)>>& test_functions,
                                const Vec& box_lo, const Vec& box_hi, int points_per_axis,
                                std::function<double(const Vec&)> b2_override, ExecMode mode) {
    if (imm.ambient_dim - imm.chart_dim != 1)
        throw std::invalid_argument("stability_check: hypersurfaces only");
    const std::size_t d = box_lo.size();
    if (d != static_cast<std::size_t>(imm.chart_dim) || box_hi.size() != d)
        throw std::invalid_argument("stability_check: box dimensions mismatch the chart");

    const GaussRule& rule = gauss_legendre(points_per_axis);
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a) total *= points_per_axis;

    struct Node {
        Vec x;
        double weight;  // product Gauss weight, before the metric density
        Mat h_inv;
        double dv;      // sqrt(det h) * weight
        double b2;
    };
    const std::vector<Node> nodes = parallel_map<Node>(
        total,
        [&](std::size_t flat) {
            Node nd;
            nd.x.assign(d, 0.0);
            nd.weight = 1.0;
            std::size_t rem = flat;
            for (std::size_t a = 0; a < d; ++a) {
                const std::size_t q = rem % points_per_axis;
                rem /= points_per_axis;
                const double half = 0.5 * (box_hi[a] - box_lo[a]);
                nd.x[a] = box_lo[a] + half * (rule.x[q] + 1.0);
                nd.weight *= half * rule.w[q];
            }
            const SubmanifoldSample s = sample_geometry(imm, nd.x);
            nd.h_inv = s.h_inv;
            nd.dv = std::sqrt(det(s.h)) * nd.weight;
            nd.b2 = b2_override ? b2_override(nd.x) : tensor_norm_sq(s.h_inv, s.B);
            return nd;
        },
        mode);

    StabilityReport rep;
    for (const Node& nd : nodes) rep.max_b_norm_sq = std::fmax(rep.max_b_norm_sq, nd.b2);
    const double n = static_cast<double>(imm.chart_dim);
    rep.threshold = 0.25 * (n - 1.0 - beta_hat) * (n - 1.0 - beta_hat) + n;
    rep.bound_applies = rep.max_b_norm_sq <= rep.threshold;

    const double step = 1e-5;
    for (const auto& f : test_functions) {
        double q = 0.0;
        for (const Node& nd : nodes) {
            Vec df(d, 0.0);
            for (std::size_t a = 0; a < d; ++a) {
                Vec xp = nd.x, xm = nd.x;
                xp[a] += step;
                xm[a] -= step;
                df[a] = (f(xp) - f(xm)) / (2.0 * step);
            }
            double grad_sq = 0.0;
            for (std::size_t a = 0; a < d; ++a)
                for (std::size_t b = 0; b < d; ++b) grad_sq += nd.h_inv(a, b) * df[a] * df[b];
            const double fv = f(nd.x);
            q += (grad_sq - (nd.b2 - n) * fv * fv) * nd.dv;
        }
        rep.q_values.push_back(q);
        if (rep.bound_applies && q < -1e-9) {
            std::ostringstream msg;
            msg << "stability_check: negative form value " << q << " below the curvature threshold";
            throw std::runtime_error(msg.str());
        }
    }
    return rep;
}

namespace {

std::vector<Jet> totally_geodesic_map(const std::vector<Jet>& x, int ambient_dim) {
    std::vector<Jet> y(ambient_dim, Jet::constant(0.0, x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i];
    return y;
}

std::vector<Jet> equidistant_map(const std::vector<Jet>& x, double t) {
    const double ch = std::cosh(t), sh = std::sinh(t);
    const Jet x2 = jet_squared_norm(x);
    const Jet denom = (1.0 - x2) + ch * (1.0 + x2);
    std::vector<Jet> y(x.size() + 1, Jet::constant(0.0, x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = (2.0 * ch) * x[i] / denom;
    y[x.size()] = sh * (1.0 - x2) / denom;
    return y;
}

std::vector<Jet> horosphere_map(const std::vector<Jet>& x) {
    const Jet x2 = jet_squared_norm(x);
    const Jet denom = x2 + 4.0;
    std::vector<Jet> y(x.size() + 1, Jet::constant(0.0, x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 2.0 * x[i] / denom;
    y[x.size()] = x2 / denom;
    return y;
}

}  // namespace

CatalogEntry make_catalog_entry(CatalogKind kind, int intrinsic_dim, int ambient_dim,
                                double parameter) {
    if (intrinsic_dim < 1 || ambient_dim <= intrinsic_dim)
        throw std::invalid_argument("make_catalog_entry: need 1 <= dim < ambient");
    CatalogEntry e;
    e.kind = kind;
    e.intrinsic_dim = intrinsic_dim;
    e.ambient_dim = ambient_dim;
    e.parameter = parameter;
    const double dim = intrinsic_dim;
    switch (kind) {
        case CatalogKind::totally_geodesic:
            e.immersion = jet_immersion(intrinsic_dim, ambient_dim, [ambient_dim](const std::vector<Jet>& x) {
                return totally_geodesic_map(x, ambient_dim);
            });
            e.expected_mean_curvature = 0.0;
            break;
        case CatalogKind::equidistant:
            if (ambient_dim != intrinsic_dim + 1)
                throw std::invalid_argument("make_catalog_entry: equidistants are hypersurfaces");
            e.immersion = jet_immersion(intrinsic_dim, ambient_dim, [parameter](const std::vector<Jet>& x) {
                return equidistant_map(x, parameter);
            });
            e.expected_mean_curvature = dim * std::tanh(parameter);
            break;
        case CatalogKind::horosphere:
            if (ambient_dim != intrinsic_dim + 1)
                throw std::invalid_argument("make_catalog_entry: horospheres are hypersurfaces");
            e.immersion = jet_immersion(intrinsic_dim, ambient_dim,
                                        [](const std::vector<Jet>& x) { return horosphere_map(x); });
            e.expected_mean_curvature = dim;
            break;
    }
    e.expected_cos_angle = e.expected_mean_curvature / dim;
    e.expected_sectional = -(1.0 - e.expected_cos_angle * e.expected_cos_angle);
    return e;
}

CatalogEntry parse_catalog_spec(const std::string& text) {
    std::istringstream is(text);
    std::string tok, kind_str;
    int dim = 0, ambient = 0;
    double t = 0.0;
    while (is >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("parse_catalog_spec: expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "kind") kind_str = val;
        else if (key == "dim") dim = std::stoi(val);
        else if (key == "ambient") ambient = std::stoi(val);
        else if (key == "t") t = std::stod(val);
        else throw std::runtime_error("parse_catalog_spec: unknown key '" + key + "'");
    }
    if (kind_str.empty()) throw std::runtime_error("parse_catalog_spec: missing kind");
    CatalogKind kind;
    if (kind_str == "totally-geodesic" || kind_str == "totally_geodesic") kind = CatalogKind::totally_geodesic;
    else if (kind_str == "equidistant") kind = CatalogKind::equidistant;
    else if (kind_str == "horosphere") kind = CatalogKind::horosphere;
    else throw std::runtime_error("parse_catalog_spec: unknown kind '" + kind_str + "'");
    if (dim == 0) dim = 2;
    if (ambient == 0) ambient = dim + 1;
    return make_catalog_entry(kind, dim, ambient, t);
}

std::vector<Vec> catalog_boundary_path(const CatalogEntry& entry, const Vec& direction, int j_lo,
                                       int j_hi) {
    if (direction.size() != static_cast<std::size_t>(entry.intrinsic_dim))
        throw std::invalid_argument("catalog_boundary_path: direction dimension mismatch");
    const double dn = norm(direction);
    if (dn == 0.0) throw std::invalid_argument("catalog_boundary_path: zero direction");
    std::vector<Vec> path;
    for (int j = j_lo; j <= j_hi; ++j) {
        const double radius = entry.kind == CatalogKind::horosphere
                                  ? std::pow(2.0, j)
                                  : 1.0 - std::pow(2.0, -j);
        path.push_back((radius / dn) * direction);
    }
    return path;
}

}  // namespace hyplab
