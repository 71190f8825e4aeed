#include "hyplab/upper_bound.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hyplab/extrapolation.hpp"
#include "hyplab/quadrature.hpp"

namespace hyplab {

CutoffParams::CutoffParams(double e, double d, double r0) : eps(e), delta(d), rho0(r0) {
    if (!(rho0 > 0.0)) throw std::invalid_argument("CutoffParams: rho0 > 0 required");
    if (!(eps > 0.0 && eps < rho0)) throw std::invalid_argument("CutoffParams: need 0 < eps < rho0");
    if (!(delta > 0.0)) throw std::invalid_argument("CutoffParams: delta > 0 required");
    if (!(lower_breakpoint() < eps)) throw std::invalid_argument("CutoffParams: degenerate breakpoints");
}

RayleighParams::RayleighParams(int n_, double p_, double s_) : n(n_), p(p_), s(s_) {
    if (n < 1) throw std::invalid_argument("RayleighParams: n >= 1 required");
    if (!(p > 1.0)) throw std::invalid_argument("RayleighParams: p > 1 required");
    if (!(s > s_lower() && s < s_upper()))
        throw std::invalid_argument("RayleighParams: s must lie strictly in ((n-p)/p, n/p)");
}

double cutoff_phi(double rho, const CutoffParams& c) {
    if (!(rho > 0.0)) throw std::domain_error("cutoff_phi: rho > 0 required");
    if (rho >= c.eps) return 1.0;
    const double lo = c.lower_breakpoint();
    if (rho <= lo) return 0.0;
    return (1.0 + c.delta) / c.eps * (rho - lo);
}

double normal_form_density(double rho, int n) {
    if (!(rho > 0.0 && rho <= 1.0)) throw std::domain_error("normal_form_density: rho in (0,1] required");
    return std::pow(1.0 - 0.25 * rho * rho, n);
}

double sphere_volume(int n) {
    return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

namespace {

// Volume density of the exact ball in collar coordinates, valid on all of (0, 2].
double ball_density(double rho, int n) {
    return std::pow(rho, -(n + 1)) * std::pow(1.0 - 0.25 * rho * rho, n);
}

struct PieceResult {
    double value = 0.0;
    double error = 0.0;
};

PieceResult integrate_piece(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& quad) {
    // Adaptive bisection comparing half-order vs full-order panels; the
    // returned error accumulates the accepted panel discrepancies.
    PieceResult out;
    if (b <= a) return out;
    const int fine = quad.nodes, coarse = quad.nodes / 2;
    const double scale0 = std::fabs(gl_panel(f, a, b, fine));
    const double tol0 = quad.rel_tol * (scale0 > 1e-300 ? scale0 : 1.0);
    struct Panel { double a, b, tol; int depth; };
    std::vector<Panel> stack{{a, b, tol0, 0}};
    while (!stack.empty()) {
        const Panel pan = stack.back();
        stack.pop_back();
        const double c1 = gl_panel(f, pan.a, pan.b, coarse);
        const double c2 = gl_panel(f, pan.a, pan.b, fine);
        const double err = std::fabs(c2 - c1);
        if (err <= pan.tol || pan.depth >= 48) {
            out.value += c2;
            out.error += err;
        } else {
            const double m = 0.5 * (pan.a + pan.b);
            stack.push_back({pan.a, m, 0.5 * pan.tol, pan.depth + 1});
            stack.push_back({m, pan.b, 0.5 * pan.tol, pan.depth + 1});
        }
    }
    return out;
}

}  // namespace

RayleighReport rayleigh_q(const RayleighParams& rp, const CutoffParams& cp,
                          const QuadratureSpec& quad) {
    if (quad.nodes < 64) throw std::invalid_argument("rayleigh_q: quadrature node count >= 64 required");
    const int n = rp.n;
    const double p = rp.p, s = rp.s;
    const double lo = cp.lower_breakpoint();
    const double slope = (1.0 + cp.delta) / cp.eps;

    // |grad(rho^s phi)|_{g} = |d/drho (rho^s phi)| * rho, so the numerator
    // integrand is |s rho^s phi + rho^{s+1} phi'|^p * density.
    const auto num_ramp = [&](double rho) {
        const double phi = slope * (rho - lo);
        const double bracket = s * std::pow(rho, s) * phi + std::pow(rho, s + 1.0) * slope;
        return std::pow(std::fabs(bracket), p) * ball_density(rho, n);
    };
    const auto num_flat = [&](double rho) {
        return std::pow(std::fabs(s) * std::pow(rho, s), p) * ball_density(rho, n);
    };
    const auto den_ramp = [&](double rho) {
        const double phi = slope * (rho - lo);
        return std::pow(rho, p * s) * std::pow(phi, p) * ball_density(rho, n);
    };
    const auto den_flat = [&](double rho) {
        return std::pow(rho, p * s) * ball_density(rho, n);
    };

    // Split exactly at the cutoff breakpoints and the collar edge.
    RayleighReport rep;
    const double volS = sphere_volume(n);
    PieceResult numerator, denominator;
    for (const auto& [f, a, b] : {std::tuple{std::function<double(double)>(num_ramp), lo, cp.eps},
                                  std::tuple{std::function<double(double)>(num_flat), cp.eps, cp.rho0},
                                  std::tuple{std::function<double(double)>(num_flat), cp.rho0, 2.0}}) {
        const PieceResult r = integrate_piece(f, a, b, quad);
        numerator.value += r.value;
        numerator.error += r.error;
    }
    for (const auto& [f, a, b] : {std::tuple{std::function<double(double)>(den_ramp), lo, cp.eps},
                                  std::tuple{std::function<double(double)>(den_flat), cp.eps, cp.rho0},
                                  std::tuple{std::function<double(double)>(den_flat), cp.rho0, 2.0}}) {
        const PieceResult r = integrate_piece(f, a, b, quad);
        denominator.value += r.value;
        denominator.error += r.error;
    }
    rep.numerator = volS * numerator.value;
    rep.denominator = volS * denominator.value;
    rep.quotient = rep.numerator / rep.denominator;
    rep.quadrature_error_estimate =
        volS * (numerator.error + denominator.error * rep.quotient) / rep.denominator;
    rep.converged = rep.quadrature_error_estimate <= 1e-6 * std::fabs(rep.quotient);
    return rep;
}

double delta_limit(const RayleighParams& rp, double eps, int jmin, int jmax) {
    const double beta = rp.p * (1.0 + rp.s) - rp.n;  // collar correction exponent
    std::vector<double> qs;
    for (int j = jmin; j <= jmax; ++j) {
        const CutoffParams cp(eps, std::pow(2.0, -j));
        qs.push_back(rayleigh_q(rp, cp).quotient);
    }
    return richardson_ladder(qs, exponent_ladder(beta, qs.size() - 1));
}

IteratedLimitReport iterated_limit(const RayleighParams& rp, ExecMode mode) {
    const double alpha = rp.n - rp.p * rp.s;  // outer correction exponent
    constexpr int imin = 2, imax = 8;
    IteratedLimitReport rep;
    rep.delta_limits = parallel_map<double>(
        imax - imin + 1,
        [&](std::size_t k) { return delta_limit(rp, std::pow(2.0, -double(imin + k))); }, mode);
    rep.value = richardson_ladder(rep.delta_limits, exponent_ladder(alpha, rep.delta_limits.size() - 1, 2.0));
    const std::vector<double> shorter(rep.delta_limits.begin(), rep.delta_limits.end() - 1);
    const double prev = richardson_ladder(shorter, exponent_ladder(alpha, shorter.size() - 1, 2.0));
    rep.error_estimate = std::fabs(rep.value - prev);
    if (!(rep.error_estimate < 0.5 * std::fabs(rep.value) + 1e-6)) {
        std::ostringstream msg;
        msg << "iterated_limit: extrapolation diverged; inner limits:";
        for (double v : rep.delta_limits) msg << " " << v;
        throw std::runtime_error(msg.str());
    }
    return rep;
}

double closed_form_F(int n, double p, double s) {
    const double lo = (n - p) / p, hi = n / p;
    if (!(s >= lo - 1e-15 && s <= hi + 1e-15))
        throw std::domain_error("closed_form_F: s outside [(n-p)/p, n/p]");
    // |s|^p: the limit of |s rho^s + ...|^p keeps the absolute value, which
    // matters when n < p makes the lower endpoint negative.
    return std::pow(std::fabs(s), p) * (s + 1.0 - n / p) + std::pow(1.0 + s, p) * (n / p - s);
}

double sharp_upper_bound(int n, double p, double kappa) {
    return std::pow(n * kappa / p, p);
}

}  // namespace hyplab
