#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "hyplab/linalg.hpp"

// Forward-mode second-order jets: value, gradient, and Hessian with respect
// to a fixed set of chart variables. Immersion maps evaluated on jets yield
// machine-exact first and second derivatives, which the submanifold module
// needs for its tight curvature tolerances.
namespace hyplab {

struct Jet {
    double v = 0.0;
    Vec g;   // length d
    Mat h;   // d x d, symmetric

    Jet() = default;
    static Jet constant(double value, std::size_t d) {
        Jet j;
        j.v = value;
        j.g.assign(d, 0.0);
        j.h = Mat(d, d);
        return j;
    }
    static Jet variable(double value, std::size_t i, std::size_t d) {
        Jet j = constant(value, d);
        j.g[i] = 1.0;
        return j;
    }
    std::size_t dim() const { return g.size(); }
};

inline Jet operator+(const Jet& a, const Jet& b) {
    Jet r = a;
    r.v += b.v;
    for (std::size_t i = 0; i < r.g.size(); ++i) r.g[i] += b.g[i];
    for (std::size_t i = 0; i < r.h.a.size(); ++i) r.h.a[i] += b.h.a[i];
    return r;
}

inline Jet operator-(const Jet& a, const Jet& b) {
    Jet r = a;
    r.v -= b.v;
    for (std::size_t i = 0; i < r.g.size(); ++i) r.g[i] -= b.g[i];
    for (std::size_t i = 0; i < r.h.a.size(); ++i) r.h.a[i] -= b.h.a[i];
    return r;
}

inline Jet operator-(const Jet& a) {
    Jet r = a;
    r.v = -r.v;
    for (auto& x : r.g) x = -x;
    for (auto& x : r.h.a) x = -x;
    return r;
}

inline Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t d = a.dim();
    Jet r = Jet::constant(a.v * b.v, d);
    for (std::size_t i = 0; i < d; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            r.h(i, j) = a.v * b.h(i, j) + b.v * a.h(i, j) + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    return r;
}

inline Jet operator+(const Jet& a, double c) { Jet r = a; r.v += c; return r; }
inline Jet operator+(double c, const Jet& a) { return a + c; }
inline Jet operator-(const Jet& a, double c) { Jet r = a; r.v -= c; return r; }
inline Jet operator-(double c, const Jet& a) { return (-a) + c; }
inline Jet operator*(const Jet& a, double c) {
    Jet r = a;
    r.v *= c;
    for (auto& x : r.g) x *= c;
    for (auto& x : r.h.a) x *= c;
    return r;
}
inline Jet operator*(double c, const Jet& a) { return a * c; }

// Composition with a scalar function given f(v), f'(v), f''(v).
inline Jet jet_chain(const Jet& a, double f, double df, double d2f) {
    const std::size_t d = a.dim();
    Jet r = Jet::constant(f, d);
    for (std::size_t i = 0; i < d; ++i) r.g[i] = df * a.g[i];
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) r.h(i, j) = df * a.h(i, j) + d2f * a.g[i] * a.g[j];
    return r;
}

inline Jet jet_inv(const Jet& a) {
    const double iv = 1.0 / a.v;
    return jet_chain(a, iv, -iv * iv, 2.0 * iv * iv * iv);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * jet_inv(b); }
inline Jet operator/(const Jet& a, double c) { return a * (1.0 / c); }
inline Jet operator/(double c, const Jet& a) { return jet_inv(a) * c; }

inline Jet jet_sqrt(const Jet& a) {
    const double s = std::sqrt(a.v);
    return jet_chain(a, s, 0.5 / s, -0.25 / (s * s * s));
}
inline Jet jet_exp(const Jet& a) {
    const double e = std::exp(a.v);
    return jet_chain(a, e, e, e);
}
inline Jet jet_log(const Jet& a) {
    return jet_chain(a, std::log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v));
}
inline Jet jet_sinh(const Jet& a) { return jet_chain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v)); }
inline Jet jet_cosh(const Jet& a) { return jet_chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v)); }

// Chart point promoted to jet variables.
inline std::vector<Jet> jet_point(const Vec& x) {
    std::vector<Jet> out;
    out.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out.push_back(Jet::variable(x[i], i, x.size()));
    return out;
}

inline Jet jet_squared_norm(const std::vector<Jet>& x) {
    Jet s = Jet::constant(0.0, x.empty() ? 0 : x[0].dim());
    for (const auto& q : x) s = s + q * q;
    return s;
}

}  // namespace hyplab
