#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <vector>

namespace hyplab {

// Polynomial (Neville) extrapolation of (x_i, y_i) to x = 0. The abscissae
// must be distinct and nonzero.
inline double neville_at_zero(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw std::invalid_argument("neville_at_zero: need >= 2 matching samples");
    std::vector<double> t = ys;
    const std::size_t m = t.size();
    for (std::size_t j = 1; j < m; ++j)
        for (std::size_t i = m - 1; i >= j; --i) {
            const double denom = xs[i - j] - xs[i];
            if (denom == 0.0) throw std::invalid_argument("neville_at_zero: repeated abscissa");
            t[i] = t[i] + (t[i] - t[i - 1]) * xs[i] / denom;
            if (i == j) break;
        }
    return t[m - 1];
}

// Generalized Richardson elimination for samples y_j = L + sum_k c_k x_j^{e_k}
// on a halving grid x_j = x_0 * 2^{-j}. Each pass removes one exponent from
// the given ladder; the ladder must be sorted ascending.
inline double richardson_ladder(const std::vector<double>& ys, const std::vector<double>& exponents) {
    if (ys.size() < 2) throw std::invalid_argument("richardson_ladder: need >= 2 samples");
    std::vector<double> t = ys;
    const std::size_t passes = std::min(t.size() - 1, exponents.size());
    for (std::size_t c = 0; c < passes; ++c) {
        const double f = std::pow(2.0, exponents[c]);
        std::vector<double> nt(t.size() - 1);
        for (std::size_t i = 0; i + 1 < t.size(); ++i) nt[i] = (f * t[i + 1] - t[i]) / (f - 1.0);
        t.swap(nt);
    }
    return t.back();
}

// Sorted ladder {i*base + j*step : i,j >= 0} \ {0}, truncated to count entries.
// Captures the mixed power corrections of the collar quotient expansions.
inline std::vector<double> exponent_ladder(double base, std::size_t count, double step = 1.0) {
    std::set<double> vals;
    for (std::size_t i = 0; i <= count; ++i)
        for (std::size_t j = 0; j <= count; ++j) {
            const double e = i * base + j * step;
            if (e > 1e-12) vals.insert(e);
        }
    std::vector<double> out(vals.begin(), vals.end());
    if (out.size() > count) out.resize(count);
    return out;
}

}  // namespace hyplab
