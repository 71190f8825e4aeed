#include "hyplab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace hyplab {

Mat Mat::identity(std::size_t n) {
    Mat I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
}

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec operator+(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

Vec operator-(const Vec& x, const Vec& y) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

Vec operator*(double s, const Vec& x) {
    Vec z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = s * x[i];
    return z;
}

Mat matmul(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("matmul: shape mismatch");
    Mat C(A.rows, B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            const double aik = A(i, k);
            for (std::size_t j = 0; j < B.cols; ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) T(j, i) = A(i, j);
    return T;
}

Vec matvec(const Mat& A, const Vec& x) {
    if (A.cols != x.size()) throw std::invalid_argument("matvec: shape mismatch");
    Vec y(A.rows, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) y[i] += A(i, j) * x[j];
    return y;
}

Vec solve(Mat A, Vec b) {
    if (A.rows != A.cols || A.rows != b.size()) throw std::invalid_argument("solve: shape mismatch");
    const std::size_t n = A.rows;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(A(r, c)) > std::fabs(A(piv, c))) piv = r;
        if (std::fabs(A(piv, c)) < 1e-300) throw std::runtime_error("solve: singular matrix");
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(c, j));
            std::swap(b[piv], b[c]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A(r, c) / A(c, c);
            if (f == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) A(r, j) -= f * A(c, j);
            b[r] -= f * b[c];
        }
    }
    Vec x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A(i, j) * x[j];
        x[i] = s / A(i, i);
    }
    return x;
}

Mat inverse(const Mat& A) {
    const std::size_t n = A.rows;
    Mat inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        Vec e(n, 0.0);
        e[c] = 1.0;
        Vec x = solve(A, e);
        for (std::size_t r = 0; r < n; ++r) inv(r, c) = x[r];
    }
    return inv;
}

double det(Mat A) {
    if (A.rows != A.cols) throw std::invalid_argument("det: square matrix required");
    const std::size_t n = A.rows;
    double d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(A(r, c)) > std::fabs(A(piv, c))) piv = r;
        if (std::fabs(A(piv, c)) < 1e-300) return 0.0;
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(A(piv, j), A(c, j));
            d = -d;
        }
        d *= A(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A(r, c) / A(c, c);
            for (std::size_t j = c; j < n; ++j) A(r, j) -= f * A(c, j);
        }
    }
    return d;
}

Vec sym_eigenvalues(Mat A) {
    if (A.rows != A.cols) throw std::invalid_argument("sym_eigenvalues: square matrix required");
    const std::size_t n = A.rows;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(A(p, q)) < 1e-300) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = A(i, i);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = i; j > 0 && ev[j - 1] > ev[j]; --j) std::swap(ev[j - 1], ev[j]);
    return ev;
}

double smallest_singular_value(const Mat& A) {
    Mat G = matmul(transpose(A), A);
    Vec ev = sym_eigenvalues(G);
    return std::sqrt(std::fmax(ev.front(), 0.0));
}

}  // namespace hyplab
