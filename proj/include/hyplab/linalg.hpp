#pragma once

#include <cstddef>
#include <vector>

// Small dense vectors and matrices for desk-scale differential geometry
// (dimensions stay below ~8; nothing here is tuned for large systems).
namespace hyplab {

using Vec = std::vector<double>;

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;  // row-major

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    static Mat identity(std::size_t n);
};

double dot(const Vec& x, const Vec& y);
double norm(const Vec& x);
Vec operator+(const Vec& x, const Vec& y);
Vec operator-(const Vec& x, const Vec& y);
Vec operator*(double s, const Vec& x);

Mat matmul(const Mat& A, const Mat& B);
Mat transpose(const Mat& A);
Vec matvec(const Mat& A, const Vec& x);

// Gaussian elimination with partial pivoting; throws on singular input.
Vec solve(Mat A, Vec b);
Mat inverse(const Mat& A);
double det(Mat A);

// Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi rotations.
Vec sym_eigenvalues(Mat A);

// Smallest singular value of a (possibly rectangular, rows >= cols) matrix,
// via the Gram matrix spectrum.
double smallest_singular_value(const Mat& A);

}  // namespace hyplab
