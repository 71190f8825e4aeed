#include "doctest.h"
#include "hyplab/linalg.hpp"

#include <cmath>
#include <stdexcept>

using namespace hyplab;

TEST_CASE("vector arithmetic and norms") {
    Vec x{1.0, 2.0, -3.0};
    Vec y{4.0, -1.0, 0.5};
    CHECK(dot(x, y) == doctest::Approx(4.0 - 2.0 - 1.5));
    CHECK(norm(x) == doctest::Approx(std::sqrt(14.0)));
    Vec s = x + y;
    CHECK(s[0] == 5.0);
    CHECK(s[2] == -2.5);
    Vec d = x - y;
    CHECK(d[1] == 3.0);
    Vec t = 2.0 * x;
    CHECK(t[2] == -6.0);
}

TEST_CASE("solve recovers a known solution") {
    // A x = b with x = (1, -2, 3) chosen up front
    Mat A(3, 3);
    double vals[9] = {2, 1, -1, -3, -1, 2, -2, 1, 2};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) A(i, j) = vals[3 * i + j];
    Vec x_true{1.0, -2.0, 3.0};
    Vec b = matvec(A, x_true);
    Vec x = solve(A, b);
    for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(x_true[i]).epsilon(1e-12));
}

TEST_CASE("solve throws on singular input") {
    Mat A(2, 2);
    A(0, 0) = 1; A(0, 1) = 2;
    A(1, 0) = 2; A(1, 1) = 4;
    CHECK_THROWS_AS(solve(A, Vec{1.0, 1.0}), std::runtime_error);
}

TEST_CASE("inverse and determinant agree with cofactor arithmetic") {
    Mat A(2, 2);
    A(0, 0) = 3; A(0, 1) = 1;
    A(1, 0) = 2; A(1, 1) = 5;
    CHECK(det(A) == doctest::Approx(13.0));
    Mat Ai = inverse(A);
    CHECK(Ai(0, 0) == doctest::Approx(5.0 / 13.0));
    CHECK(Ai(0, 1) == doctest::Approx(-1.0 / 13.0));
    CHECK(Ai(1, 0) == doctest::Approx(-2.0 / 13.0));
    CHECK(Ai(1, 1) == doctest::Approx(3.0 / 13.0));
    Mat P = matmul(A, Ai);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(P(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
}

TEST_CASE("symmetric eigenvalues of a conjugated diagonal matrix") {
    // Q diag(1, 4, 9) Q^T with Q a rotation in the (0,1) plane composed with (1,2)
    const double c = std::cos(0.7), s = std::sin(0.7);
    Mat Q1 = Mat::identity(3);
    Q1(0, 0) = c; Q1(0, 1) = -s; Q1(1, 0) = s; Q1(1, 1) = c;
    const double c2 = std::cos(-0.4), s2 = std::sin(-0.4);
    Mat Q2 = Mat::identity(3);
    Q2(1, 1) = c2; Q2(1, 2) = -s2; Q2(2, 1) = s2; Q2(2, 2) = c2;
    Mat Q = matmul(Q1, Q2);
    Mat D(3, 3);
    D(0, 0) = 1; D(1, 1) = 4; D(2, 2) = 9;
    Mat A = matmul(Q, matmul(D, transpose(Q)));
    Vec ev = sym_eigenvalues(A);
    REQUIRE(ev.size() == 3);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(ev[2] == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("smallest singular value flags rank deficiency") {
    Mat A(3, 2);
    A(0, 0) = 1; A(0, 1) = 2;
    A(1, 0) = 2; A(1, 1) = 4;
    A(2, 0) = 3; A(2, 1) = 6;  // second column = 2 * first
    CHECK(smallest_singular_value(A) == doctest::Approx(0.0).epsilon(1e-10));

    Mat B(3, 2);
    B(0, 0) = 1; B(0, 1) = 0;
    B(1, 0) = 0; B(1, 1) = 1;
    B(2, 0) = 1; B(2, 1) = 1;
    // Gram spectrum of B is {1, 3}
    CHECK(smallest_singular_value(B) == doctest::Approx(1.0).epsilon(1e-12));
}
