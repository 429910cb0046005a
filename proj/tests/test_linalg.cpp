#include <doctest.h>

#include <cmath>

#include "corrfit/corr.hpp"
#include "corrfit/errors.hpp"
#include "corrfit/io.hpp"
#include "corrfit/linalg.hpp"
#include "support.hpp"

using namespace corrfit;

namespace {

// |V'V - I|_max and |V D V' - M|_max
void check_eigen_bounds(const Matrix& m, const EigenDecomposition& d) {
    const std::size_t n = m.rows();
    const Matrix vtv = d.eigenvectors.transpose() * d.eigenvectors;
    CHECK(test::max_abs_diff(vtv, Matrix::identity(n)) < 1e-10);

    Matrix vd(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) vd(i, j) = d.eigenvectors(i, j) * d.eigenvalues[j];
    const Matrix rec = vd * d.eigenvectors.transpose();
    CHECK(test::max_abs_diff(rec, m) < 1e-10 * (1.0 + m.max_abs()));

    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(d.eigenvalues[i] >= d.eigenvalues[i + 1]);
}

}  // namespace

TEST_CASE("eigen_symmetric identity") {
    const EigenDecomposition d = eigen_symmetric(Matrix::identity(3));
    for (double l : d.eigenvalues) CHECK(l == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(test::max_abs_diff(d.eigenvectors, Matrix::identity(3)) == 0.0);
}

TEST_CASE("eigen_symmetric 2x2 closed form") {
    const EigenDecomposition d = eigen_symmetric(Matrix(2, 2, {1, 0.5, 0.5, 1}));
    CHECK(d.eigenvalues[0] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(d.eigenvalues[1] == doctest::Approx(0.5).epsilon(1e-14));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(d.eigenvectors(0, 0) == doctest::Approx(s));
    CHECK(d.eigenvectors(1, 0) == doctest::Approx(s));
    // sign convention: tie on magnitude resolved by the lowest index
    CHECK(d.eigenvectors(0, 1) == doctest::Approx(s));
    CHECK(d.eigenvectors(1, 1) == doctest::Approx(-s));
}

TEST_CASE("eigen_symmetric heart eigenvalue shares") {
    const CorrMatrix heart = heart_correlation();
    const EigenDecomposition d = eigen_symmetric(heart.values());
    CHECK(std::abs(d.eigenvalues[0] / 7.0 - 0.560) < 1e-3);
    CHECK(std::abs(d.eigenvalues[1] / 7.0 - 0.176) < 1e-3);
    double sum = 0.0;
    for (double l : d.eigenvalues) sum += l;
    CHECK(sum == doctest::Approx(7.0).epsilon(1e-12));  // trace identity
}

TEST_CASE("eigen_symmetric validation") {
    CHECK_THROWS_AS(eigen_symmetric(Matrix(2, 3)), validation_error);
    Matrix bad(2, 2, {1, 0.3, 0.1, 1});
    CHECK_THROWS_WITH_AS(eigen_symmetric(bad), doctest::Contains("(0,1)"), validation_error);
    Matrix nan(2, 2, {1, 0, 0, std::numeric_limits<double>::quiet_NaN()});
    CHECK_THROWS_AS(eigen_symmetric(nan), validation_error);
}

TEST_CASE("eigen_symmetric random reconstruction bounds") {
    std::mt19937_64 gen(11);
    for (std::size_t n : {2, 5, 12, 20}) {
        const Matrix m = test::random_symmetric(gen, n);
        check_eigen_bounds(m, eigen_symmetric(m));
    }
    check_eigen_bounds(Matrix(4, 4), eigen_symmetric(Matrix(4, 4)));  // zero matrix
}

TEST_CASE("svd_thin diagonal case") {
    const SvdThin s = svd_thin(Matrix(2, 2, {3, 0, 0, 2}));
    CHECK(s.singular_values[0] == doctest::Approx(3).epsilon(1e-14));
    CHECK(s.singular_values[1] == doctest::Approx(2).epsilon(1e-14));
    CHECK(test::max_abs_diff(s.u, Matrix::identity(2)) < 1e-12);
    CHECK(test::max_abs_diff(s.v, Matrix::identity(2)) < 1e-12);
}

TEST_CASE("svd_thin reconstruction, tall and wide") {
    std::mt19937_64 gen(7);
    for (auto [n, p] : {std::pair<std::size_t, std::size_t>{9, 4}, {4, 9}}) {
        const Matrix x = test::random_matrix(gen, n, p);
        const SvdThin s = svd_thin(x);
        const std::size_t r = std::min(n, p);
        Matrix us(n, r);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r; ++j) us(i, j) = s.u(i, j) * s.singular_values[j];
        CHECK(test::max_abs_diff(us * s.v.transpose(), x) < 1e-9 * x.max_abs());
        for (std::size_t j = 0; j + 1 < r; ++j)
            CHECK(s.singular_values[j] >= s.singular_values[j + 1]);
        CHECK(s.singular_values[r - 1] >= 0.0);
        CHECK(test::max_abs_diff(s.u.transpose() * s.u, Matrix::identity(r)) < 1e-9);
        CHECK(test::max_abs_diff(s.v.transpose() * s.v, Matrix::identity(r)) < 1e-9);
    }
}

TEST_CASE("svd_thin zero singular values get zero left columns") {
    // rank-1 3x2 matrix
    const Matrix x(3, 2, {1, 2, 2, 4, 3, 6});
    const SvdThin s = svd_thin(x);
    CHECK(s.singular_values[1] == 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(s.u(i, 1) == 0.0);
    Matrix us(3, 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) us(i, j) = s.u(i, j) * s.singular_values[j];
    CHECK(test::max_abs_diff(us * s.v.transpose(), x) < 1e-9);
}

TEST_CASE("svd of scaled standardized data matches correlation eigenvalues") {
    std::mt19937_64 gen(21);
    const std::size_t n = 40, p = 5;
    const Matrix raw = test::random_matrix(gen, n, p);
    const CorrMatrix r = correlation_from_data(raw);

    // standardize with divisor n and scale by 1/sqrt(n)
    Matrix xs(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0, var = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += raw(i, j);
        mean /= n;
        for (std::size_t i = 0; i < n; ++i) var += (raw(i, j) - mean) * (raw(i, j) - mean);
        const double sd = std::sqrt(var / n);
        for (std::size_t i = 0; i < n; ++i)
            xs(i, j) = (raw(i, j) - mean) / (sd * std::sqrt(static_cast<double>(n)));
    }
    const SvdThin s = svd_thin(xs);
    const EigenDecomposition d = eigen_symmetric(r.values());
    for (std::size_t j = 0; j < p; ++j)
        CHECK(s.singular_values[j] * s.singular_values[j] ==
              doctest::Approx(d.eigenvalues[j]).epsilon(1e-8));
}
