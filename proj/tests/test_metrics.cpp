#include <doctest.h>

#include <cmath>

#include "corrfit/errors.hpp"
#include "corrfit/io.hpp"
#include "corrfit/linalg.hpp"
#include "corrfit/methods.hpp"
#include "corrfit/metrics.hpp"
#include "support.hpp"

using namespace corrfit;

TEST_CASE("rmse of a perfect fit is zero") {
    const CorrMatrix heart = heart_correlation();
    CHECK(rmse_offdiag(heart, heart.values()) == 0.0);
    CHECK(rmse_with_diag(heart, heart.values()) == 0.0);
    for (double v : rmse_per_variable(heart, heart.values(), true)) CHECK(v == 0.0);
}

TEST_CASE("reference rmse values on the heart matrix") {
    const CorrMatrix heart = heart_correlation();
    CHECK(std::abs(rmse_offdiag(heart, wals_adjusted_fit(heart, 2).fitted) - 0.0662) < 5e-4);
    CHECK(std::abs(rmse_offdiag(heart, mds_fit(heart, 2).fitted_correlations) - 0.2063) < 1e-3);
    CHECK(std::abs(rmse_with_diag(heart, pca_fit(heart, 2).fitted) - 0.1808) < 1e-3);
}

TEST_CASE("rmse_with_diag hand-computed 2x2 case") {
    const CorrMatrix r(Matrix::identity(2));
    // fitted matches off-diagonal, misses both diagonal cells by 0.1
    const Matrix fitted(2, 2, {0.9, 0.0, 0.0, 0.9});
    CHECK(rmse_with_diag(r, fitted) ==
          doctest::Approx(std::sqrt((0.01 + 0.01 + 0.0 + 0.0) / 4.0)).epsilon(1e-14));
}

TEST_CASE("per-variable rmse respects the diagonal convention") {
    const CorrMatrix heart = heart_correlation();
    const std::vector<double> wals_ra =
        rmse_per_variable(heart, wals_adjusted_fit(heart, 2).fitted, false);
    CHECK(std::abs(wals_ra[heart.index_of("SI")] - 0.086) < 2e-3);
    const std::vector<double> pca =
        rmse_per_variable(heart, pca_fit(heart, 2).fitted, true);
    CHECK(std::abs(pca[heart.index_of("VP")] - 0.3103) < 2e-3);
}

TEST_CASE("rmse dimension mismatch") {
    const CorrMatrix heart = heart_correlation();
    CHECK_THROWS_AS(rmse_offdiag(heart, Matrix(3, 3)), validation_error);
    CHECK_THROWS_AS(rmse_with_diag(heart, Matrix(7, 3)), validation_error);
    CHECK_THROWS_AS(rmse_per_variable(heart, Matrix(6, 6), true), validation_error);
}

TEST_CASE("eigenvalue-share goodness of fit") {
    const CorrMatrix heart = heart_correlation();
    CHECK(std::abs(gof_data_eigs(heart, 2) - 0.736) < 1e-3);
    CHECK(std::abs(gof_corr_squared_eigs(heart, 2) - 0.913) < 1e-3);
    CHECK(gof_data_eigs(heart, 7) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gof_corr_squared_eigs(heart, 7) == doctest::Approx(1.0).epsilon(1e-12));

    const CorrMatrix eye(Matrix::identity(4));
    CHECK(gof_data_eigs(eye, 1) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gof_corr_squared_eigs(eye, 2) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(gof_data_eigs(heart, 0), validation_error);
    CHECK_THROWS_AS(gof_corr_squared_eigs(heart, 8), validation_error);
}

TEST_CASE("gof shares are non-decreasing in rank") {
    std::mt19937_64 gen(14);
    const CorrMatrix r = test::random_correlation(gen, 6);
    for (std::size_t k = 1; k < 6; ++k) {
        CHECK(gof_data_eigs(r, k + 1) >= gof_data_eigs(r, k) - 1e-14);
        CHECK(gof_corr_squared_eigs(r, k + 1) >= gof_corr_squared_eigs(r, k) - 1e-14);
    }
}

TEST_CASE("squared-eigenvalue share dominates the data share at rank 2") {
    std::mt19937_64 gen(15);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t p = 3 + static_cast<std::size_t>(trial % 6);
        const CorrMatrix r = test::random_correlation(gen, p);
        const EigenDecomposition eig = eigen_symmetric(r.values());
        CHECK(eig.eigenvalues[0] >= 1.0 - 1e-10);  // correlation matrices always
        if (p >= 2)
            CHECK(gof_corr_squared_eigs(r, 2) >= gof_data_eigs(r, 2) - 1e-12);
    }
}

namespace {

Matrix standardized(const Matrix& x) {
    const std::size_t n = x.rows(), p = x.cols();
    Matrix xs(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0, var = 0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= n;
        for (std::size_t i = 0; i < n; ++i) var += (x(i, j) - mean) * (x(i, j) - mean);
        const double sd = std::sqrt(var / n);
        for (std::size_t i = 0; i < n; ++i) xs(i, j) = (x(i, j) - mean) / sd;
    }
    return xs;
}

}  // namespace

TEST_CASE("regression gof equals the eigenvalue share on principal axes") {
    std::mt19937_64 gen(16);
    const Matrix x = test::random_matrix(gen, 60, 5);
    const Matrix xs = standardized(x);
    const CorrMatrix r = correlation_from_data(x);

    CHECK(std::abs(gof_data_regression(xs, pca_fit(r, 2).coords) - gof_data_eigs(r, 2)) < 1e-10);

    // coordinates spanning all of R^p explain everything
    const Matrix full = test::random_matrix(gen, 5, 5);
    CHECK(gof_data_regression(xs, full) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("wals coordinates cannot beat the principal-axis share") {
    std::mt19937_64 gen(17);
    const Matrix x = test::random_matrix(gen, 200, 5);
    const Matrix xs = standardized(x);
    const CorrMatrix r = correlation_from_data(x);
    const double wals_gof = gof_data_regression(xs, wals_fit(r, 2).coords);
    CHECK(wals_gof <= gof_data_eigs(r, 2) + 1e-10);
}

TEST_CASE("regression gof rejects rank-deficient coordinates") {
    std::mt19937_64 gen(18);
    const Matrix xs = standardized(test::random_matrix(gen, 20, 3));
    const Matrix g(3, 2, {1, 2, 2, 4, 3, 6});  // second column is twice the first
    CHECK_THROWS_AS(gof_data_regression(xs, g), validation_error);
}

TEST_CASE("fit report assembles the convention per method") {
    const CorrMatrix heart = heart_correlation();
    const LowRankFit fit = pca_fit(heart, 2);
    const FitReport rep = build_fit_report(Method::pca, heart, fit.fitted, 2, 0.0, 0, true,
                                           gof_data_eigs(heart, 2),
                                           gof_corr_squared_eigs(heart, 2));
    CHECK(rep.rmse_per_variable.size() == 7);
    CHECK(std::abs(rep.rmse_per_variable[heart.index_of("VP")] - 0.3103) < 2e-3);
    CHECK(rep.gof_data.has_value());
    CHECK(method_includes_diagonal(Method::pca));
    CHECK(method_includes_diagonal(Method::pca_adj));
    CHECK(!method_includes_diagonal(Method::wals));
    CHECK(!method_includes_diagonal(Method::mds));
}
