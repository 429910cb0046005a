#include <doctest.h>

#include <cmath>

#include "corrfit/errors.hpp"
#include "corrfit/io.hpp"
#include "corrfit/linalg.hpp"
#include "corrfit/methods.hpp"
#include "corrfit/metrics.hpp"
#include "support.hpp"

using namespace corrfit;

TEST_CASE("mds embeds two variables exactly") {
    const CorrMatrix r(Matrix(2, 2, {1, 0.3, 0.3, 1}));
    const MdsFit fit = mds_fit(r, 1);
    CHECK(fit.fitted_correlations(0, 1) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fit.fitted_correlations(0, 0) == 1.0);
}

TEST_CASE("mds on the heart matrix") {
    const CorrMatrix heart = heart_correlation();
    const MdsFit fit = mds_fit(heart, 2);
    CHECK(std::abs(rmse_offdiag(heart, fit.fitted_correlations) - 0.2063) < 1e-3);
    CHECK(std::abs(fit.fitted_correlations(heart.index_of("SI"), heart.index_of("CI")) - 0.941) <
          5e-3);
    CHECK(std::abs(fit.fitted_correlations(heart.index_of("DBP"), heart.index_of("PA")) - 0.998) <
          5e-3);
    CHECK(!fit.negative_eigenvalue_clipped);
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(fit.fitted_correlations(i, i) == 1.0);
        CHECK(fit.fitted_distances(i, i) == 0.0);
        for (std::size_t j = 0; j < 7; ++j) CHECK(fit.fitted_distances(i, j) >= 0.0);
    }
    CHECK(fit.fitted_distances.max_asymmetry() == 0.0);
}

TEST_CASE("mds of the identity gives the symmetric configuration") {
    const CorrMatrix eye(Matrix::identity(3));
    const MdsFit fit = mds_fit(eye, 2);

    // oracle: double-center, eigendecompose, embed
    const EigenDecomposition eig = eigen_symmetric(double_center(eye));
    Matrix coords(3, 2);
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < 3; ++i)
            coords(i, c) = std::sqrt(std::max(eig.eigenvalues[c], 0.0)) * eig.eigenvectors(i, c);
    CHECK(test::max_abs_diff(coords, fit.coords) == 0.0);

    // all pairs sit at distance sqrt(2), i.e. fitted correlation 0 == offdiag
    const double d01 = fit.fitted_correlations(0, 1);
    CHECK(std::abs(d01) < 1e-10);
    CHECK(std::abs(fit.fitted_correlations(0, 2) - d01) < 1e-10);
    CHECK(std::abs(fit.fitted_correlations(1, 2) - d01) < 1e-10);
}

TEST_CASE("mds rank validation") {
    const CorrMatrix heart = heart_correlation();
    CHECK_THROWS_AS(mds_fit(heart, 7), validation_error);
    CHECK_THROWS_AS(mds_fit(heart, 0), validation_error);
    CHECK_NOTHROW(mds_fit(heart, 6));
}

TEST_CASE("mds clips negative eigenvalues of indefinite input") {
    // not a feasible correlation structure: the double-centered matrix has
    // eigenvalues (2.47, 1.34, 0, -0.22, -0.29), so rank 4 reaches into the
    // negative spectrum
    const CorrMatrix r(Matrix(5, 5,
                              {1, .87, .37, -.69, -.12,   //
                               .87, 1, -.23, -.55, .68,   //
                               .37, -.23, 1, .68, .05,    //
                               -.69, -.55, .68, 1, .68,   //
                               -.12, .68, .05, .68, 1}));
    const MdsFit fit = mds_fit(r, 4);
    CHECK(fit.negative_eigenvalue_clipped);
    for (std::size_t i = 0; i < 5; ++i) CHECK(fit.coords(i, 3) == 0.0);
    const MdsFit fit2 = mds_fit(r, 2);
    CHECK(!fit2.negative_eigenvalue_clipped);
}
