#include <doctest.h>

#include <cmath>

#include "corrfit/errors.hpp"
#include "corrfit/io.hpp"
#include "corrfit/methods.hpp"
#include "corrfit/metrics.hpp"
#include "support.hpp"

using namespace corrfit;

TEST_CASE("pfa recovers a model-true rank-2 structure") {
    // loadings with communalities well inside [0, 0.9]
    const Matrix l0(4, 2,
                    {0.8, 0.3,   //
                     -0.6, 0.5,  //
                     0.4, -0.7,  //
                     0.5, 0.5});
    Matrix r = l0 * l0.transpose();
    for (std::size_t i = 0; i < 4; ++i) r(i, i) = 1.0;  // psi fills the diagonal
    const CorrMatrix rm(std::move(r));

    const FactorSolution sol = pfa_fit(rm, 2);
    CHECK(sol.converged);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i != j) CHECK(std::abs(sol.fitted(i, j) - rm(i, j)) < 1e-6);
}

TEST_CASE("pfa on the heart matrix reaches the reference fit") {
    const CorrMatrix heart = heart_correlation();
    const FactorSolution sol = pfa_fit(heart, 2);
    CHECK(std::abs(rmse_offdiag(heart, sol.fitted) - 0.0755) < 5e-4);
    CHECK(sol.communalities[heart.index_of("CI")] >= 0.995);  // CI reaches the unit circle
    CHECK(sol.communality_clipped);
    const std::size_t si = heart.index_of("SI"), ci = heart.index_of("CI");
    CHECK(std::abs(sol.fitted(si, ci) - 0.893) < 5e-3);
    CHECK(std::abs(sol.fitted(si, si) - 0.845) < 5e-3);
    CHECK(sol.converged);

    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(sol.communalities[i] >= 0.0);
        CHECK(sol.communalities[i] <= 1.0 + 1e-10);
        CHECK(std::abs(sol.psi[i] - (1.0 - sol.communalities[i])) < 1e-10);
    }
}

TEST_CASE("pfa of the identity finds no common variance") {
    const CorrMatrix eye(Matrix::identity(4));
    const FactorSolution sol = pfa_fit(eye, 1);
    CHECK(sol.fitted.max_abs() < 1e-12);
    CHECK(sol.loadings.max_abs() < 1e-9);
    for (double psi : sol.psi) CHECK(psi == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("pfa rank validation") {
    const CorrMatrix heart = heart_correlation();
    CHECK_THROWS_AS(pfa_fit(heart, 0), validation_error);
    CHECK_THROWS_AS(pfa_fit(heart, 7), validation_error);
}

TEST_CASE("pfa throws past the iteration cap and carries the last iterate") {
    const CorrMatrix slow = test::slow_pfa_matrix();
    try {
        pfa_fit(slow, 1);
        FAIL("expected pfa_convergence_error");
    } catch (const pfa_convergence_error& e) {
        CHECK(e.last_iterate.iterations == 1000);
        CHECK(!e.last_iterate.converged);
        CHECK(e.last_iterate.communalities.size() == 3);
        for (double h : e.last_iterate.communalities) {
            CHECK(h >= 0.0);
            CHECK(h <= 1.0);
        }
    }
}
