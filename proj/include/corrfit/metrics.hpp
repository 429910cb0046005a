#pragma once

#include <optional>
#include <string>
#include <vector>

#include "corrfit/corr.hpp"
#include "corrfit/matrix.hpp"
#include "corrfit/methods.hpp"

namespace corrfit {

struct FitReport {
    Method method = Method::pca;
    std::size_t rank = 0;
    double delta = 0.0;
    double rmse_offdiag = 0.0;
    double rmse_withdiag = 0.0;
    std::vector<std::string> labels;
    std::vector<double> rmse_per_variable;
    std::optional<double> gof_data;
    std::optional<double> gof_corr;
    std::size_t iterations = 0;
    bool converged = true;
};

// Root mean squared error over the p(p-1)/2 distinct off-diagonal entries.
double rmse_offdiag(const CorrMatrix& r, const Matrix& fitted);

// RMSE over the full matrix (all p^2 cells, so off-diagonal pairs count
// twice); this is the convention behind the reference with-diagonal values.
double rmse_with_diag(const CorrMatrix& r, const Matrix& fitted);

// RMSE of row i over entries (i,j); include_diag selects whether j == i is
// averaged in (the PCA table convention) or left out (the WALS convention).
std::vector<double> rmse_per_variable(const CorrMatrix& r, const Matrix& fitted,
                                      bool include_diag);

// (lambda_1^2 + ... + lambda_k^2) / sum of all squared eigenvalues.
double gof_corr_squared_eigs(const CorrMatrix& r, std::size_t k);

// (lambda_1 + ... + lambda_k) / p; the trace identity makes the denominator
// exact.
double gof_data_eigs(const CorrMatrix& r, std::size_t k);

// Regression of standardized data onto biplot coordinates g:
// 1 - |Xs - F g'|_F^2 / |Xs|_F^2 with F = Xs g (g'g)^-1.
double gof_data_regression(const Matrix& xs, const Matrix& g);

// Whether a method's per-variable RMSE conventionally includes the diagonal.
bool method_includes_diagonal(Method m);

FitReport build_fit_report(Method method, const CorrMatrix& r, const Matrix& fitted,
                           std::size_t rank, double delta, std::size_t iterations,
                           bool converged, std::optional<double> gof_data = std::nullopt,
                           std::optional<double> gof_corr = std::nullopt);

}  // namespace corrfit
