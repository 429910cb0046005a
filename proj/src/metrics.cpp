#include "corrfit/metrics.hpp"

#include <cmath>

#include "corrfit/errors.hpp"
#include "corrfit/linalg.hpp"

namespace corrfit {

namespace {

void check_shape(const CorrMatrix& r, const Matrix& fitted) {
    if (fitted.rows() != r.size() || fitted.cols() != r.size())
        throw validation_error("fitted matrix is " + std::to_string(fitted.rows()) + "x" +
                               std::to_string(fitted.cols()) + " but R has " +
                               std::to_string(r.size()) + " variables");
}

void check_rank(const CorrMatrix& r, std::size_t k) {
    if (k < 1 || k > r.size())
        throw validation_error("rank must be in [1, " + std::to_string(r.size()) + "], got " +
                               std::to_string(k));
}

}  // namespace

double rmse_offdiag(const CorrMatrix& r, const Matrix& fitted) {
    check_shape(r, fitted);
    const std::size_t p = r.size();
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            const double d = r(i, j) - fitted(i, j);
            s += d * d;
        }
    return std::sqrt(s / (0.5 * static_cast<double>(p) * static_cast<double>(p - 1)));
}

double rmse_with_diag(const CorrMatrix& r, const Matrix& fitted) {
    check_shape(r, fitted);
    const std::size_t p = r.size();
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            const double d = r(i, j) - fitted(i, j);
            s += d * d;
        }
    return std::sqrt(s / static_cast<double>(p * p));
}

std::vector<double> rmse_per_variable(const CorrMatrix& r, const Matrix& fitted,
                                      bool include_diag) {
    check_shape(r, fitted);
    const std::size_t p = r.size();
    std::vector<double> out(p);
    for (std::size_t i = 0; i < p; ++i) {
        double s = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < p; ++j) {
            if (j == i && !include_diag) continue;
            const double d = r(i, j) - fitted(i, j);
            s += d * d;
            ++count;
        }
        out[i] = std::sqrt(s / static_cast<double>(count));
    }
    return out;
}

double gof_corr_squared_eigs(const CorrMatrix& r, std::size_t k) {
    check_rank(r, k);
    const EigenDecomposition eig = eigen_symmetric(r.values());
    double top = 0.0, all = 0.0;
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i) {
        const double sq = eig.eigenvalues[i] * eig.eigenvalues[i];
        all += sq;
        if (i < k) top += sq;
    }
    return top / all;
}

double gof_data_eigs(const CorrMatrix& r, std::size_t k) {
    check_rank(r, k);
    const EigenDecomposition eig = eigen_symmetric(r.values());
    double top = 0.0;
    for (std::size_t i = 0; i < k; ++i) top += eig.eigenvalues[i];
    return top / static_cast<double>(r.size());
}

double gof_data_regression(const Matrix& xs, const Matrix& g) {
    if (xs.cols() != g.rows())
        throw validation_error("data has " + std::to_string(xs.cols()) +
                               " variables but coordinates have " + std::to_string(g.rows()) +
                               " rows");
    const std::size_t k = g.cols();

    // invert g'g; a rank-deficient g has no unique regression
    const Matrix gtg = g.transpose() * g;
    const EigenDecomposition eig = eigen_symmetric(gtg);
    if (eig.eigenvalues.back() <= 1e-12 * std::max(eig.eigenvalues.front(), 1.0))
        throw validation_error("biplot coordinates are rank deficient");
    Matrix inv(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l)
                s += eig.eigenvectors(i, l) * eig.eigenvectors(j, l) / eig.eigenvalues[l];
            inv(i, j) = s;
        }

    const Matrix f = xs * g * inv;
    const Matrix resid = xs - f * g.transpose();
    double num = 0.0, den = 0.0;
    for (double x : resid.data()) num += x * x;
    for (double x : xs.data()) den += x * x;
    return 1.0 - num / den;
}

bool method_includes_diagonal(Method m) {
    return m == Method::pca || m == Method::pca_adj || m == Method::pca_cos;
}

FitReport build_fit_report(Method method, const CorrMatrix& r, const Matrix& fitted,
                           std::size_t rank, double delta, std::size_t iterations,
                           bool converged, std::optional<double> gof_data,
                           std::optional<double> gof_corr) {
    FitReport rep;
    rep.method = method;
    rep.rank = rank;
    rep.delta = delta;
    rep.rmse_offdiag = rmse_offdiag(r, fitted);
    rep.rmse_withdiag = rmse_with_diag(r, fitted);
    rep.labels = r.labels();
    rep.rmse_per_variable = rmse_per_variable(r, fitted, method_includes_diagonal(method));
    rep.gof_data = gof_data;
    rep.gof_corr = gof_corr;
    rep.iterations = iterations;
    rep.converged = converged;
    return rep;
}

}  // namespace corrfit
