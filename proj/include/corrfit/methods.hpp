#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrfit/corr.hpp"
#include "corrfit/errors.hpp"
#include "corrfit/matrix.hpp"

namespace corrfit {

enum class Method {
    pca,
    pca_cos,
    crg,
    mds,
    pfa,
    wals,
    wals_adj,
    pca_adj,
};

std::string to_string(Method m);
Method method_from_string(const std::string& name);

// A scalar-product approximation delta*J + G G' of a correlation matrix.
// loss_history records the objective after every sweep of an iterative fit
// (the first entry is the value at the starting point).
struct LowRankFit {
    Method method = Method::pca;
    std::size_t rank = 0;
    std::vector<std::string> labels;
    Matrix coords;  // G, p x k
    double delta = 0.0;
    Matrix fitted;  // p x p, equals delta*J + G G' for scalar-product methods
    std::size_t iterations = 0;
    double final_loss = 0.0;
    bool converged = true;
    std::vector<double> loss_history;
};

// Correlogram solution: variable j sits at angle theta[j] on the unit circle,
// theta[0] pinned to the x axis.
struct AngleFit {
    std::vector<std::string> labels;
    std::vector<double> theta;  // radians in [0, 2*pi), theta[0] == 0
    double loss = 0.0;          // squared Frobenius distance R - C(theta)
    std::size_t restarts_used = 0;
    std::size_t iterations = 0;  // line-search iterations of the winning restart
    bool converged = true;
};

struct FactorSolution {
    std::vector<std::string> labels;
    Matrix loadings;  // L, p x k
    std::vector<double> psi;
    std::vector<double> communalities;  // clipped to [0, 1]
    std::size_t iterations = 0;
    bool converged = true;
    bool communality_clipped = false;  // some iterate hit the [0,1] bounds
    Matrix fitted;                     // L L'
};

struct MdsFit {
    std::vector<std::string> labels;
    Matrix coords;               // p x k principal coordinates
    Matrix fitted_distances;     // p x p
    Matrix fitted_correlations;  // 1 - d^2/2, unit diagonal by construction
    std::vector<double> eigenvalues;  // of the double-centered matrix, all p
    bool negative_eigenvalue_clipped = false;
};

// Thrown when PFA hits its iteration cap; carries the last iterate.
class pfa_convergence_error : public convergence_error {
public:
    pfa_convergence_error(const std::string& what, FactorSolution last)
        : convergence_error(what), last_iterate(std::move(last)) {}
    FactorSolution last_iterate;
};

// Truncated spectral decomposition: G = V_k D^(1/2). Throws a validation
// error if k exceeds the number of eigenvalues above 1e-12.
LowRankFit pca_fit(const CorrMatrix& r, std::size_t rank);

// Cosines between the rows of fit.coords; errors on a zero-length row.
Matrix pca_cosine_matrix(const LowRankFit& fit);

// Alternates the closed-form delta (mean of all p^2 residuals) with the
// truncated spectral decomposition of R - delta*J.
LowRankFit pca_adjusted_fit(const CorrMatrix& r, std::size_t rank);

double correlogram_loss(const std::vector<double>& theta, const CorrMatrix& r);
std::vector<double> correlogram_gradient(const std::vector<double>& theta, const CorrMatrix& r);
Matrix correlogram_cosine_matrix(const std::vector<double>& theta);

// Multistart gradient descent on the cosine loss. Restart 0 starts from the
// PCA rank-2 angles, the rest from seeded uniform draws; deterministic for a
// given seed.
AngleFit correlogram_fit(const CorrMatrix& r, std::size_t restarts = 20,
                         std::uint64_t seed = 42);

// Classical scaling of the double-centered matrix; fitted correlations come
// from the distance back-transform 1 - d^2/2. Requires 1 <= k <= p-1.
MdsFit mds_fit(const CorrMatrix& r, std::size_t rank);

// Iterated spectral decomposition of the reduced correlation matrix, starting
// from squared multiple correlations. Throws convergence_error after 1000
// iterations; the last iterate rides along in the exception.
FactorSolution pfa_fit(const CorrMatrix& r, std::size_t rank);

// Weighted alternating least squares (criss-cross row regressions) followed
// by the posterior spectral symmetrization of A B'.
LowRankFit wals_fit(const CorrMatrix& r, std::size_t rank, const Matrix& weights);
LowRankFit wals_fit(const CorrMatrix& r, std::size_t rank);  // W = J - I

// WALS with the scalar adjustment: each sweep updates delta (weighted mean of
// the off-diagonal residuals), then the rows of A, then the rows of B.
LowRankFit wals_adjusted_fit(const CorrMatrix& r, std::size_t rank);

// Off-diagonal weight matrix J - I.
Matrix offdiag_weights(std::size_t p);

}  // namespace corrfit
