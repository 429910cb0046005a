#include "corrfit/methods.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "corrfit/linalg.hpp"

namespace corrfit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// uniform double in [0, 1) straight from the generator's bits, so the draw
// sequence does not depend on the standard library's distribution internals
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// G = V_k diag(sqrt(max(lambda, 0)))
Matrix scaled_top_vectors(const EigenDecomposition& eig, std::size_t k) {
    const std::size_t p = eig.eigenvectors.rows();
    Matrix g(p, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double s = std::sqrt(std::max(eig.eigenvalues[j], 0.0));
        for (std::size_t i = 0; i < p; ++i) g(i, j) = s * eig.eigenvectors(i, j);
    }
    return g;
}

double frobenius_sq(const Matrix& a) {
    double s = 0.0;
    for (double x : a.data()) s += x * x;
    return s;
}

Matrix gram_product(const Matrix& g) {  // G G'
    const std::size_t p = g.rows(), k = g.cols();
    Matrix f(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l) s += g(i, l) * g(j, l);
            f(i, j) = s;
            f(j, i) = s;
        }
    return f;
}

// Minimum-norm solution of the symmetric PSD system m x = rhs. The system is
// always consistent here (m and rhs come from the same weighted Gram), so
// dropping null directions is exact, not an approximation.
std::vector<double> solve_psd_eigen(const Matrix& m, const std::vector<double>& rhs) {
    const std::size_t k = m.rows();
    const EigenDecomposition eig = eigen_symmetric(m);
    const double lmax = std::max(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0], 0.0);
    const double tol = 1e-12 * std::max(lmax, 1.0);
    std::vector<double> x(k, 0.0);
    for (std::size_t l = 0; l < k; ++l) {
        if (eig.eigenvalues[l] <= tol) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < k; ++i) proj += eig.eigenvectors(i, l) * rhs[i];
        proj /= eig.eigenvalues[l];
        for (std::size_t i = 0; i < k; ++i) x[i] += proj * eig.eigenvectors(i, l);
    }
    return x;
}

// Cholesky for the well-conditioned bulk of the row updates; a failing pivot
// hands the system to the minimum-norm eigen path.
std::vector<double> solve_psd(const Matrix& m, const std::vector<double>& rhs) {
    const std::size_t k = m.rows();
    double dmax = 0.0;
    for (std::size_t i = 0; i < k; ++i) dmax = std::max(dmax, m(i, i));
    const double pivot_tol = 1e-12 * std::max(dmax, 1.0);

    Matrix l(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t c = 0; c < j; ++c) s -= l(i, c) * l(j, c);
            if (i == j) {
                if (s <= pivot_tol) return solve_psd_eigen(m, rhs);
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    std::vector<double> y(k), x(k);
    for (std::size_t i = 0; i < k; ++i) {
        double s = rhs[i];
        for (std::size_t c = 0; c < i; ++c) s -= l(i, c) * y[c];
        y[i] = s / l(i, i);
    }
    for (std::size_t ii = k; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t c = ii + 1; c < k; ++c) s -= l(c, ii) * x[c];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

double wals_loss(const CorrMatrix& r, const Matrix& w, const Matrix& a, const Matrix& b,
                 double delta) {
    const std::size_t p = r.size(), k = a.cols();
    double s = 0.0;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            if (w(i, j) == 0.0) continue;
            double ab = 0.0;
            for (std::size_t l = 0; l < k; ++l) ab += a(i, l) * b(j, l);
            const double d = r(i, j) - delta - ab;
            s += w(i, j) * d * d;
        }
    return s;
}

void check_weights(const CorrMatrix& r, const Matrix& w) {
    const std::size_t p = r.size();
    if (w.rows() != p || w.cols() != p)
        throw validation_error("weight matrix is " + std::to_string(w.rows()) + "x" +
                               std::to_string(w.cols()) + ", expected " + std::to_string(p) +
                               "x" + std::to_string(p));
    if (!w.all_finite()) throw validation_error("weight matrix has a non-finite entry");
    if (w.max_asymmetry() > 1e-12) throw validation_error("weight matrix is not symmetric");
    for (double x : w.data())
        if (x < 0.0) throw validation_error("weight matrix has a negative entry");
    for (std::size_t i = 0; i < p; ++i) {
        bool any = false;
        for (std::size_t j = 0; j < p; ++j)
            if (w(i, j) != 0.0) any = true;
        if (!any)
            throw validation_error("degenerate weights: row " + r.labels()[i] + " is all zero");
    }
}

struct WalsCore {
    Matrix a, b;
    double delta = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> history;
};

WalsCore wals_iterate(const CorrMatrix& r, std::size_t k, const Matrix& w, bool with_delta) {
    const std::size_t p = r.size();
    const EigenDecomposition eig = eigen_symmetric(r.values());
    WalsCore core;
    core.a = scaled_top_vectors(eig, k);
    core.b = core.a;

    double wsum = 0.0;
    for (double x : w.data()) wsum += x;

    double lold = wals_loss(r, w, core.a, core.b, core.delta);
    core.history.push_back(lold);

    constexpr std::size_t kMaxIter = 20000;
    std::vector<double> rhs(k);
    Matrix normal(k, k);
    for (std::size_t it = 0; it < kMaxIter; ++it) {
        ++core.iterations;
        if (with_delta) {
            double s = 0.0;
            for (std::size_t i = 0; i < p; ++i)
                for (std::size_t j = 0; j < p; ++j) {
                    if (w(i, j) == 0.0) continue;
                    double ab = 0.0;
                    for (std::size_t l = 0; l < k; ++l) ab += core.a(i, l) * core.b(j, l);
                    s += w(i, j) * (r(i, j) - ab);
                }
            core.delta = s / wsum;
        }
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t l = 0; l < k; ++l) {
                rhs[l] = 0.0;
                for (std::size_t m = 0; m < k; ++m) normal(l, m) = 0.0;
            }
            for (std::size_t j = 0; j < p; ++j) {
                const double wij = w(i, j);
                if (wij == 0.0) continue;
                const double resid = r(i, j) - core.delta;
                for (std::size_t l = 0; l < k; ++l) {
                    rhs[l] += wij * resid * core.b(j, l);
                    for (std::size_t m = l; m < k; ++m)
                        normal(l, m) += wij * core.b(j, l) * core.b(j, m);
                }
            }
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t m = 0; m < l; ++m) normal(l, m) = normal(m, l);
            const std::vector<double> ai = solve_psd(normal, rhs);
            for (std::size_t l = 0; l < k; ++l) core.a(i, l) = ai[l];
        }
        for (std::size_t j = 0; j < p; ++j) {
            for (std::size_t l = 0; l < k; ++l) {
                rhs[l] = 0.0;
                for (std::size_t m = 0; m < k; ++m) normal(l, m) = 0.0;
            }
            for (std::size_t i = 0; i < p; ++i) {
                const double wij = w(i, j);
                if (wij == 0.0) continue;
                const double resid = r(i, j) - core.delta;
                for (std::size_t l = 0; l < k; ++l) {
                    rhs[l] += wij * resid * core.a(i, l);
                    for (std::size_t m = l; m < k; ++m)
                        normal(l, m) += wij * core.a(i, l) * core.a(i, m);
                }
            }
            for (std::size_t l = 0; l < k; ++l)
                for (std::size_t m = 0; m < l; ++m) normal(l, m) = normal(m, l);
            const std::vector<double> bj = solve_psd(normal, rhs);
            for (std::size_t l = 0; l < k; ++l) core.b(j, l) = bj[l];
        }
        const double l = wals_loss(r, w, core.a, core.b, core.delta);
        core.history.push_back(l);
        // second clause: an exact fit whose loss keeps shrinking geometrically
        // would otherwise never satisfy a relative-decrease test
        if (lold - l < 1e-12 * std::max(lold, DBL_MIN) ||
            l <= 1e-28 * (core.history.front() + DBL_MIN)) {
            core.converged = true;
            break;
        }
        lold = l;
    }
    return core;
}

// Posterior symmetrization of A B': top-k eigenpairs of (AB' + BA')/2 give
// the unique biplot coordinates G.
LowRankFit finalize_wals(const CorrMatrix& r, std::size_t k, const Matrix& w, WalsCore core,
                         Method tag) {
    const std::size_t p = r.size();
    const Matrix ab = core.a * core.b.transpose();
    Matrix s(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) s(i, j) = 0.5 * (ab(i, j) + ab(j, i));

    EigenDecomposition eig = eigen_symmetric(s);
    const double lmax = std::abs(eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0]);
    const double neg_tol = 1e-10 * (1.0 + lmax);
    for (std::size_t j = 0; j < k; ++j) {
        if (eig.eigenvalues[j] < -neg_tol)
            throw convergence_error("wals symmetrization: retained eigenvalue " +
                                    std::to_string(j + 1) + " is negative (" +
                                    std::to_string(eig.eigenvalues[j]) + ")");
        eig.eigenvalues[j] = std::max(eig.eigenvalues[j], 0.0);
    }

    LowRankFit fit;
    fit.method = tag;
    fit.rank = k;
    fit.labels = r.labels();
    fit.coords = scaled_top_vectors(eig, k);
    fit.delta = core.delta;
    const Matrix gg = gram_product(fit.coords);
    fit.fitted = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) fit.fitted(i, j) = core.delta + gg(i, j);
    fit.iterations = core.iterations;
    fit.converged = core.converged;
    fit.loss_history = std::move(core.history);
    fit.final_loss = wals_loss(r, w, fit.coords, fit.coords, core.delta);
    return fit;
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::pca: return "pca";
        case Method::pca_cos: return "pca-cos";
        case Method::crg: return "crg";
        case Method::mds: return "mds";
        case Method::pfa: return "pfa";
        case Method::wals: return "wals";
        case Method::wals_adj: return "wals-adj";
        case Method::pca_adj: return "pca-adj";
    }
    return "?";
}

Method method_from_string(const std::string& name) {
    for (Method m : {Method::pca, Method::pca_cos, Method::crg, Method::mds, Method::pfa,
                     Method::wals, Method::wals_adj, Method::pca_adj})
        if (to_string(m) == name) return m;
    throw validation_error("unknown method: " + name);
}

Matrix offdiag_weights(std::size_t p) {
    Matrix w = Matrix::ones(p, p);
    for (std::size_t i = 0; i < p; ++i) w(i, i) = 0.0;
    return w;
}

LowRankFit pca_fit(const CorrMatrix& r, std::size_t rank) {
    const std::size_t p = r.size();
    if (rank < 1 || rank > p)
        throw validation_error("pca rank must be in [1, " + std::to_string(p) + "], got " +
                               std::to_string(rank));
    const EigenDecomposition eig = eigen_symmetric(r.values());
    std::size_t positive = 0;
    for (double l : eig.eigenvalues)
        if (l > 1e-12) ++positive;
    if (rank > positive)
        throw validation_error("pca rank " + std::to_string(rank) + " exceeds the " +
                               std::to_string(positive) + " positive eigenvalues");

    LowRankFit fit;
    fit.method = Method::pca;
    fit.rank = rank;
    fit.labels = r.labels();
    fit.coords = scaled_top_vectors(eig, rank);
    fit.fitted = gram_product(fit.coords);
    fit.final_loss = frobenius_sq(r.values() - fit.fitted);
    fit.loss_history = {fit.final_loss};
    return fit;
}

Matrix pca_cosine_matrix(const LowRankFit& fit) {
    const std::size_t p = fit.coords.rows(), k = fit.coords.cols();
    std::vector<double> norm(p);
    for (std::size_t i = 0; i < p; ++i) {
        double s = 0.0;
        for (std::size_t l = 0; l < k; ++l) s += fit.coords(i, l) * fit.coords(i, l);
        norm[i] = std::sqrt(s);
        if (norm[i] <= 1e-12) {
            const std::string name =
                i < fit.labels.size() ? fit.labels[i] : "row " + std::to_string(i + 1);
            throw validation_error("degenerate vector: " + name + " has zero length");
        }
    }
    Matrix c(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        c(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t l = 0; l < k; ++l) dot += fit.coords(i, l) * fit.coords(j, l);
            c(i, j) = dot / (norm[i] * norm[j]);
            c(j, i) = c(i, j);
        }
    }
    return c;
}

LowRankFit pca_adjusted_fit(const CorrMatrix& r, std::size_t rank) {
    const std::size_t p = r.size();
    if (rank < 1 || rank > p)
        throw validation_error("pca rank must be in [1, " + std::to_string(p) + "], got " +
                               std::to_string(rank));
    const Matrix j = Matrix::ones(p, p);

    LowRankFit fit;
    fit.method = Method::pca_adj;
    fit.rank = rank;
    fit.labels = r.labels();

    double delta = 0.0;
    Matrix g = scaled_top_vectors(eigen_symmetric(r.values()), rank);
    double lold = frobenius_sq(r.values() - gram_product(g));
    fit.loss_history.push_back(lold);
    fit.converged = false;

    constexpr std::size_t kMaxIter = 20000;
    for (std::size_t it = 0; it < kMaxIter; ++it) {
        ++fit.iterations;
        // exact minimizer over delta is the mean of all p^2 residuals
        const Matrix resid = r.values() - gram_product(g);
        double s = 0.0;
        for (double x : resid.data()) s += x;
        delta = s / static_cast<double>(p * p);

        g = scaled_top_vectors(eigen_symmetric(r.values() - delta * j), rank);
        const double l = frobenius_sq(r.values() - delta * j - gram_product(g));
        fit.loss_history.push_back(l);
        if (lold - l < 1e-12 * std::max(lold, DBL_MIN) ||
            l <= 1e-28 * (fit.loss_history.front() + DBL_MIN)) {
            fit.converged = true;
            break;
        }
        lold = l;
    }

    fit.delta = delta;
    fit.coords = g;
    const Matrix gg = gram_product(g);
    fit.fitted = Matrix(p, p);
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) fit.fitted(a, b) = delta + gg(a, b);
    fit.final_loss = frobenius_sq(r.values() - fit.fitted);
    return fit;
}

double correlogram_loss(const std::vector<double>& theta, const CorrMatrix& r) {
    const std::size_t p = r.size();
    double s = 0.0;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = j + 1; k < p; ++k) {
            const double d = r(j, k) - std::cos(theta[j] - theta[k]);
            s += d * d;
        }
    return 2.0 * s;  // full Frobenius double sum; the diagonal contributes zero
}

std::vector<double> correlogram_gradient(const std::vector<double>& theta, const CorrMatrix& r) {
    const std::size_t p = r.size();
    std::vector<double> g(p, 0.0);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k) {
            if (k == j) continue;
            const double d = theta[j] - theta[k];
            g[j] += 4.0 * (std::cos(d) - r(j, k)) * (-std::sin(d));
        }
    return g;
}

Matrix correlogram_cosine_matrix(const std::vector<double>& theta) {
    const std::size_t p = theta.size();
    Matrix c(p, p);
    for (std::size_t j = 0; j < p; ++j) {
        c(j, j) = 1.0;
        for (std::size_t k = j + 1; k < p; ++k) {
            c(j, k) = std::cos(theta[j] - theta[k]);
            c(k, j) = c(j, k);
        }
    }
    return c;
}

AngleFit correlogram_fit(const CorrMatrix& r, std::size_t restarts, std::uint64_t seed) {
    const std::size_t p = r.size();
    if (p < 2) throw validation_error("correlogram needs at least 2 variables");
    if (restarts < 1) throw validation_error("correlogram needs at least 1 restart");

    // rank-2 eigenvector coordinates seed the first restart
    const EigenDecomposition eig = eigen_symmetric(r.values());
    const Matrix g0 = scaled_top_vectors(eig, std::min<std::size_t>(2, p));

    std::mt19937_64 gen(seed);
    AngleFit best;
    best.loss = std::numeric_limits<double>::infinity();
    best.restarts_used = restarts;

    std::vector<double> theta(p), candidate(p), grad(p);
    for (std::size_t restart = 0; restart < restarts; ++restart) {
        if (restart == 0) {
            for (std::size_t j = 0; j < p; ++j)
                theta[j] = std::atan2(g0.cols() > 1 ? g0(j, 1) : 0.0, g0(j, 0));
            const double base = theta[0];
            for (std::size_t j = 0; j < p; ++j) theta[j] -= base;
        } else {
            theta[0] = 0.0;
            for (std::size_t j = 1; j < p; ++j) theta[j] = kTwoPi * uniform01(gen);
        }

        double loss = correlogram_loss(theta, r);
        std::size_t iters = 0;
        bool converged = false;
        constexpr std::size_t kMaxIter = 5000;
        while (iters < kMaxIter) {
            ++iters;
            grad = correlogram_gradient(theta, r);
            grad[0] = 0.0;  // first angle stays pinned
            double gn = 0.0;
            for (double x : grad) gn += x * x;
            if (gn < 1e-24) {
                converged = true;
                break;
            }
            // backtracking with the Armijo rule
            double step = 1.0;
            double trial_loss = loss;
            bool accepted = false;
            while (step > 1e-20) {
                for (std::size_t j = 0; j < p; ++j) candidate[j] = theta[j] - step * grad[j];
                trial_loss = correlogram_loss(candidate, r);
                if (trial_loss <= loss - 1e-4 * step * gn) {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                converged = true;  // no descent direction left at double precision
                break;
            }
            theta = candidate;
            if (loss - trial_loss < 1e-12 * std::max(1.0, loss)) {
                loss = trial_loss;
                converged = true;
                break;
            }
            loss = trial_loss;
        }

        for (std::size_t j = 0; j < p; ++j) {
            theta[j] = std::fmod(theta[j], kTwoPi);
            if (theta[j] < 0.0) theta[j] += kTwoPi;
        }
        theta[0] = 0.0;

        if (loss < best.loss) {
            best.theta = theta;
            best.loss = loss;
            best.iterations = iters;
            best.converged = converged;
        }
    }
    best.labels = r.labels();
    return best;
}

MdsFit mds_fit(const CorrMatrix& r, std::size_t rank) {
    const std::size_t p = r.size();
    if (rank < 1 || rank > p - 1)
        throw validation_error("mds rank must be in [1, " + std::to_string(p - 1) + "], got " +
                               std::to_string(rank));
    const EigenDecomposition eig = eigen_symmetric(double_center(r));

    MdsFit fit;
    fit.labels = r.labels();
    fit.eigenvalues = eig.eigenvalues;
    for (std::size_t j = 0; j < rank; ++j)
        if (eig.eigenvalues[j] < 0.0) fit.negative_eigenvalue_clipped = true;
    fit.coords = scaled_top_vectors(eig, rank);

    fit.fitted_distances = Matrix(p, p);
    fit.fitted_correlations = Matrix(p, p);
    for (std::size_t i = 0; i < p; ++i) {
        fit.fitted_correlations(i, i) = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            double d2 = 0.0;
            for (std::size_t l = 0; l < rank; ++l) {
                const double d = fit.coords(i, l) - fit.coords(j, l);
                d2 += d * d;
            }
            const double d = std::sqrt(d2);
            fit.fitted_distances(i, j) = d;
            fit.fitted_distances(j, i) = d;
            fit.fitted_correlations(i, j) = 1.0 - d2 / 2.0;
            fit.fitted_correlations(j, i) = fit.fitted_correlations(i, j);
        }
    }
    return fit;
}

FactorSolution pfa_fit(const CorrMatrix& r, std::size_t rank) {
    const std::size_t p = r.size();
    if (rank < 1 || rank >= p)
        throw validation_error("pfa rank must be in [1, " + std::to_string(p - 1) + "], got " +
                               std::to_string(rank));

    const EigenDecomposition reig = eigen_symmetric(r.values());
    std::vector<double> h(p);
    if (reig.eigenvalues.back() > 1e-10) {
        // squared multiple correlations from the diagonal of R^-1
        for (std::size_t i = 0; i < p; ++i) {
            double inv_ii = 0.0;
            for (std::size_t l = 0; l < p; ++l) {
                const double v = reig.eigenvectors(i, l);
                inv_ii += v * v / reig.eigenvalues[l];
            }
            h[i] = std::clamp(1.0 - 1.0 / inv_ii, 0.0, 1.0);
        }
    } else {
        for (std::size_t i = 0; i < p; ++i) {
            double m = 0.0;
            for (std::size_t j = 0; j < p; ++j)
                if (j != i) m = std::max(m, std::abs(r(i, j)));
            h[i] = m;
        }
    }

    FactorSolution sol;
    sol.labels = r.labels();
    sol.converged = false;
    Matrix reduced = r.values();
    constexpr std::size_t kMaxIter = 1000;
    for (std::size_t it = 0; it < kMaxIter; ++it) {
        ++sol.iterations;
        for (std::size_t i = 0; i < p; ++i) reduced(i, i) = h[i];
        const EigenDecomposition eig = eigen_symmetric(reduced);
        sol.loadings = scaled_top_vectors(eig, rank);

        double max_change = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
            double hn = 0.0;
            for (std::size_t l = 0; l < rank; ++l) hn += sol.loadings(i, l) * sol.loadings(i, l);
            if (hn < 0.0 || hn > 1.0) sol.communality_clipped = true;
            hn = std::clamp(hn, 0.0, 1.0);
            max_change = std::max(max_change, std::abs(hn - h[i]));
            h[i] = hn;
        }
        if (max_change < 1e-9) {
            sol.converged = true;
            break;
        }
    }

    sol.communalities = h;
    sol.psi.resize(p);
    for (std::size_t i = 0; i < p; ++i) sol.psi[i] = 1.0 - h[i];
    sol.fitted = gram_product(sol.loadings);
    if (!sol.converged)
        throw pfa_convergence_error(
            "pfa did not converge within " + std::to_string(kMaxIter) + " iterations", sol);
    return sol;
}

LowRankFit wals_fit(const CorrMatrix& r, std::size_t rank, const Matrix& weights) {
    const std::size_t p = r.size();
    if (rank < 1 || rank >= p)
        throw validation_error("wals rank must be in [1, " + std::to_string(p - 1) + "], got " +
                               std::to_string(rank));
    check_weights(r, weights);
    WalsCore core = wals_iterate(r, rank, weights, /*with_delta=*/false);
    return finalize_wals(r, rank, weights, std::move(core), Method::wals);
}

LowRankFit wals_fit(const CorrMatrix& r, std::size_t rank) {
    return wals_fit(r, rank, offdiag_weights(r.size()));
}

LowRankFit wals_adjusted_fit(const CorrMatrix& r, std::size_t rank) {
    const std::size_t p = r.size();
    if (rank < 1 || rank >= p)
        throw validation_error("wals rank must be in [1, " + std::to_string(p - 1) + "], got " +
                               std::to_string(rank));
    const Matrix weights = offdiag_weights(p);
    check_weights(r, weights);
    WalsCore core = wals_iterate(r, rank, weights, /*with_delta=*/true);
    return finalize_wals(r, rank, weights, std::move(core), Method::wals_adj);
}

}  // namespace corrfit
