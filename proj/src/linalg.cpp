#include "corrfit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "corrfit/errors.hpp"

namespace corrfit {

namespace {

double offdiag_frobenius(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Flip column j of v so its largest-magnitude entry is positive; the first
// index wins ties, which keeps the convention deterministic.
void apply_sign_convention(Matrix& v, std::size_t j) {
    std::size_t arg = 0;
    double best = std::abs(v(0, j));
    for (std::size_t i = 1; i < v.rows(); ++i) {
        const double a = std::abs(v(i, j));
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (v(arg, j) < 0.0)
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = -v(i, j);
}

}  // namespace

EigenDecomposition eigen_symmetric(const Matrix& m) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n)
        throw validation_error("eigen_symmetric: matrix is " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()) + ", expected square");
    if (!m.all_finite()) throw validation_error("eigen_symmetric: non-finite entry");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12)
                throw validation_error("eigen_symmetric: asymmetric at (" + std::to_string(i) +
                                       "," + std::to_string(j) + "): " + std::to_string(m(i, j)) +
                                       " vs " + std::to_string(m(j, i)));

    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const double tol = 1e-14 * a.frobenius_norm();

    bool done = offdiag_frobenius(a) <= tol;
    for (int sweep = 0; sweep < 100 && !done; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle chosen to zero a(p,q); the t formula keeps
                // |t| <= 1 so the rotation is numerically gentle.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(p, i) = a(i, p);
                    a(i, q) = s * aip + c * aiq;
                    a(q, i) = a(i, q);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
        done = offdiag_frobenius(a) <= tol;
    }
    if (!done) throw convergence_error("eigen_symmetric: Jacobi failed to converge in 100 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition d;
    d.eigenvalues.resize(n);
    d.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        d.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) d.eigenvectors(i, j) = v(i, order[j]);
        apply_sign_convention(d.eigenvectors, j);
    }
    return d;
}

SvdThin svd_thin(const Matrix& x) {
    if (x.rows() == 0 || x.cols() == 0) throw validation_error("svd_thin: empty matrix");
    if (!x.all_finite()) throw validation_error("svd_thin: non-finite entry");

    const std::size_t n = x.rows(), p = x.cols();
    const bool tall = n >= p;
    const std::size_t r = tall ? p : n;

    // Gram matrix of the shorter side; symmetrize away round-off before
    // handing it to the eigensolver.
    const Matrix xt = x.transpose();
    Matrix gram = tall ? xt * x : x * xt;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            const double avg = 0.5 * (gram(i, j) + gram(j, i));
            gram(i, j) = avg;
            gram(j, i) = avg;
        }
    const EigenDecomposition eig = eigen_symmetric(gram);

    SvdThin out;
    out.singular_values.resize(r);
    double smax = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
        out.singular_values[j] = std::sqrt(std::max(eig.eigenvalues[j], 0.0));
        smax = std::max(smax, out.singular_values[j]);
    }
    const double zero_tol = 1e-13 * (1.0 + smax);

    if (tall) {
        out.v = eig.eigenvectors;
        out.u = Matrix(n, r);
        for (std::size_t j = 0; j < r; ++j) {
            const double s = out.singular_values[j];
            if (s <= zero_tol) {
                out.singular_values[j] = std::max(out.singular_values[j], 0.0);
                continue;  // zero column
            }
            for (std::size_t i = 0; i < n; ++i) {
                double dot = 0.0;
                for (std::size_t k = 0; k < p; ++k) dot += x(i, k) * eig.eigenvectors(k, j);
                out.u(i, j) = dot / s;
            }
        }
    } else {
        out.u = eig.eigenvectors;
        out.v = Matrix(p, r);
        for (std::size_t j = 0; j < r; ++j) {
            const double s = out.singular_values[j];
            if (s <= zero_tol) continue;
            for (std::size_t i = 0; i < p; ++i) {
                double dot = 0.0;
                for (std::size_t k = 0; k < n; ++k) dot += x(k, i) * eig.eigenvectors(k, j);
                out.v(i, j) = dot / s;
            }
            // the convention lives on V; re-orient U to match
            std::size_t arg = 0;
            double best = std::abs(out.v(0, j));
            for (std::size_t i = 1; i < p; ++i)
                if (std::abs(out.v(i, j)) > best) {
                    best = std::abs(out.v(i, j));
                    arg = i;
                }
            if (out.v(arg, j) < 0.0) {
                for (std::size_t i = 0; i < p; ++i) out.v(i, j) = -out.v(i, j);
                for (std::size_t i = 0; i < n; ++i) out.u(i, j) = -out.u(i, j);
            }
        }
    }
    return out;
}

}  // namespace corrfit
