#pragma once

#include <vector>

#include "corrfit/matrix.hpp"

namespace corrfit {

// Spectral decomposition M = V diag(eigenvalues) V'. Eigenvalues are sorted
// non-increasing; each eigenvector's largest-magnitude component is positive
// (ties broken by lowest index) so repeated runs give identical output.
struct EigenDecomposition {
    std::vector<double> eigenvalues;
    Matrix eigenvectors;  // columns
};

// Cyclic Jacobi. Input must be square, symmetric within 1e-12 and finite;
// stops when the off-diagonal Frobenius norm drops below 1e-14 x the initial
// Frobenius norm, with a failsafe at 100 sweeps.
EigenDecomposition eigen_symmetric(const Matrix& m);

// Thin SVD x = u diag(s) v', s non-negative non-increasing, computed through
// the Gram matrix of the shorter side. Exactly zero singular values get zero
// columns on the recovered side.
struct SvdThin {
    Matrix u;
    std::vector<double> singular_values;
    Matrix v;
};

SvdThin svd_thin(const Matrix& x);

}  // namespace corrfit
