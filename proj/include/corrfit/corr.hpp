#pragma once

#include <string>
#include <vector>

#include "corrfit/matrix.hpp"

namespace corrfit {

// A validated p x p correlation matrix: symmetric, unit diagonal, all
// off-diagonal entries in [-1, 1]. Construction is the only gate; once built
// the invariants hold exactly (diagonal forced to 1, symmetry averaged in).
class CorrMatrix {
public:
    CorrMatrix(Matrix values, std::vector<std::string> labels = {});

    std::size_t size() const { return values_.rows(); }
    const Matrix& values() const { return values_; }
    const std::vector<std::string>& labels() const { return labels_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

    // index of a variable by label; throws if unknown
    std::size_t index_of(const std::string& label) const;

private:
    Matrix values_;
    std::vector<std::string> labels_;
};

// Pearson correlations of an n x p data matrix, standardizing with divisor n.
// Requires n >= 2 and a nonzero standard deviation in every column.
CorrMatrix correlation_from_data(const Matrix& x, std::vector<std::string> labels = {});

// H R H with H = I - (1/p) 11'. Row and column sums of the result are zero;
// for a valid correlation matrix it is positive semidefinite of rank <= p-1.
Matrix double_center(const CorrMatrix& r);

std::vector<std::string> default_labels(std::size_t p);

}  // namespace corrfit
