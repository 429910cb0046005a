#include "corrfit/corr.hpp"

#include <algorithm>
#include <cmath>

#include "corrfit/errors.hpp"

namespace corrfit {

std::vector<std::string> default_labels(std::size_t p) {
    std::vector<std::string> out(p);
    for (std::size_t i = 0; i < p; ++i) out[i] = "V" + std::to_string(i + 1);
    return out;
}

CorrMatrix::CorrMatrix(Matrix values, std::vector<std::string> labels)
    : values_(std::move(values)), labels_(std::move(labels)) {
    const std::size_t p = values_.rows();
    if (p == 0 || values_.cols() != p)
        throw validation_error("correlation matrix must be square and nonempty, got " +
                               std::to_string(values_.rows()) + "x" +
                               std::to_string(values_.cols()));
    if (labels_.empty()) labels_ = default_labels(p);
    if (labels_.size() != p)
        throw validation_error("correlation matrix has " + std::to_string(p) + " variables but " +
                               std::to_string(labels_.size()) + " labels");
    if (!values_.all_finite()) throw validation_error("correlation matrix has a non-finite entry");

    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            if (std::abs(values_(i, j) - values_(j, i)) > 1e-12)
                throw validation_error("correlation matrix asymmetric at (" + labels_[i] + "," +
                                       labels_[j] + "): " + std::to_string(values_(i, j)) +
                                       " vs " + std::to_string(values_(j, i)));
            const double avg = 0.5 * (values_(i, j) + values_(j, i));
            if (std::abs(avg) > 1.0 + 1e-12)
                throw validation_error("correlation (" + labels_[i] + "," + labels_[j] +
                                       ") = " + std::to_string(avg) + " outside [-1, 1]");
            const double clamped = std::clamp(avg, -1.0, 1.0);
            values_(i, j) = clamped;
            values_(j, i) = clamped;
        }
    for (std::size_t i = 0; i < p; ++i) {
        if (std::abs(values_(i, i) - 1.0) > 1e-8)
            throw validation_error("diagonal entry for " + labels_[i] + " is " +
                                   std::to_string(values_(i, i)) + ", expected 1");
        values_(i, i) = 1.0;
    }
}

std::size_t CorrMatrix::index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw validation_error("unknown variable: " + label);
    return static_cast<std::size_t>(it - labels_.begin());
}

CorrMatrix correlation_from_data(const Matrix& x, std::vector<std::string> labels) {
    const std::size_t n = x.rows(), p = x.cols();
    if (n < 2) throw validation_error("correlation needs at least 2 observations, got " +
                                      std::to_string(n));
    if (p < 2) throw validation_error("correlation needs at least 2 variables, got " +
                                      std::to_string(p));
    if (!x.all_finite()) throw validation_error("data matrix has a non-finite entry");
    if (labels.empty()) labels = default_labels(p);

    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) mean[j] += x(i, j);
        mean[j] /= static_cast<double>(n);
    }
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x(i, j) - mean[j];
            s += d * d;
        }
        sd[j] = std::sqrt(s / static_cast<double>(n));
        if (sd[j] == 0.0)
            throw validation_error("column " + labels[j] + " is constant; correlation undefined");
    }

    Matrix r(p, p);
    for (std::size_t a = 0; a < p; ++a) {
        r(a, a) = 1.0;
        for (std::size_t b = a + 1; b < p; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += (x(i, a) - mean[a]) * (x(i, b) - mean[b]);
            const double rab = std::clamp(s / (static_cast<double>(n) * sd[a] * sd[b]), -1.0, 1.0);
            r(a, b) = rab;
            r(b, a) = rab;
        }
    }
    return CorrMatrix(std::move(r), std::move(labels));
}

Matrix double_center(const CorrMatrix& r) {
    const std::size_t p = r.size();
    const Matrix& m = r.values();
    std::vector<double> rowmean(p, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) rowmean[i] += m(i, j);
        total += rowmean[i];
        rowmean[i] /= static_cast<double>(p);
    }
    total /= static_cast<double>(p * p);

    Matrix out(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
            out(i, j) = m(i, j) - rowmean[i] - rowmean[j] + total;
    return out;
}

}  // namespace corrfit
