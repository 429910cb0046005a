#include "corrfit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corrfit/errors.hpp"

namespace corrfit {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw validation_error("matrix entry count " + std::to_string(data_.size()) +
                               " does not match " + std::to_string(rows_) + "x" +
                               std::to_string(cols_));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 1.0); }

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::column(std::size_t j) const {
    Matrix c(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double x : data_) s += x * x;
    return std::sqrt(s);
}

double Matrix::max_asymmetry() const {
    double m = 0.0;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw validation_error("matrix product shape mismatch: " + std::to_string(a.rows()) +
                               "x" + std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                               "x" + std::to_string(b.cols()));
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (!same_shape(a, b)) throw validation_error("matrix sum shape mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (!same_shape(a, b)) throw validation_error("matrix difference shape mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

bool same_shape(const Matrix& a, const Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
}

}  // namespace corrfit
