#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace corrfit {

// Dense row-major matrix of doubles. Sized at construction; entries are
// whatever the caller puts in them (validation happens at the API
// boundaries, not here).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static Matrix identity(std::size_t n);
    static Matrix ones(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    Matrix transpose() const;
    Matrix column(std::size_t j) const;

    bool all_finite() const;
    double max_abs() const;
    double frobenius_norm() const;
    // max_{i<j} |a_ij - a_ji|; 0 for empty/1x1
    double max_asymmetry() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

bool same_shape(const Matrix& a, const Matrix& b);

}  // namespace corrfit
