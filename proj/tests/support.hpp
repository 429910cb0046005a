#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "corrfit/corr.hpp"
#include "corrfit/matrix.hpp"

namespace corrfit::test {

// deterministic uniform/normal draws straight from the generator bits, so
// fixtures do not depend on libstdc++ distribution internals
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double normal(std::mt19937_64& gen) {
    double u1 = uniform01(gen);
    while (u1 <= 0.0) u1 = uniform01(gen);
    const double u2 = uniform01(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

inline Matrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = normal(gen);
    return m;
}

inline Matrix random_symmetric(std::mt19937_64& gen, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = 2.0 * uniform01(gen) - 1.0;
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

// correlation matrix of random gaussian data; always valid and generically
// full rank
inline CorrMatrix random_correlation(std::mt19937_64& gen, std::size_t p,
                                     std::size_t n_obs = 0) {
    const std::size_t n = n_obs == 0 ? 4 * p + 10 : n_obs;
    return correlation_from_data(random_matrix(gen, n, p));
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// scratch file path under the system temp dir, removed on destruction
class TempFile {
public:
    explicit TempFile(const std::string& name)
        : path_((std::filesystem::temp_directory_path() /
                 ("corrfit_" + std::to_string(counter_++) + "_" + name))
                    .string()) {}
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path_, ec);
    }
    const std::string& path() const { return path_; }
    void write(const std::string& text) const {
        std::ofstream out(path_);
        out << text;
    }
    std::string read() const {
        std::ifstream in(path_, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

private:
    static inline int counter_ = 0;
    std::string path_;
};

// 3x3 correlation matrix on which the PFA communality iteration needs about
// 14000 iterations to settle; safely beyond the 1000-iteration cap
inline CorrMatrix slow_pfa_matrix() {
    return CorrMatrix(Matrix(3, 3,
                             {1.0, -0.388818, 0.015721,  //
                              -0.388818, 1.0, -0.024548,  //
                              0.015721, -0.024548, 1.0}));
}

}  // namespace corrfit::test
