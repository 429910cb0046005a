#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "corrfit/corr.hpp"
#include "corrfit/matrix.hpp"
#include "corrfit/methods.hpp"
#include "corrfit/metrics.hpp"

namespace corrfit {

struct DataMatrix {
    Matrix values;
    std::vector<std::string> labels;
};

// CSV with a header row of variable names and one numeric row per variable;
// a leading label column is auto-detected. Symmetry is enforced by averaging
// when the asymmetry is at most 1e-8.
CorrMatrix read_corr_csv(const std::string& path);
CorrMatrix read_corr_csv(std::istream& in, const std::string& origin);

// CSV with a header row and n numeric data rows; a leading label column is
// auto-detected and skipped.
DataMatrix read_data_csv(const std::string& path);
DataMatrix read_data_csv(std::istream& in, const std::string& origin);

// The bundled Heart attack correlation matrix (7 variables, 3 decimals).
CorrMatrix heart_correlation();

void write_corr_csv(const CorrMatrix& r, const std::string& path);
void write_corr_csv(const CorrMatrix& r, std::ostream& out);

void write_data_csv(const Matrix& x, const std::vector<std::string>& labels,
                    const std::string& path);

// Fitted matrix with labels at full precision. With `sample` given, writes
// the hybrid reference layout: sample correlations above the diagonal,
// fitted values on and below it.
void write_fitted_csv(const Matrix& fitted, const std::vector<std::string>& labels,
                      const std::string& path, const CorrMatrix* sample = nullptr);
void write_fitted_csv(const Matrix& fitted, const std::vector<std::string>& labels,
                      std::ostream& out, const CorrMatrix* sample = nullptr);

struct MethodSpec {
    Method method = Method::pca;
    std::size_t rank = 2;
    std::size_t restarts = 20;
    std::uint64_t seed = 42;
};

struct ComparisonRow {
    Method method = Method::pca;
    bool failed = false;
    std::string error;  // set when failed
    double rmse_offdiag = 0.0;
    double rmse_withdiag = 0.0;
    double delta = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
};

// The seven standard methods in display order.
std::vector<MethodSpec> default_compare_specs();

// Runs each requested method; a failing method becomes a failed row and the
// remaining rows still run.
ComparisonTable run_compare(const CorrMatrix& r, const std::vector<MethodSpec>& specs);

void write_report_json(const FitReport& report, const std::string& path);
void write_report_json(const FitReport& report, std::ostream& out);
FitReport read_fit_report_json(const std::string& path);

void write_report_json(const ComparisonTable& table, const std::string& path);
void write_report_json(const ComparisonTable& table, std::ostream& out);
ComparisonTable read_comparison_json(const std::string& path);

void print_comparison(const ComparisonTable& table, std::ostream& out);

}  // namespace corrfit
