#include "corrfit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "corrfit/errors.hpp"

namespace corrfit {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

// shortest decimal text that parses back to the same double
std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

std::vector<std::vector<std::string>> read_csv_rows(std::istream& in, const std::string& origin) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.size() < 2) throw validation_error(origin + ": expected a header row and data rows");
    return rows;
}

// true when the first field of every data row is non-numeric
bool has_label_column(const std::vector<std::vector<std::string>>& rows) {
    double unused;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (parse_double(rows[i][0], unused)) return false;
    return true;
}

struct ParsedCsv {
    std::vector<std::string> labels;
    Matrix values;
};

ParsedCsv parse_labeled_csv(std::istream& in, const std::string& origin) {
    const auto rows = read_csv_rows(in, origin);
    const bool label_col = has_label_column(rows);
    const std::size_t skip = label_col ? 1 : 0;
    const std::size_t n = rows.size() - 1;
    if (rows[1].size() <= skip) throw validation_error(origin + ": row 1 has no numeric fields");
    const std::size_t p = rows[1].size() - skip;

    std::vector<std::string> labels = rows[0];
    if (labels.size() == p + 1) labels.erase(labels.begin());  // corner cell
    if (labels.size() != p)
        throw validation_error(origin + ": header has " + std::to_string(labels.size()) +
                               " labels but rows have " + std::to_string(p) +
                               " numeric fields");

    Matrix values(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != p + skip)
            throw validation_error(origin + ": row " + std::to_string(i + 1) + " has " +
                                   std::to_string(row.size()) + " fields, expected " +
                                   std::to_string(p + skip));
        for (std::size_t j = 0; j < p; ++j) {
            double v;
            if (!parse_double(row[j + skip], v))
                throw validation_error(origin + ": non-numeric cell at row " +
                                       std::to_string(i + 1) + ", column " +
                                       std::to_string(j + 1) + ": '" + row[j + skip] + "'");
            values(i, j) = v;
        }
    }
    return {std::move(labels), std::move(values)};
}

}  // namespace

CorrMatrix read_corr_csv(std::istream& in, const std::string& origin) {
    ParsedCsv csv = parse_labeled_csv(in, origin);
    const std::size_t p = csv.values.cols();
    if (csv.values.rows() != p)
        throw validation_error(origin + ": expected " + std::to_string(p) + " rows of " +
                               std::to_string(p) + " correlations, got " +
                               std::to_string(csv.values.rows()) + " rows");
    Matrix& m = csv.values;
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j) {
            if (std::abs(m(i, j) - m(j, i)) > 1e-8)
                throw validation_error(origin + ": asymmetric at (" + csv.labels[i] + "," +
                                       csv.labels[j] + "): " + format_double(m(i, j)) + " vs " +
                                       format_double(m(j, i)));
            const double avg = 0.5 * (m(i, j) + m(j, i));
            if (std::abs(avg) > 1.0 + 1e-12)
                throw validation_error(origin + ": correlation (" + csv.labels[i] + "," +
                                       csv.labels[j] + ") = " + format_double(avg) +
                                       " outside [-1, 1]");
            m(i, j) = avg;
            m(j, i) = avg;
        }
    for (std::size_t i = 0; i < p; ++i)
        if (std::abs(m(i, i) - 1.0) > 1e-8)
            throw validation_error(origin + ": diagonal entry for " + csv.labels[i] + " is " +
                                   format_double(m(i, i)) + ", expected 1");
    return CorrMatrix(std::move(csv.values), std::move(csv.labels));
}

CorrMatrix read_corr_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    return read_corr_csv(in, path);
}

DataMatrix read_data_csv(std::istream& in, const std::string& origin) {
    ParsedCsv csv = parse_labeled_csv(in, origin);
    if (csv.values.rows() < 2)
        throw validation_error(origin + ": need at least 2 data rows, got " +
                               std::to_string(csv.values.rows()));
    return {std::move(csv.values), std::move(csv.labels)};
}

DataMatrix read_data_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    return read_data_csv(in, path);
}

CorrMatrix heart_correlation() {
    const std::vector<std::string> labels = {"CI", "SI", "VP", "Pulse", "logPR", "DBP", "PA"};
    const std::vector<double> values = {
        1.000,  0.887,  -0.282, -0.112, -0.839, -0.361, -0.269,  //
        0.887,  1.000,  -0.201, -0.503, -0.833, -0.483, -0.405,  //
        -0.282, -0.201, 1.000,  -0.085, 0.318,  0.285,  0.244,   //
        -0.112, -0.503, -0.085, 1.000,  0.287,  0.399,  0.370,   //
        -0.839, -0.833, 0.318,  0.287,  1.000,  0.761,  0.716,   //
        -0.361, -0.483, 0.285,  0.399,  0.761,  1.000,  0.928,   //
        -0.269, -0.405, 0.244,  0.370,  0.716,  0.928,  1.000};
    return CorrMatrix(Matrix(7, 7, values), labels);
}

void write_corr_csv(const CorrMatrix& r, std::ostream& out) {
    write_fitted_csv(r.values(), r.labels(), out);
}

void write_corr_csv(const CorrMatrix& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    write_corr_csv(r, out);
}

void write_data_csv(const Matrix& x, const std::vector<std::string>& labels,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    for (std::size_t j = 0; j < labels.size(); ++j)
        out << (j ? "," : "") << labels[j];
    out << "\n";
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j)
            out << (j ? "," : "") << format_double(x(i, j));
        out << "\n";
    }
}

void write_fitted_csv(const Matrix& fitted, const std::vector<std::string>& labels,
                      std::ostream& out, const CorrMatrix* sample) {
    const std::size_t p = fitted.rows();
    if (labels.size() != p)
        throw validation_error("fitted matrix has " + std::to_string(p) + " rows but " +
                               std::to_string(labels.size()) + " labels");
    if (sample && sample->size() != p)
        throw validation_error("sample matrix size does not match fitted matrix");
    for (const auto& l : labels) out << "," << l;
    out << "\n";
    for (std::size_t i = 0; i < p; ++i) {
        out << labels[i];
        for (std::size_t j = 0; j < p; ++j) {
            const double v = (sample && j > i) ? (*sample)(i, j) : fitted(i, j);
            out << "," << format_double(v);
        }
        out << "\n";
    }
}

void write_fitted_csv(const Matrix& fitted, const std::vector<std::string>& labels,
                      const std::string& path, const CorrMatrix* sample) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    write_fitted_csv(fitted, labels, out, sample);
}

std::vector<MethodSpec> default_compare_specs() {
    std::vector<MethodSpec> specs;
    for (Method m : {Method::pca, Method::pca_cos, Method::crg, Method::mds, Method::pfa,
                     Method::wals, Method::wals_adj})
        specs.push_back(MethodSpec{m});
    return specs;
}

ComparisonTable run_compare(const CorrMatrix& r, const std::vector<MethodSpec>& specs) {
    ComparisonTable table;
    for (const MethodSpec& spec : specs) {
        ComparisonRow row;
        row.method = spec.method;
        try {
            Matrix fitted;
            switch (spec.method) {
                case Method::pca: {
                    const LowRankFit fit = pca_fit(r, spec.rank);
                    fitted = fit.fitted;
                    row.iterations = fit.iterations;
                    row.converged = fit.converged;
                    break;
                }
                case Method::pca_cos: {
                    fitted = pca_cosine_matrix(pca_fit(r, spec.rank));
                    break;
                }
                case Method::crg: {
                    const AngleFit fit = correlogram_fit(r, spec.restarts, spec.seed);
                    fitted = correlogram_cosine_matrix(fit.theta);
                    row.iterations = fit.iterations;
                    row.converged = fit.converged;
                    break;
                }
                case Method::mds: {
                    fitted = mds_fit(r, spec.rank).fitted_correlations;
                    break;
                }
                case Method::pfa: {
                    const FactorSolution sol = pfa_fit(r, spec.rank);
                    fitted = sol.fitted;
                    row.iterations = sol.iterations;
                    row.converged = sol.converged;
                    break;
                }
                case Method::wals:
                case Method::wals_adj:
                case Method::pca_adj: {
                    const LowRankFit fit = spec.method == Method::wals
                                               ? wals_fit(r, spec.rank)
                                               : spec.method == Method::wals_adj
                                                     ? wals_adjusted_fit(r, spec.rank)
                                                     : pca_adjusted_fit(r, spec.rank);
                    fitted = fit.fitted;
                    row.delta = fit.delta;
                    row.iterations = fit.iterations;
                    row.converged = fit.converged;
                    break;
                }
            }
            row.rmse_offdiag = rmse_offdiag(r, fitted);
            row.rmse_withdiag = rmse_with_diag(r, fitted);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        table.rows.push_back(row);
    }
    return table;
}

namespace {

ordered_json report_to_json(const FitReport& report) {
    ordered_json j;
    j["method"] = to_string(report.method);
    j["rank"] = report.rank;
    j["delta"] = report.delta;
    j["rmse_offdiag"] = report.rmse_offdiag;
    j["rmse_withdiag"] = report.rmse_withdiag;
    ordered_json per = ordered_json::array();
    for (std::size_t i = 0; i < report.rmse_per_variable.size(); ++i) {
        ordered_json entry;
        entry["label"] = i < report.labels.size() ? report.labels[i] : std::to_string(i + 1);
        entry["rmse"] = report.rmse_per_variable[i];
        per.push_back(entry);
    }
    j["per_variable"] = per;
    j["gof_data"] = report.gof_data ? ordered_json(*report.gof_data) : ordered_json(nullptr);
    j["gof_corr"] = report.gof_corr ? ordered_json(*report.gof_corr) : ordered_json(nullptr);
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    return j;
}

ordered_json table_to_json(const ComparisonTable& table) {
    ordered_json rows = ordered_json::array();
    for (const ComparisonRow& row : table.rows) {
        ordered_json j;
        j["method"] = to_string(row.method);
        if (row.failed) {
            j["error"] = row.error;
        } else {
            j["rmse_offdiag"] = row.rmse_offdiag;
            j["rmse_withdiag"] = row.rmse_withdiag;
            j["delta"] = row.delta;
            j["iterations"] = row.iterations;
            j["converged"] = row.converged;
        }
        rows.push_back(j);
    }
    ordered_json j;
    j["rows"] = rows;
    return j;
}

ordered_json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(path + ": " + e.what());
    }
}

}  // namespace

void write_report_json(const FitReport& report, std::ostream& out) {
    out << report_to_json(report).dump(2) << "\n";
}

void write_report_json(const FitReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    write_report_json(report, out);
}

FitReport read_fit_report_json(const std::string& path) {
    const ordered_json j = parse_json_file(path);
    try {
        FitReport report;
        report.method = method_from_string(j.at("method").get<std::string>());
        report.rank = j.at("rank").get<std::size_t>();
        report.delta = j.at("delta").get<double>();
        report.rmse_offdiag = j.at("rmse_offdiag").get<double>();
        report.rmse_withdiag = j.at("rmse_withdiag").get<double>();
        for (const auto& entry : j.at("per_variable")) {
            report.labels.push_back(entry.at("label").get<std::string>());
            report.rmse_per_variable.push_back(entry.at("rmse").get<double>());
        }
        if (!j.at("gof_data").is_null()) report.gof_data = j.at("gof_data").get<double>();
        if (!j.at("gof_corr").is_null()) report.gof_corr = j.at("gof_corr").get<double>();
        report.iterations = j.at("iterations").get<std::size_t>();
        report.converged = j.at("converged").get<bool>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(path + ": not a fit report: " + e.what());
    }
}

void write_report_json(const ComparisonTable& table, std::ostream& out) {
    out << table_to_json(table).dump(2) << "\n";
}

void write_report_json(const ComparisonTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot write " + path);
    write_report_json(table, out);
}

ComparisonTable read_comparison_json(const std::string& path) {
    const ordered_json j = parse_json_file(path);
    try {
        ComparisonTable table;
        for (const auto& entry : j.at("rows")) {
            ComparisonRow row;
            row.method = method_from_string(entry.at("method").get<std::string>());
            if (entry.contains("error")) {
                row.failed = true;
                row.error = entry.at("error").get<std::string>();
            } else {
                row.rmse_offdiag = entry.at("rmse_offdiag").get<double>();
                row.rmse_withdiag = entry.at("rmse_withdiag").get<double>();
                row.delta = entry.at("delta").get<double>();
                row.iterations = entry.at("iterations").get<std::size_t>();
                row.converged = entry.at("converged").get<bool>();
            }
            table.rows.push_back(row);
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(path + ": not a comparison table: " + e.what());
    }
}

void print_comparison(const ComparisonTable& table, std::ostream& out) {
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %13s %14s %9s %11s %10s", "method", "rmse_offdiag",
                  "rmse_withdiag", "delta", "iterations", "converged");
    out << line << "\n";
    for (const ComparisonRow& row : table.rows) {
        if (row.failed) {
            std::snprintf(line, sizeof(line), "%-10s failed: %s", to_string(row.method).c_str(),
                          row.error.c_str());
        } else {
            std::snprintf(line, sizeof(line), "%-10s %13.4f %14.4f %9.4f %11zu %10s",
                          to_string(row.method).c_str(), row.rmse_offdiag, row.rmse_withdiag,
                          row.delta, row.iterations, row.converged ? "yes" : "no");
        }
        out << line << "\n";
    }
}

}  // namespace corrfit
