#include "corrfit/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "corrfit/biplot.hpp"
#include "corrfit/corr.hpp"
#include "corrfit/errors.hpp"
#include "corrfit/io.hpp"
#include "corrfit/metrics.hpp"
#include "corrfit/methods.hpp"
#include "corrfit/svg.hpp"

namespace corrfit {

namespace {

Matrix standardize_columns(const Matrix& x) {
    const std::size_t n = x.rows(), p = x.cols();
    Matrix out(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = x(i, j) - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        if (sd == 0.0)
            throw validation_error("data column " + std::to_string(j + 1) +
                                   " is constant; cannot standardize");
        for (std::size_t i = 0; i < n; ++i) out(i, j) = (x(i, j) - mean) / sd;
    }
    return out;
}

struct FitRun {
    Method method;
    std::size_t rank = 2;
    Matrix fitted;
    Matrix coords;  // empty for pca-cos
    double delta = 0.0;
    std::size_t iterations = 0;
    bool converged = true;
    std::optional<AngleFit> angles;
    std::optional<MdsFit> mds;
    std::optional<LowRankFit> low_rank;
};

FitRun run_method(const CorrMatrix& r, Method method, std::size_t rank, std::size_t restarts,
                  std::uint64_t seed) {
    FitRun run;
    run.method = method;
    run.rank = rank;
    switch (method) {
        case Method::pca:
        case Method::pca_adj:
        case Method::wals:
        case Method::wals_adj: {
            LowRankFit fit = method == Method::pca ? pca_fit(r, rank)
                             : method == Method::pca_adj ? pca_adjusted_fit(r, rank)
                             : method == Method::wals    ? wals_fit(r, rank)
                                                         : wals_adjusted_fit(r, rank);
            run.fitted = fit.fitted;
            run.coords = fit.coords;
            run.delta = fit.delta;
            run.iterations = fit.iterations;
            run.converged = fit.converged;
            run.low_rank = std::move(fit);
            break;
        }
        case Method::pca_cos: {
            const LowRankFit fit = pca_fit(r, rank);
            run.fitted = pca_cosine_matrix(fit);
            run.coords = fit.coords;
            run.low_rank = fit;
            break;
        }
        case Method::crg: {
            AngleFit fit = correlogram_fit(r, restarts, seed);
            run.fitted = correlogram_cosine_matrix(fit.theta);
            run.coords = Matrix(r.size(), 2);
            for (std::size_t i = 0; i < r.size(); ++i) {
                run.coords(i, 0) = std::cos(fit.theta[i]);
                run.coords(i, 1) = std::sin(fit.theta[i]);
            }
            run.iterations = fit.iterations;
            run.converged = fit.converged;
            run.angles = std::move(fit);
            break;
        }
        case Method::mds: {
            MdsFit fit = mds_fit(r, rank);
            run.fitted = fit.fitted_correlations;
            run.coords = fit.coords;
            run.mds = std::move(fit);
            break;
        }
        case Method::pfa: {
            const FactorSolution sol = pfa_fit(r, rank);
            run.fitted = sol.fitted;
            run.coords = sol.loadings;
            run.iterations = sol.iterations;
            run.converged = sol.converged;
            break;
        }
    }
    return run;
}

int run_fit(const std::string& input, const std::string& method_name, std::size_t rank,
            bool adjust, std::size_t restarts, std::uint64_t seed, const std::string& data_path,
            const std::string& out_fitted, bool hybrid, const std::string& out_report,
            const std::string& out_svg, const std::string& calibrate, double axis_offset,
            double confidence) {
    Method method = method_from_string(method_name);
    if (adjust) {
        if (method == Method::pca)
            method = Method::pca_adj;
        else if (method == Method::wals)
            method = Method::wals_adj;
        else if (method != Method::pca_adj && method != Method::wals_adj)
            throw validation_error("--adjust applies to pca and wals only");
    }

    const CorrMatrix r = read_corr_csv(input);
    const FitRun run = run_method(r, method, rank, restarts, seed);

    std::optional<Matrix> xs;
    if (!data_path.empty()) {
        const DataMatrix data = read_data_csv(data_path);
        if (data.values.cols() != r.size())
            throw validation_error("data file has " + std::to_string(data.values.cols()) +
                                   " variables but the correlation matrix has " +
                                   std::to_string(r.size()));
        xs = standardize_columns(data.values);
    }

    std::optional<double> gof_data, gof_corr;
    if (method == Method::pca) {
        gof_data = gof_data_eigs(r, rank);
        gof_corr = gof_corr_squared_eigs(r, rank);
    }
    if (xs && !run.coords.empty()) gof_data = gof_data_regression(*xs, run.coords);

    const FitReport report = build_fit_report(method, r, run.fitted, run.rank, run.delta,
                                              run.iterations, run.converged, gof_data, gof_corr);

    if (!out_fitted.empty())
        write_fitted_csv(run.fitted, r.labels(), out_fitted, hybrid ? &r : nullptr);
    if (!out_report.empty()) write_report_json(report, out_report);

    if (!out_svg.empty()) {
        BiplotScene scene;
        if (run.angles) {
            scene = build_scene(*run.angles);
        } else if (run.mds) {
            scene = mds_scene(*run.mds);
        } else {
            LowRankFit for_scene;
            if (run.low_rank) {
                for_scene = *run.low_rank;
            } else {  // pfa
                for_scene.method = method;
                for_scene.labels = r.labels();
                for_scene.coords = run.coords;
                for_scene.fitted = run.fitted;
            }
            std::optional<Matrix> scores;
            if (xs && run.coords.cols() == 2)
                scores = scale_scores_chisq(map_observations(*xs, run.coords), confidence);
            scene = build_scene(for_scene, scores);
            if (scores) scene.score_scale = chisq2_scale_factor(confidence);
        }
        if (!calibrate.empty()) {
            const std::size_t idx = r.index_of(calibrate);
            scene.calibrated_axes.push_back(
                calibrate_axis(scene.variable_vectors[idx], scene.delta, default_axis_ticks(),
                               calibrate, axis_offset));
        }
        render_svg(scene, out_svg);
    }

    if (out_fitted.empty() && out_report.empty() && out_svg.empty())
        write_report_json(report, std::cout);

    if (!run.converged) {
        std::cerr << "warning: " << to_string(method) << " hit its iteration cap\n";
    }
    return 0;
}

int run_compare_cmd(const std::string& input, const std::string& methods_csv, std::size_t rank,
                    std::size_t restarts, std::uint64_t seed, const std::string& out_report) {
    const CorrMatrix r = read_corr_csv(input);
    std::vector<MethodSpec> specs;
    if (methods_csv.empty()) {
        specs = default_compare_specs();
        for (auto& s : specs) {
            s.rank = rank;
            s.restarts = restarts;
            s.seed = seed;
        }
    } else {
        std::istringstream ss(methods_csv);
        std::string name;
        while (std::getline(ss, name, ',')) {
            MethodSpec spec;
            spec.method = method_from_string(name);
            spec.rank = rank;
            spec.restarts = restarts;
            spec.seed = seed;
            specs.push_back(spec);
        }
        if (specs.empty()) throw validation_error("--methods list is empty");
    }
    const ComparisonTable table = run_compare(r, specs);
    print_comparison(table, std::cout);
    if (!out_report.empty()) write_report_json(table, out_report);
    return 0;
}

int run_dataset(const std::string& name, const std::string& out) {
    if (name != "heart") throw validation_error("unknown dataset: " + name);
    const CorrMatrix r = heart_correlation();
    if (out.empty())
        write_corr_csv(r, std::cout);
    else
        write_corr_csv(r, out);
    return 0;
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"low-rank approximation and biplot geometry for correlation matrices"};
    app.require_subcommand(1);

    auto* fit = app.add_subcommand("fit", "fit one method and write reports/geometry");
    std::string method, input, data_path, out_fitted, out_report, out_svg, calibrate;
    std::size_t rank = 2, restarts = 20;
    std::uint64_t seed = 42;
    bool adjust = false, hybrid = false;
    double axis_offset = 0.0, confidence = 0.95;
    fit->add_option("--method", method, "pca|pca-cos|crg|mds|pfa|wals|wals-adj|pca-adj")
        ->required();
    fit->add_option("--rank", rank, "number of dimensions (default 2)");
    fit->add_flag("--adjust", adjust, "use the additive adjustment (pca or wals)");
    fit->add_option("--restarts", restarts, "correlogram restarts (default 20)");
    fit->add_option("--seed", seed, "correlogram restart seed (default 42)");
    fit->add_option("--input", input, "correlation matrix CSV")->required();
    fit->add_option("--data", data_path, "observation CSV for scores and data GOF");
    fit->add_option("--out-fitted", out_fitted, "write the fitted matrix CSV here");
    fit->add_flag("--hybrid", hybrid,
                  "fitted CSV keeps sample correlations above the diagonal");
    fit->add_option("--out-report", out_report, "write the JSON fit report here");
    fit->add_option("--out-svg", out_svg, "write the biplot SVG here");
    fit->add_option("--calibrate", calibrate, "variable whose axis gets a correlation scale");
    fit->add_option("--axis-offset", axis_offset, "perpendicular display shift of the scale");
    fit->add_option("--confidence", confidence, "chi-square score scaling level (default 0.95)");

    auto* compare = app.add_subcommand("compare", "run several methods and tabulate fit");
    std::string cmp_input, cmp_methods, cmp_report;
    std::size_t cmp_rank = 2, cmp_restarts = 20;
    std::uint64_t cmp_seed = 42;
    compare->add_option("--input", cmp_input, "correlation matrix CSV")->required();
    compare->add_option("--methods", cmp_methods, "comma-separated list (default: all)");
    compare->add_option("--rank", cmp_rank, "number of dimensions (default 2)");
    compare->add_option("--restarts", cmp_restarts, "correlogram restarts (default 20)");
    compare->add_option("--seed", cmp_seed, "correlogram restart seed (default 42)");
    compare->add_option("--out-report", cmp_report, "write the JSON comparison here");

    auto* dataset = app.add_subcommand("dataset", "emit a bundled dataset");
    std::string ds_name, ds_out;
    dataset->add_option("name", ds_name, "dataset name (heart)")->required();
    dataset->add_option("--out", ds_out, "output path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    if (app.got_subcommand(fit))
        return run_fit(input, method, rank, adjust, restarts, seed, data_path, out_fitted,
                       hybrid, out_report, out_svg, calibrate, axis_offset, confidence);
    if (app.got_subcommand(compare))
        return run_compare_cmd(cmp_input, cmp_methods, cmp_rank, cmp_restarts, cmp_seed,
                               cmp_report);
    return run_dataset(ds_name, ds_out);
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    try {
        return dispatch(argc, argv);
    } catch (const convergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace corrfit
