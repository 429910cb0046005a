#include "corrfit/biplot.hpp"

#include <cmath>

#include "corrfit/errors.hpp"
#include "corrfit/linalg.hpp"
#include "corrfit/metrics.hpp"

namespace corrfit {

CalibratedAxis calibrate_axis(const std::array<double, 2>& g, double delta,
                              const std::vector<double>& values, const std::string& variable,
                              double offset) {
    const double norm_sq = g[0] * g[0] + g[1] * g[1];
    const double norm = std::sqrt(norm_sq);
    if (norm <= 1e-12)
        throw validation_error("degenerate axis: vector for " + variable + " has zero length");

    CalibratedAxis axis;
    axis.variable = variable;
    axis.direction = {g[0] / norm, g[1] / norm};
    axis.offset = offset;
    axis.ticks.reserve(values.size());
    for (double mu : values) {
        const double t = (mu - delta) / norm_sq;
        axis.ticks.push_back({mu, {g[0] * t, g[1] * t}});
    }
    return axis;
}

std::vector<double> default_axis_ticks() {
    std::vector<double> t;
    for (int i = -5; i <= 5; ++i) t.push_back(i * 0.2);
    return t;
}

Matrix map_observations(const Matrix& xs, const Matrix& g) {
    if (xs.cols() != g.rows())
        throw validation_error("data has " + std::to_string(xs.cols()) +
                               " variables but coordinates have " + std::to_string(g.rows()) +
                               " rows");
    const std::size_t k = g.cols();
    const Matrix gtg = g.transpose() * g;
    const EigenDecomposition eig = eigen_symmetric(gtg);
    if (eig.eigenvalues.back() <= 1e-12 * std::max(eig.eigenvalues.front(), 1.0))
        throw validation_error("biplot coordinates are rank deficient");
    Matrix inv(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l)
                s += eig.eigenvectors(i, l) * eig.eigenvectors(j, l) / eig.eigenvalues[l];
            inv(i, j) = s;
        }
    return xs * g * inv;
}

double chisq2_scale_factor(double confidence) {
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw validation_error("confidence must lie strictly between 0 and 1, got " +
                               std::to_string(confidence));
    const double q = -2.0 * std::log(1.0 - confidence);
    return 1.0 / std::sqrt(q);
}

Matrix scale_scores_chisq(const Matrix& scores, double confidence) {
    return chisq2_scale_factor(confidence) * scores;
}

namespace {

void attach_scores(BiplotScene& scene, const std::optional<Matrix>& scores) {
    if (!scores) return;
    if (scores->cols() != 2)
        throw validation_error("observation scores must have 2 columns, got " +
                               std::to_string(scores->cols()));
    scene.observation_scores = *scores;
    scene.score_labels.resize(scores->rows());
    for (std::size_t i = 0; i < scores->rows(); ++i)
        scene.score_labels[i] = std::to_string(i + 1);
}

}  // namespace

BiplotScene mds_scene(const MdsFit& fit, double threshold) {
    if (fit.coords.cols() != 2)
        throw validation_error("mds scene needs a rank-2 fit, got rank " +
                               std::to_string(fit.coords.cols()));
    BiplotScene scene;
    scene.title = "mds";
    scene.labels = fit.labels;
    scene.points_only = true;
    const std::size_t p = fit.coords.rows();
    scene.variable_vectors.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        scene.variable_vectors[i] = {fit.coords(i, 0), fit.coords(i, 1)};
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            if (fit.fitted_distances(i, j) > threshold) scene.dotted_pairs.push_back({i, j});
    return scene;
}

BiplotScene build_scene(const LowRankFit& fit, const std::optional<Matrix>& scores) {
    if (fit.coords.cols() != 2)
        throw validation_error("biplot scene needs a rank-2 fit, got rank " +
                               std::to_string(fit.coords.cols()));
    BiplotScene scene;
    scene.title = to_string(fit.method);
    scene.labels = fit.labels;
    scene.delta = fit.delta;
    scene.unit_circle = true;
    const std::size_t p = fit.coords.rows();
    scene.variable_vectors.resize(p);
    for (std::size_t i = 0; i < p; ++i)
        scene.variable_vectors[i] = {fit.coords(i, 0), fit.coords(i, 1)};
    attach_scores(scene, scores);
    return scene;
}

BiplotScene build_scene(const AngleFit& fit) {
    BiplotScene scene;
    scene.title = "crg";
    scene.labels = fit.labels;
    scene.unit_circle = true;
    scene.variable_vectors.resize(fit.theta.size());
    for (std::size_t i = 0; i < fit.theta.size(); ++i)
        scene.variable_vectors[i] = {std::cos(fit.theta[i]), std::sin(fit.theta[i])};
    return scene;
}

BiplotScene build_scene(const MdsFit& fit) { return mds_scene(fit); }

}  // namespace corrfit
