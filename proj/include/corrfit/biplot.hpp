#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corrfit/matrix.hpp"
#include "corrfit/methods.hpp"

namespace corrfit {

// A correlation scale drawn along a variable's vector: the tick for value mu
// sits where the projection onto g reads mu - delta, so the value delta
// projects exactly onto the plot origin. offset is a purely cosmetic
// perpendicular shift applied at render time.
struct CalibratedAxis {
    std::string variable;
    std::array<double, 2> direction;  // unit vector along g
    std::vector<std::pair<double, std::array<double, 2>>> ticks;  // (value, point)
    double offset = 0.0;
};

struct BiplotScene {
    std::string title;
    std::vector<std::string> labels;
    std::vector<std::array<double, 2>> variable_vectors;
    std::optional<Matrix> observation_scores;  // n x 2
    std::vector<std::string> score_labels;
    double score_scale = 1.0;  // factor already applied to the scores
    double delta = 0.0;
    bool unit_circle = false;
    bool points_only = false;  // MDS maps draw points instead of arrows
    std::vector<CalibratedAxis> calibrated_axes;
    std::vector<std::pair<std::size_t, std::size_t>> dotted_pairs;  // MDS only
};

CalibratedAxis calibrate_axis(const std::array<double, 2>& g, double delta,
                              const std::vector<double>& values, const std::string& variable,
                              double offset = 0.0);

// Default tick set {-1, -0.8, ..., 0.8, 1}.
std::vector<double> default_axis_ticks();

// Observation scores by regression: F = Xs g (g'g)^-1.
Matrix map_observations(const Matrix& xs, const Matrix& g);

// 1/sqrt(q) with q the chi-square(2 df) quantile at the given confidence;
// the quantile has the closed form -2 ln(1 - confidence).
double chisq2_scale_factor(double confidence);
Matrix scale_scores_chisq(const Matrix& scores, double confidence);

// MDS map with pairs at fitted distance > threshold (default sqrt(2), the
// distance of zero correlation) marked for dotted rendering.
BiplotScene mds_scene(const MdsFit& fit, double threshold = 1.4142135623730951);

BiplotScene build_scene(const LowRankFit& fit,
                        const std::optional<Matrix>& scores = std::nullopt);
BiplotScene build_scene(const AngleFit& fit);
BiplotScene build_scene(const MdsFit& fit);

}  // namespace corrfit
