#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gorec/dataset.hpp"
#include "gorec/featsel.hpp"

namespace gorec {

/// Linear discriminant classifier over selected-feature vectors: class
/// means, pooled within-class covariance with diagonal shrinkage, uniform
/// priors by default.
struct LdaModel {
    std::vector<std::string> classes;
    std::vector<std::vector<double>> means;  // per class
    std::vector<double> covariance;          // dim x dim row-major, shrunk
    double shrinkage = 0.0;                  // gamma in [0, 1]
    std::vector<double> priors;
    std::size_t dim = 0;

    std::string to_json() const;
    static LdaModel from_json(const std::string& text);
};

/// Fit from labeled points. When gamma is not given, the smallest value in
/// {0, 1e-6, 1e-4, 1e-2} that makes the shrunk covariance well-conditioned
/// is used.
LdaModel fit_lda(const std::vector<std::vector<double>>& points,
                 const std::vector<std::size_t>& labels, const std::vector<std::string>& classes,
                 std::optional<double> gamma = std::nullopt);

/// Returns (class index, softmax posterior over discriminant scores).
/// Score ties resolve to the lowest class index.
std::pair<std::size_t, std::vector<double>> lda_classify(const LdaModel& model,
                                                         const std::vector<double>& point);

/// Classify the final row of the prefix, projected to the selected features.
std::string lda_recognize(const ContinuousTrace& prefix, const LdaModel& model,
                          const FeatureSelection& selection);

/// Training points for one goal: the last `tail_rows` rows of each of its
/// training traces, projected to the selected features.
std::vector<std::vector<double>> lda_training_points(const Dataset& dataset,
                                                     const std::vector<std::size_t>& trace_indices,
                                                     const std::string& goal,
                                                     const std::vector<std::size_t>& selected,
                                                     int tail_rows = 10);

}  // namespace gorec
