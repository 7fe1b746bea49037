#pragma once

#include <map>
#include <string>
#include <vector>

#include "gorec/align.hpp"
#include "gorec/dataset.hpp"
#include "gorec/featsel.hpp"
#include "gorec/quantize.hpp"

namespace gorec {

struct WeightParams {
    double phi = 1.0;      // constant offset
    double delta = 1.0;    // positional discount exponent
    double lambda = 2.0;   // trailing-log-move penalty base, >= 1
    double beta = 1.0;     // model trust, in (0, 1]
    double tie_epsilon = 1e-9;

    void validate() const;
    std::string to_json() const;
    static WeightParams from_json(const std::string& text);
};

/// omega = phi + lambda^m * sum_i i^delta * c_i, with 1-based positions over
/// the whole alignment and m the trailing run of log moves (a trailing model
/// move resets the run to zero).
double alignment_weight(const Alignment& alignment, const WeightParams& params);

/// Softmax of -beta * omega over goals, computed with a min-weight shift.
/// +infinity weights get probability 0; if every weight is infinite the
/// distribution is uniform.
std::map<std::string, double> goal_posterior(const std::map<std::string, double>& weights,
                                             double beta);

/// Goals within tie_epsilon of the maximum probability.
std::vector<std::string> infer_goals(const std::map<std::string, double>& probabilities,
                                     double tie_epsilon);

struct AlignmentSummary {
    double cost = 0.0;
    std::size_t length = 0;
    std::size_t trailing_log_run = 0;
};

struct GoalPosterior {
    std::map<std::string, double> probabilities;
    std::map<std::string, double> weights;  // omega per goal
    std::map<std::string, AlignmentSummary> alignments;
    std::vector<std::string> inferred;

    std::string to_json() const;
};

/// Everything recognition needs, fitted on training data.
struct TrainedArtifacts {
    FeatureSelection selection;
    Codebook codebook;
    std::vector<GoalModel> models;  // one per goal
};

/// Full recognition pipeline for one continuous prefix: project, discretize,
/// align against every goal model, weight, and normalize. Goals whose model
/// has no START-END path get weight +infinity.
GoalPosterior recognize(const ContinuousTrace& prefix, const TrainedArtifacts& artifacts,
                        const WeightParams& params, int workers = 1);

/// Recognition from an already-discretized event sequence.
GoalPosterior recognize_events(const std::vector<std::size_t>& events,
                               const std::vector<GoalModel>& models, const WeightParams& params,
                               int workers = 1);

}  // namespace gorec
