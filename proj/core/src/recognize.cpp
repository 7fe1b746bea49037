#include "gorec/recognize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gorec/errors.hpp"
#include "gorec/parallel.hpp"
#include "json.hpp"

namespace gorec {

void WeightParams::validate() const {
    if (lambda < 1.0) throw domain_error("lambda must be >= 1");
    if (!(beta > 0.0) || beta > 1.0) throw domain_error("beta must be in (0, 1]");
    if (tie_epsilon < 0.0) throw domain_error("tie_epsilon must be >= 0");
    if (delta < 0.0) throw domain_error("delta must be >= 0");
}

double alignment_weight(const Alignment& alignment, const WeightParams& params) {
    const std::size_t m = alignment.trailing_log_run();
    double positional = 0.0;
    for (std::size_t i = 0; i < alignment.moves.size(); ++i)
        positional += std::pow(static_cast<double>(i + 1), params.delta) *
                      alignment.moves[i].cost;
    return params.phi + std::pow(params.lambda, static_cast<double>(m)) * positional;
}

std::map<std::string, double> goal_posterior(const std::map<std::string, double>& weights,
                                             double beta) {
    if (weights.empty()) throw validation_error("goal_posterior: no goals");
    double min_weight = std::numeric_limits<double>::infinity();
    for (const auto& [goal, w] : weights) {
        if (std::isnan(w)) throw validation_error("goal_posterior: NaN weight for " + goal);
        min_weight = std::min(min_weight, w);
    }

    std::map<std::string, double> probabilities;
    if (std::isinf(min_weight)) {  // every model failed: fall back to uniform
        for (const auto& [goal, w] : weights)
            probabilities[goal] = 1.0 / static_cast<double>(weights.size());
        return probabilities;
    }
    double total = 0.0;
    for (const auto& [goal, w] : weights) {
        const double p = std::isinf(w) ? 0.0 : std::exp(-beta * (w - min_weight));
        probabilities[goal] = p;
        total += p;
    }
    for (auto& [goal, p] : probabilities) p /= total;
    return probabilities;
}

std::vector<std::string> infer_goals(const std::map<std::string, double>& probabilities,
                                     double tie_epsilon) {
    if (probabilities.empty()) throw validation_error("infer_goals: empty posterior");
    double best = 0.0;
    for (const auto& [goal, p] : probabilities) best = std::max(best, p);
    std::vector<std::string> inferred;
    for (const auto& [goal, p] : probabilities)
        if (p >= best - tie_epsilon) inferred.push_back(goal);
    return inferred;
}

GoalPosterior recognize_events(const std::vector<std::size_t>& events,
                               const std::vector<GoalModel>& models, const WeightParams& params,
                               int workers) {
    params.validate();
    if (models.empty()) throw validation_error("recognize: no goal models");

    std::vector<double> weights(models.size());
    std::vector<AlignmentSummary> summaries(models.size());
    parallel_for(models.size(), workers, [&](std::size_t g) {
        const auto& model = models[g];
        if (!has_path(model)) {
            weights[g] = std::numeric_limits<double>::infinity();
            return;
        }
        const Alignment alignment = optimal_alignment(events, model);
        weights[g] = alignment_weight(alignment, params);
        summaries[g] = {alignment.total_cost, alignment.length(), alignment.trailing_log_run()};
    });

    GoalPosterior result;
    for (std::size_t g = 0; g < models.size(); ++g) {
        result.weights[models[g].goal] = weights[g];
        result.alignments[models[g].goal] = summaries[g];
    }
    result.probabilities = goal_posterior(result.weights, params.beta);
    result.inferred = infer_goals(result.probabilities, params.tie_epsilon);
    return result;
}

GoalPosterior recognize(const ContinuousTrace& prefix, const TrainedArtifacts& artifacts,
                        const WeightParams& params, int workers) {
    if (prefix.rows.empty()) throw validation_error("recognize: empty prefix");
    const auto events = discretize_rows(prefix.rows, artifacts.codebook);
    return recognize_events(events, artifacts.models, params, workers);
}

std::string WeightParams::to_json() const {
    nlohmann::ordered_json j;
    j["phi"] = phi;
    j["delta"] = delta;
    j["lambda"] = lambda;
    j["beta"] = beta;
    j["tie_epsilon"] = tie_epsilon;
    return j.dump(2);
}

WeightParams WeightParams::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    WeightParams p;
    p.phi = j.value("phi", p.phi);
    p.delta = j.value("delta", p.delta);
    p.lambda = j.value("lambda", p.lambda);
    p.beta = j.value("beta", p.beta);
    p.tie_epsilon = j.value("tie_epsilon", p.tie_epsilon);
    p.validate();
    return p;
}

std::string GoalPosterior::to_json() const {
    nlohmann::ordered_json j;
    j["probabilities"] = probabilities;
    j["inferred"] = inferred;
    j["weights"] = weights;
    nlohmann::ordered_json aligns;
    for (const auto& [goal, summary] : alignments)
        aligns[goal] = {{"cost", summary.cost},
                        {"length", summary.length},
                        {"trailing_log_run", summary.trailing_log_run}};
    j["alignments"] = aligns;
    return j.dump(2);
}

}  // namespace gorec
