#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gorec/dataset.hpp"
#include "gorec/lda.hpp"
#include "gorec/recognize.hpp"

namespace gorec {

enum class Method { PM, LDA };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

/// Everything a cross-validation run needs to fit and score one
/// configuration. All randomness flows from `seed`.
struct PipelineConfig {
    std::size_t n_f = 8;
    std::size_t n_c = 8;
    double filter_threshold = 0.0;
    WeightParams weights;
    std::vector<double> obs_levels = {0.1, 0.3, 0.5, 0.7};
    std::uint64_t seed = 1;
    Linkage linkage = Linkage::Average;
    bool normalize = true;
    int kmeans_restarts = 10;
    int lda_tail_rows = 10;
    std::string subject = "s1";
};

/// Fit feature selection, codebook, and per-goal models on the given
/// training traces only.
TrainedArtifacts fit_artifacts(const Dataset& dataset,
                               const std::vector<std::size_t>& train_trace_indices,
                               const PipelineConfig& config);

/// Fit the LDA baseline on the training traces (tail rows per trace).
LdaModel fit_lda_baseline(const Dataset& dataset,
                          const std::vector<std::size_t>& train_trace_indices,
                          const FeatureSelection& selection, const PipelineConfig& config);

/// Per-instance precision and recall: p = [true in inferred] / |inferred|,
/// r = [true in inferred].
std::pair<double, double> instance_metrics(const std::vector<std::string>& inferred,
                                           const std::string& true_goal);

/// Max inferred probability minus the true goal's probability; absent when
/// the true goal was inferred.
std::optional<double> probability_gap(const GoalPosterior& posterior,
                                      const std::string& true_goal);

struct InstanceResult {
    std::string subject;
    std::string method;
    std::size_t fold = 0;
    std::string trace_id;
    double obs_level = 0.0;
    std::string true_goal;
    std::vector<std::string> inferred;
    std::map<std::string, double> posterior;
    double precision = 0.0;
    double recall = 0.0;
    std::optional<double> gap;
};

struct AggregateRow {
    std::string subject;
    std::string method;
    double obs_level = 0.0;
    double mean_precision = 0.0, ci_precision = 0.0;
    double mean_recall = 0.0, ci_recall = 0.0;
    double f1 = 0.0;
    std::size_t n = 0;
};

struct MethodSummary {
    std::string method;
    double mean_precision = 0.0, mean_recall = 0.0, f1 = 0.0;
    std::optional<double> mean_gap;  // over wrongly recognized instances
    std::size_t wrong_instances = 0;
};

struct PairwiseTest {
    std::string method_a, method_b;
    std::string metric;  // "precision" or "recall"
    double p_value = 0.0;
};

struct EvalReport {
    std::string subject;
    std::vector<InstanceResult> instances;
    std::vector<AggregateRow> aggregates;
    std::vector<MethodSummary> summaries;
    std::vector<PairwiseTest> tests;
    double alpha = 0.05;
    double sidak_corrected_alpha = 0.05;

    std::string to_json() const;
    std::string summary_csv() const;
    std::string instances_csv() const;
};

/// Leave-one-trace-per-goal-out cross-validation: per fold, fit everything
/// on the training traces only, then score every test trace at every
/// observation level with every requested method. Deterministic for a fixed
/// dataset, config, and seed, independent of `workers`.
EvalReport cross_validate(const Dataset& dataset, const PipelineConfig& config,
                          const std::vector<Method>& methods, int workers = 1);

}  // namespace gorec
