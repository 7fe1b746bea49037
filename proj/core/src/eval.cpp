#include "gorec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gorec/errors.hpp"
#include "gorec/parallel.hpp"
#include "gorec/stats.hpp"
#include "json.hpp"

namespace gorec {

std::string method_name(Method method) { return method == Method::PM ? "pm" : "lda"; }

Method method_from_name(const std::string& name) {
    if (name == "PM" || name == "pm") return Method::PM;
    if (name == "LDA" || name == "lda") return Method::LDA;
    throw domain_error("unknown method '" + name + "' (PM|LDA)");
}

TrainedArtifacts fit_artifacts(const Dataset& dataset,
                               const std::vector<std::size_t>& train_trace_indices,
                               const PipelineConfig& config) {
    const auto train_rows = pooled_rows(dataset, train_trace_indices);
    const auto corr = correlation_matrix(train_rows);

    TrainedArtifacts artifacts;
    artifacts.selection =
        select_medoids(cluster_features(corr, config.n_f, config.linkage), corr);

    KMeansOptions kmeans;
    kmeans.restarts = config.kmeans_restarts;
    kmeans.normalize = config.normalize;
    artifacts.codebook = fit_codebook(train_rows, artifacts.selection.selected, config.n_c,
                                      config.seed, kmeans);

    auto logs = discretize(dataset, train_trace_indices, artifacts.codebook);
    for (const auto& goal : dataset.goals) {
        const auto it = logs.find(goal);
        if (it == logs.end())
            throw validation_error("fit_artifacts: no training traces for goal '" + goal + "'");
        artifacts.models.push_back(build_model(it->second, config.filter_threshold));
    }
    return artifacts;
}

LdaModel fit_lda_baseline(const Dataset& dataset,
                          const std::vector<std::size_t>& train_trace_indices,
                          const FeatureSelection& selection, const PipelineConfig& config) {
    std::vector<std::vector<double>> points;
    std::vector<std::size_t> labels;
    for (std::size_t g = 0; g < dataset.goals.size(); ++g) {
        auto goal_points = lda_training_points(dataset, train_trace_indices, dataset.goals[g],
                                               selection.selected, config.lda_tail_rows);
        for (auto& p : goal_points) {
            points.push_back(std::move(p));
            labels.push_back(g);
        }
    }
    return fit_lda(points, labels, dataset.goals);
}

std::pair<double, double> instance_metrics(const std::vector<std::string>& inferred,
                                           const std::string& true_goal) {
    if (inferred.empty()) throw validation_error("instance_metrics: empty inferred set");
    const bool hit = std::find(inferred.begin(), inferred.end(), true_goal) != inferred.end();
    const double precision = hit ? 1.0 / static_cast<double>(inferred.size()) : 0.0;
    const double recall = hit ? 1.0 : 0.0;
    return {precision, recall};
}

std::optional<double> probability_gap(const GoalPosterior& posterior,
                                      const std::string& true_goal) {
    if (std::find(posterior.inferred.begin(), posterior.inferred.end(), true_goal) !=
        posterior.inferred.end())
        return std::nullopt;
    double max_inferred = 0.0;
    for (const auto& goal : posterior.inferred)
        max_inferred = std::max(max_inferred, posterior.probabilities.at(goal));
    const auto it = posterior.probabilities.find(true_goal);
    const double true_prob = it == posterior.probabilities.end() ? 0.0 : it->second;
    return max_inferred - true_prob;
}

namespace {

InstanceResult score_pm(const ContinuousTrace& prefix, const TrainedArtifacts& artifacts,
                        const PipelineConfig& config) {
    InstanceResult result;
    const auto posterior = recognize(prefix, artifacts, config.weights);
    result.inferred = posterior.inferred;
    result.posterior = posterior.probabilities;
    std::tie(result.precision, result.recall) =
        instance_metrics(posterior.inferred, prefix.goal);
    result.gap = probability_gap(posterior, prefix.goal);
    return result;
}

InstanceResult score_lda(const ContinuousTrace& prefix, const LdaModel& lda,
                         const FeatureSelection& selection) {
    InstanceResult result;
    const auto point = project_row(prefix.rows.back(), selection.selected);
    const auto [label, posterior] = lda_classify(lda, point);
    result.inferred = {lda.classes[label]};
    for (std::size_t c = 0; c < lda.classes.size(); ++c)
        result.posterior[lda.classes[c]] = posterior[c];
    std::tie(result.precision, result.recall) = instance_metrics(result.inferred, prefix.goal);
    if (result.recall == 0.0)
        result.gap = posterior[label] - result.posterior.at(prefix.goal);
    return result;
}

}  // namespace

EvalReport cross_validate(const Dataset& dataset, const PipelineConfig& config,
                          const std::vector<Method>& methods, int workers) {
    dataset.validate();
    config.weights.validate();
    if (methods.empty()) throw validation_error("cross_validate: no methods requested");
    for (double level : config.obs_levels)
        if (!(level > 0.0) || level > 1.0)
            throw domain_error("cross_validate: observation levels must be in (0, 1]");

    const FoldPlan plan = split_folds(dataset);
    std::vector<std::vector<InstanceResult>> per_fold(plan.folds.size());

    parallel_for(plan.folds.size(), workers, [&](std::size_t fold) {
        const auto& f = plan.folds[fold];
        if (f.train_trace_indices.empty())
            throw validation_error("cross_validate: fold " + std::to_string(fold) +
                                   " has an empty training set");
        TrainedArtifacts artifacts;
        LdaModel lda;
        try {
            artifacts = fit_artifacts(dataset, f.train_trace_indices, config);
            if (std::find(methods.begin(), methods.end(), Method::LDA) != methods.end())
                lda = fit_lda_baseline(dataset, f.train_trace_indices, artifacts.selection,
                                       config);
        } catch (const validation_error& e) {
            throw validation_error("fold " + std::to_string(fold) + ": " + e.what());
        }

        for (std::size_t t : f.test_trace_indices) {
            const auto& trace = dataset.traces[t];
            for (double level : config.obs_levels) {
                const auto prefix = truncate_prefix(trace, level);
                for (Method method : methods) {
                    InstanceResult result;
                    try {
                        result = method == Method::PM ? score_pm(prefix, artifacts, config)
                                                      : score_lda(prefix, lda, artifacts.selection);
                    } catch (const validation_error& e) {
                        throw validation_error("fold " + std::to_string(fold) + ", trace '" +
                                               trace.trace_id + "', level " +
                                               std::to_string(level) + ": " + e.what());
                    }
                    result.subject = config.subject;
                    result.method = method_name(method);
                    result.fold = fold;
                    result.trace_id = trace.trace_id;
                    result.obs_level = level;
                    result.true_goal = trace.goal;
                    per_fold[fold].push_back(std::move(result));
                }
            }
        }
    });

    EvalReport report;
    report.subject = config.subject;
    for (auto& fold_results : per_fold)
        for (auto& r : fold_results) report.instances.push_back(std::move(r));

    // Aggregates per (method, observation level), in request order.
    for (Method method : methods) {
        const std::string name = method_name(method);
        for (double level : config.obs_levels) {
            std::vector<double> ps, rs;
            for (const auto& inst : report.instances)
                if (inst.method == name && inst.obs_level == level) {
                    ps.push_back(inst.precision);
                    rs.push_back(inst.recall);
                }
            if (ps.empty()) continue;
            AggregateRow row;
            row.subject = config.subject;
            row.method = name;
            row.obs_level = level;
            std::tie(row.mean_precision, row.ci_precision) = mean_ci(ps);
            std::tie(row.mean_recall, row.ci_recall) = mean_ci(rs);
            row.f1 = f1_score(row.mean_precision, row.mean_recall);
            row.n = ps.size();
            report.aggregates.push_back(row);
        }
    }

    for (Method method : methods) {
        const std::string name = method_name(method);
        MethodSummary summary;
        summary.method = name;
        std::vector<double> ps, rs;
        double gap_sum = 0.0;
        std::size_t gap_count = 0;
        for (const auto& inst : report.instances) {
            if (inst.method != name) continue;
            ps.push_back(inst.precision);
            rs.push_back(inst.recall);
            if (inst.gap) {
                gap_sum += *inst.gap;
                ++gap_count;
            }
        }
        summary.mean_precision = mean_ci(ps).first;
        summary.mean_recall = mean_ci(rs).first;
        summary.f1 = f1_score(summary.mean_precision, summary.mean_recall);
        summary.wrong_instances = gap_count;
        if (gap_count > 0) summary.mean_gap = gap_sum / static_cast<double>(gap_count);
        report.summaries.push_back(summary);
    }

    // Pairwise per-instance comparisons between methods, both metrics.
    for (std::size_t a = 0; a < methods.size(); ++a) {
        for (std::size_t b = a + 1; b < methods.size(); ++b) {
            for (const std::string metric : {"precision", "recall"}) {
                std::vector<double> sa, sb;
                for (const auto& inst : report.instances) {
                    const double v = metric == std::string("precision") ? inst.precision
                                                                        : inst.recall;
                    if (inst.method == method_name(methods[a])) sa.push_back(v);
                    if (inst.method == method_name(methods[b])) sb.push_back(v);
                }
                if (sa.size() < 2 || sb.size() < 2) continue;
                report.tests.push_back({method_name(methods[a]), method_name(methods[b]), metric,
                                        welch_t_test(sa, sb)});
            }
        }
    }
    if (!report.tests.empty())
        report.sidak_corrected_alpha = sidak_alpha(report.alpha, report.tests.size());
    return report;
}

std::string EvalReport::to_json() const {
    nlohmann::ordered_json j;
    j["subject"] = subject;
    j["samples"] = "per-instance";  // t-tests pool per-instance values

    nlohmann::ordered_json aggs = nlohmann::ordered_json::array();
    for (const auto& row : aggregates)
        aggs.push_back({{"subject", row.subject},
                        {"method", row.method},
                        {"obs_level", row.obs_level},
                        {"mean_precision", row.mean_precision},
                        {"ci_precision", row.ci_precision},
                        {"mean_recall", row.mean_recall},
                        {"ci_recall", row.ci_recall},
                        {"f1", row.f1},
                        {"n", row.n}});
    j["aggregates"] = aggs;

    nlohmann::ordered_json sums = nlohmann::ordered_json::array();
    for (const auto& s : summaries) {
        nlohmann::ordered_json item = {{"method", s.method},
                                       {"mean_precision", s.mean_precision},
                                       {"mean_recall", s.mean_recall},
                                       {"f1", s.f1},
                                       {"wrong_instances", s.wrong_instances}};
        if (s.mean_gap) item["mean_probability_gap"] = *s.mean_gap;
        sums.push_back(item);
    }
    j["summaries"] = sums;

    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    for (const auto& t : tests)
        ts.push_back({{"method_a", t.method_a},
                      {"method_b", t.method_b},
                      {"metric", t.metric},
                      {"p_value", t.p_value}});
    j["pairwise_tests"] = ts;
    j["alpha"] = alpha;
    j["sidak_corrected_alpha"] = sidak_corrected_alpha;

    nlohmann::ordered_json insts = nlohmann::ordered_json::array();
    for (const auto& inst : instances) {
        nlohmann::ordered_json item = {{"subject", inst.subject},
                                       {"method", inst.method},
                                       {"fold", inst.fold},
                                       {"trace", inst.trace_id},
                                       {"obs_level", inst.obs_level},
                                       {"true_goal", inst.true_goal},
                                       {"inferred", inst.inferred},
                                       {"posterior", inst.posterior},
                                       {"precision", inst.precision},
                                       {"recall", inst.recall}};
        if (inst.gap) item["probability_gap"] = *inst.gap;
        insts.push_back(item);
    }
    j["instances"] = insts;
    return j.dump(2);
}

namespace {

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

}  // namespace

std::string EvalReport::summary_csv() const {
    std::string csv =
        "subject,method,obs_level,mean_precision,ci_precision,mean_recall,ci_recall,f1,n\n";
    for (const auto& row : aggregates)
        csv += row.subject + "," + row.method + "," + format_number(row.obs_level) + "," +
               format_number(row.mean_precision) + "," + format_number(row.ci_precision) + "," +
               format_number(row.mean_recall) + "," + format_number(row.ci_recall) + "," +
               format_number(row.f1) + "," + std::to_string(row.n) + "\n";
    return csv;
}

std::string EvalReport::instances_csv() const {
    std::string csv =
        "subject,method,fold,trace_id,obs_level,true_goal,inferred,precision,recall,"
        "probability_gap\n";
    for (const auto& inst : instances) {
        std::string inferred;
        for (const auto& goal : inst.inferred)
            inferred += (inferred.empty() ? "" : "|") + goal;
        csv += inst.subject + "," + inst.method + "," + std::to_string(inst.fold) + "," +
               inst.trace_id + "," + format_number(inst.obs_level) + "," + inst.true_goal + "," +
               inferred + "," + format_number(inst.precision) + "," +
               format_number(inst.recall) + "," + (inst.gap ? format_number(*inst.gap) : "") +
               "\n";
    }
    return csv;
}

}  // namespace gorec
