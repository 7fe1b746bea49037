#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gorec/eval.hpp"

namespace gorec {

struct TuneResult {
    std::size_t best_n_f = 0;
    std::size_t best_n_c = 0;
    WeightParams best_weights;
    double best_f1 = 0.0;

    struct Row {
        std::size_t n_f = 0;
        std::size_t n_c = 0;
        WeightParams weights;
        double f1 = 0.0;
        bool feasible = true;
        std::string note;
    };
    std::vector<Row> table;  // in deterministic evaluation order
    std::uint64_t seed = 0;

    std::string to_json() const;
};

/// Brute-force search over (n_f, n_c) with fixed weight parameters. Score
/// per cell = F1 of mean precision/recall over all PM instances and levels.
/// Infeasible cells (e.g. n_c above the distinct-row count of some fold)
/// are skipped and recorded. Ties keep the first cell in row-major
/// (n_f, n_c) order.
/// `progress_path`, when non-empty, names a JSONL file used to resume an
/// interrupted search: finished configurations are appended as they complete
/// and skipped on restart.
TuneResult grid_search(const Dataset& dataset, const std::vector<std::size_t>& nf_values,
                       const std::vector<std::size_t>& nc_values, const PipelineConfig& base,
                       int workers = 1, const std::string& progress_path = "");

struct LhsBounds {
    std::pair<double, double> phi{0.0, 5.0};
    std::pair<double, double> delta{0.0, 2.0};
    std::pair<double, double> lambda{1.0, 4.0};
    std::pair<double, double> beta{0.0, 1.0};  // strata midpoints stay in (0, 1]
};

/// Latin hypercube sample of weight parameters: each parameter's n values
/// sit at the midpoints of n equal-width strata, in seeded-random stratum
/// order, independently per parameter.
std::vector<WeightParams> lhs_sample(const LhsBounds& bounds, std::size_t n_samples,
                                     std::uint64_t seed);

/// Evaluate each candidate (PM method only) on the base (n_f, n_c) and keep
/// the highest-F1 configuration. Ties keep the earliest candidate.
TuneResult tune_weights(const Dataset& dataset, const std::vector<WeightParams>& candidates,
                        const PipelineConfig& base, int workers = 1,
                        const std::string& progress_path = "");

}  // namespace gorec
