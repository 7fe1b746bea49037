#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gorec {

/// One reaching attempt: an ordered sequence of feature rows. Row order is
/// collection order; there is no timestamp column.
struct ContinuousTrace {
    std::string trace_id;
    std::string goal;
    std::vector<std::vector<double>> rows;
    double sample_period = 0.1;  // seconds per row
};

struct Dataset {
    std::size_t feature_count = 0;
    std::vector<std::string> feature_names;
    std::vector<std::string> goals;  // unique, in first-appearance order
    std::vector<ContinuousTrace> traces;

    /// Throws validation_error on empty traces, ragged rows, non-finite
    /// values, or goal labels missing from `goals`.
    void validate() const;
};

struct CsvSchema {
    std::string trace_column = "trace";
    std::string goal_column = "goal";
    // Empty means: every column that is not the trace/goal column, in
    // header order.
    std::vector<std::string> feature_columns;
};

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema = {});
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

/// First ceil(fraction * rows) rows, never fewer than one. fraction must be
/// in (0, 1].
ContinuousTrace truncate_prefix(const ContinuousTrace& trace, double fraction);

/// Leave-one-trace-per-goal-out plan. Fold i tests the i-th trace of each
/// goal (in dataset order) and trains on everything else.
struct FoldPlan {
    struct Fold {
        std::vector<std::size_t> test_trace_indices;
        std::vector<std::size_t> train_trace_indices;
    };
    std::vector<Fold> folds;
};

FoldPlan split_folds(const Dataset& dataset);

struct SynthSpec {
    int goals = 3;
    int traces_per_goal = 30;
    int features = 47;
    int regimes_per_goal = 4;
    double noise = 0.5;
    std::uint64_t seed = 1;
    // Rows emitted per regime visit, drawn uniformly per (trace, regime).
    int rows_per_regime_min = 6;
    int rows_per_regime_max = 12;
    // Features [0, informative) get goal-specific regime means; the rest
    // share one goal-independent regime track.
    int informative_features = 8;
    double regime_spread = 3.0;
};

/// Seeded generator for desk-scale experiments: each goal follows its own
/// ordered sequence of hidden regimes, rows are regime mean + Gaussian noise.
Dataset synth_dataset(const SynthSpec& spec);

/// All rows of the given traces, pooled in trace order.
std::vector<std::vector<double>> pooled_rows(const Dataset& dataset,
                                             const std::vector<std::size_t>& trace_indices);

}  // namespace gorec
