#include "gorec/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "gorec/errors.hpp"
#include "gorec/rng.hpp"

namespace gorec {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

void Dataset::validate() const {
    if (traces.empty()) throw validation_error("dataset has no traces");
    for (const auto& trace : traces) {
        if (trace.rows.empty())
            throw validation_error("trace '" + trace.trace_id + "' has no rows");
        if (std::find(goals.begin(), goals.end(), trace.goal) == goals.end())
            throw validation_error("trace '" + trace.trace_id + "' has unknown goal '" +
                                   trace.goal + "'");
        for (const auto& row : trace.rows) {
            if (row.size() != feature_count)
                throw validation_error("trace '" + trace.trace_id + "' has a row with " +
                                       std::to_string(row.size()) + " features, expected " +
                                       std::to_string(feature_count));
            for (double v : row)
                if (!std::isfinite(v))
                    throw validation_error("trace '" + trace.trace_id +
                                           "' contains a non-finite feature value");
        }
    }
}

Dataset load_dataset(const std::filesystem::path& path, const CsvSchema& schema) {
    std::ifstream file(path);
    if (!file.good()) throw validation_error("cannot open dataset file: " + path.string());

    std::string header_line;
    if (!std::getline(file, header_line)) throw parse_error("empty file: " + path.string());
    const auto header = split_csv_line(header_line);

    std::unordered_map<std::string, std::size_t> column_index;
    for (std::size_t i = 0; i < header.size(); ++i) column_index[trim(header[i])] = i;

    auto require_column = [&](const std::string& name) {
        const auto it = column_index.find(name);
        if (it == column_index.end())
            throw schema_error("missing column '" + name + "' in " + path.string());
        return it->second;
    };
    const std::size_t trace_col = require_column(schema.trace_column);
    const std::size_t goal_col = require_column(schema.goal_column);

    std::vector<std::size_t> feature_cols;
    std::vector<std::string> feature_names;
    if (schema.feature_columns.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i == trace_col || i == goal_col) continue;
            feature_cols.push_back(i);
            feature_names.push_back(trim(header[i]));
        }
    } else {
        for (const auto& name : schema.feature_columns) {
            feature_cols.push_back(require_column(name));
            feature_names.push_back(name);
        }
    }

    Dataset dataset;
    dataset.feature_count = feature_cols.size();
    dataset.feature_names = std::move(feature_names);

    std::unordered_map<std::string, std::size_t> trace_slot;
    std::string line;
    std::size_t row_index = 1;  // 1-based over data rows, for error messages
    while (std::getline(file, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < header.size())
            throw parse_error("row " + std::to_string(row_index) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        const std::string trace_id = trim(fields[trace_col]);
        const std::string goal = trim(fields[goal_col]);

        auto slot = trace_slot.find(trace_id);
        if (slot == trace_slot.end()) {
            slot = trace_slot.emplace(trace_id, dataset.traces.size()).first;
            dataset.traces.push_back(ContinuousTrace{trace_id, goal, {}, 0.1});
            if (std::find(dataset.goals.begin(), dataset.goals.end(), goal) ==
                dataset.goals.end())
                dataset.goals.push_back(goal);
        }
        std::vector<double> row;
        row.reserve(feature_cols.size());
        for (std::size_t c : feature_cols) {
            const std::string cell = trim(fields[c]);
            try {
                std::size_t consumed = 0;
                const double v = std::stod(cell, &consumed);
                if (consumed != cell.size()) throw std::invalid_argument(cell);
                row.push_back(v);
            } catch (const std::exception&) {
                throw parse_error("row " + std::to_string(row_index) + ": non-numeric value '" +
                                  cell + "' in column '" + trim(header[c]) + "'");
            }
        }
        dataset.traces[slot->second].rows.push_back(std::move(row));
        ++row_index;
    }
    return dataset;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file.good()) throw validation_error("cannot write dataset file: " + path.string());
    file << "trace,goal";
    for (const auto& name : dataset.feature_names) file << ',' << name;
    file << '\n';
    file.precision(17);
    for (const auto& trace : dataset.traces) {
        for (const auto& row : trace.rows) {
            file << trace.trace_id << ',' << trace.goal;
            for (double v : row) file << ',' << v;
            file << '\n';
        }
    }
}

ContinuousTrace truncate_prefix(const ContinuousTrace& trace, double fraction) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw domain_error("prefix fraction must be in (0, 1], got " + std::to_string(fraction));
    const auto total = trace.rows.size();
    auto keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total)));
    keep = std::max<std::size_t>(keep, 1);
    keep = std::min(keep, total);
    ContinuousTrace prefix = trace;
    prefix.rows.assign(trace.rows.begin(), trace.rows.begin() + static_cast<long>(keep));
    return prefix;
}

FoldPlan split_folds(const Dataset& dataset) {
    std::unordered_map<std::string, std::vector<std::size_t>> by_goal;
    for (std::size_t i = 0; i < dataset.traces.size(); ++i)
        by_goal[dataset.traces[i].goal].push_back(i);

    std::size_t per_goal = 0;
    bool first = true;
    std::string mismatch;
    for (const auto& goal : dataset.goals) {
        const auto count = by_goal[goal].size();
        if (first) {
            per_goal = count;
            first = false;
        } else if (count != per_goal) {
            mismatch += (mismatch.empty() ? "" : ", ") + goal + " has " + std::to_string(count);
        }
    }
    if (!mismatch.empty())
        throw validation_error("unequal trace counts per goal (expected " +
                               std::to_string(per_goal) + "): " + mismatch);
    if (per_goal == 0) throw validation_error("dataset has no traces to fold");

    FoldPlan plan;
    plan.folds.resize(per_goal);
    for (std::size_t fold = 0; fold < per_goal; ++fold) {
        auto& f = plan.folds[fold];
        for (const auto& goal : dataset.goals) f.test_trace_indices.push_back(by_goal[goal][fold]);
        std::sort(f.test_trace_indices.begin(), f.test_trace_indices.end());
        for (std::size_t i = 0; i < dataset.traces.size(); ++i)
            if (!std::binary_search(f.test_trace_indices.begin(), f.test_trace_indices.end(), i))
                f.train_trace_indices.push_back(i);
    }
    return plan;
}

Dataset synth_dataset(const SynthSpec& spec) {
    if (spec.goals < 1 || spec.traces_per_goal < 1 || spec.features < 1 ||
        spec.regimes_per_goal < 1)
        throw domain_error("synth_dataset: goals, traces, features and regimes must be >= 1");
    if (spec.noise < 0.0) throw domain_error("synth_dataset: noise must be >= 0");
    if (spec.rows_per_regime_min < 1 || spec.rows_per_regime_max < spec.rows_per_regime_min)
        throw domain_error("synth_dataset: invalid rows-per-regime range");

    const int informative = std::clamp(spec.informative_features, 0, spec.features);
    Rng master(spec.seed);

    // Shared regime track for uninformative features: identical across goals
    // so they carry no goal signal beyond noise.
    std::vector<std::vector<double>> shared_means(static_cast<std::size_t>(spec.regimes_per_goal));
    Rng shared_rng = master.fork(0xA11CE);
    for (auto& mean : shared_means) {
        mean.resize(static_cast<std::size_t>(spec.features - informative));
        for (auto& v : mean) v = spec.regime_spread * shared_rng.normal();
    }

    Dataset dataset;
    dataset.feature_count = static_cast<std::size_t>(spec.features);
    for (int f = 0; f < spec.features; ++f) dataset.feature_names.push_back("f" + std::to_string(f + 1));

    std::size_t trace_counter = 0;
    for (int g = 0; g < spec.goals; ++g) {
        const std::string goal = "G" + std::to_string(g + 1);
        dataset.goals.push_back(goal);

        Rng goal_rng = master.fork(0x60A1 + static_cast<std::uint64_t>(g));
        std::vector<std::vector<double>> regime_means(static_cast<std::size_t>(spec.regimes_per_goal));
        for (std::size_t r = 0; r < regime_means.size(); ++r) {
            regime_means[r].resize(static_cast<std::size_t>(spec.features));
            for (int f = 0; f < informative; ++f)
                regime_means[r][static_cast<std::size_t>(f)] = spec.regime_spread * goal_rng.normal();
            for (int f = informative; f < spec.features; ++f)
                regime_means[r][static_cast<std::size_t>(f)] =
                    shared_means[r][static_cast<std::size_t>(f - informative)];
        }

        for (int t = 0; t < spec.traces_per_goal; ++t) {
            ContinuousTrace trace;
            trace.trace_id = "t" + std::to_string(++trace_counter);
            trace.goal = goal;
            Rng trace_rng = goal_rng.fork(static_cast<std::uint64_t>(t) + 1);
            for (const auto& mean : regime_means) {
                const auto rows = trace_rng.uniform_int(spec.rows_per_regime_min,
                                                        spec.rows_per_regime_max);
                for (std::int64_t row = 0; row < rows; ++row) {
                    std::vector<double> values(mean.size());
                    for (std::size_t f = 0; f < values.size(); ++f)
                        values[f] = mean[f] + spec.noise * trace_rng.normal();
                    trace.rows.push_back(std::move(values));
                }
            }
            dataset.traces.push_back(std::move(trace));
        }
    }
    return dataset;
}

std::vector<std::vector<double>> pooled_rows(const Dataset& dataset,
                                             const std::vector<std::size_t>& trace_indices) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i : trace_indices) {
        const auto& trace = dataset.traces.at(i);
        rows.insert(rows.end(), trace.rows.begin(), trace.rows.end());
    }
    return rows;
}

}  // namespace gorec
