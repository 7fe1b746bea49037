#include "gorec/tune.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "gorec/errors.hpp"
#include "gorec/parallel.hpp"
#include "gorec/rng.hpp"
#include "gorec/stats.hpp"
#include "json.hpp"

namespace gorec {

namespace {

double pm_f1(const EvalReport& report) {
    for (const auto& summary : report.summaries)
        if (summary.method == method_name(Method::PM)) return summary.f1;
    throw std::logic_error("pm_f1: report has no PM summary");
}

TuneResult pick_best(std::vector<TuneResult::Row> table, std::uint64_t seed) {
    TuneResult result;
    result.table = std::move(table);
    result.seed = seed;
    bool found = false;
    for (const auto& row : result.table) {
        if (!row.feasible) continue;
        if (!found || row.f1 > result.best_f1) {
            result.best_f1 = row.f1;
            result.best_n_f = row.n_f;
            result.best_n_c = row.n_c;
            result.best_weights = row.weights;
            found = true;
        }
    }
    if (!found) throw infeasible_error("tuning: every configuration was infeasible");
    return result;
}

// JSONL progress log keyed by configuration, so long searches can resume.
class ProgressFile {
  public:
    explicit ProgressFile(const std::string& path) : path_(path) {
        if (path_.empty()) return;
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.contains("key")) continue;
            done_[j.at("key").get<std::string>()] = j;
        }
    }

    bool lookup(const std::string& key, TuneResult::Row& row) const {
        const auto it = done_.find(key);
        if (it == done_.end()) return false;
        row.f1 = it->second.value("f1", 0.0);
        row.feasible = it->second.value("feasible", true);
        row.note = it->second.value("note", std::string());
        return true;
    }

    void record(const std::string& key, const TuneResult::Row& row) {
        if (path_.empty()) return;
        nlohmann::ordered_json j;
        j["key"] = key;
        j["f1"] = row.f1;
        j["feasible"] = row.feasible;
        if (!row.note.empty()) j["note"] = row.note;
        std::ofstream out(path_, std::ios::app);
        out << j.dump() << "\n";
    }

  private:
    std::string path_;
    std::map<std::string, nlohmann::json> done_;
};

std::string weights_key(const WeightParams& w) {
    std::ostringstream key;
    key.precision(17);
    key << w.phi << ":" << w.delta << ":" << w.lambda << ":" << w.beta;
    return key.str();
}

}  // namespace

TuneResult grid_search(const Dataset& dataset, const std::vector<std::size_t>& nf_values,
                       const std::vector<std::size_t>& nc_values, const PipelineConfig& base,
                       int workers, const std::string& progress_path) {
    if (nf_values.empty() || nc_values.empty())
        throw domain_error("grid_search: empty parameter range");

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t n_f : nf_values)
        for (std::size_t n_c : nc_values) cells.emplace_back(n_f, n_c);

    ProgressFile progress(progress_path);
    std::vector<TuneResult::Row> table(cells.size());
    // Workers go to the inner cross-validation; evaluating cells in sequence
    // keeps memory flat and the result is order-independent anyway.
    for (std::size_t i = 0; i < cells.size(); ++i) {
        auto& row = table[i];
        row.n_f = cells[i].first;
        row.n_c = cells[i].second;
        row.weights = base.weights;
        const std::string key =
            "grid:" + std::to_string(row.n_f) + ":" + std::to_string(row.n_c);
        if (progress.lookup(key, row)) continue;
        PipelineConfig config = base;
        config.n_f = cells[i].first;
        config.n_c = cells[i].second;
        try {
            row.f1 = pm_f1(cross_validate(dataset, config, {Method::PM}, workers));
        } catch (const validation_error& e) {
            row.feasible = false;
            row.note = e.what();
        }
        progress.record(key, row);
    }
    return pick_best(std::move(table), base.seed);
}

std::vector<WeightParams> lhs_sample(const LhsBounds& bounds, std::size_t n_samples,
                                     std::uint64_t seed) {
    if (n_samples < 1) throw domain_error("lhs_sample: n_samples must be >= 1");
    auto check = [](std::pair<double, double> b, const char* name) {
        if (!(b.first < b.second) && !(b.first == b.second))
            throw domain_error(std::string("lhs_sample: invalid bounds for ") + name);
        if (!std::isfinite(b.first) || !std::isfinite(b.second))
            throw domain_error(std::string("lhs_sample: non-finite bounds for ") + name);
    };
    check(bounds.phi, "phi");
    check(bounds.delta, "delta");
    check(bounds.lambda, "lambda");
    check(bounds.beta, "beta");
    if (bounds.lambda.first < 1.0) throw domain_error("lhs_sample: lambda lower bound must be >= 1");
    if (bounds.beta.first < 0.0 || bounds.beta.second > 1.0)
        throw domain_error("lhs_sample: beta bounds must lie within [0, 1]");

    Rng rng(seed);
    auto strata = [&](std::pair<double, double> b) {
        // Midpoints of n equal strata, then a seeded shuffle of the order.
        std::vector<double> values(n_samples);
        const double width = (b.second - b.first) / static_cast<double>(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i)
            values[i] = b.first + width * (static_cast<double>(i) + 0.5);
        for (std::size_t i = n_samples; i-- > 1;)
            std::swap(values[i],
                      values[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i)))]);
        return values;
    };
    const auto phis = strata(bounds.phi);
    const auto deltas = strata(bounds.delta);
    const auto lambdas = strata(bounds.lambda);
    const auto betas = strata(bounds.beta);

    std::vector<WeightParams> samples(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        samples[i].phi = phis[i];
        samples[i].delta = deltas[i];
        samples[i].lambda = lambdas[i];
        samples[i].beta = betas[i];
        samples[i].validate();
    }
    return samples;
}

TuneResult tune_weights(const Dataset& dataset, const std::vector<WeightParams>& candidates,
                        const PipelineConfig& base, int workers,
                        const std::string& progress_path) {
    if (candidates.empty()) throw domain_error("tune_weights: no candidates");
    ProgressFile progress(progress_path);
    std::vector<TuneResult::Row> table(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        auto& row = table[i];
        row.n_f = base.n_f;
        row.n_c = base.n_c;
        row.weights = candidates[i];
        const std::string key = "weights:" + weights_key(candidates[i]);
        if (progress.lookup(key, row)) continue;
        PipelineConfig config = base;
        config.weights = candidates[i];
        try {
            row.f1 = pm_f1(cross_validate(dataset, config, {Method::PM}, workers));
        } catch (const validation_error& e) {
            row.feasible = false;
            row.note = e.what();
        }
        progress.record(key, row);
    }
    return pick_best(std::move(table), base.seed);
}

std::string TuneResult::to_json() const {
    nlohmann::ordered_json j;
    j["best"] = {{"n_f", best_n_f},
                 {"n_c", best_n_c},
                 {"f1", best_f1},
                 {"weights", nlohmann::json::parse(best_weights.to_json())}};
    j["seed"] = seed;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table) {
        nlohmann::ordered_json item = {{"n_f", row.n_f},
                                       {"n_c", row.n_c},
                                       {"weights", nlohmann::json::parse(row.weights.to_json())},
                                       {"f1", row.f1},
                                       {"feasible", row.feasible}};
        if (!row.note.empty()) item["note"] = row.note;
        rows.push_back(item);
    }
    j["table"] = rows;
    return j.dump(2);
}

}  // namespace gorec
