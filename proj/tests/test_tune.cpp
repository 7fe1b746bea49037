#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>

#include "doctest.h"
#include "gorec/tune.hpp"

using namespace gorec;

namespace {

Dataset tiny_dataset() {
    SynthSpec spec;
    spec.goals = 2;
    spec.traces_per_goal = 3;
    spec.features = 5;
    spec.informative_features = 3;
    spec.regimes_per_goal = 2;
    spec.rows_per_regime_min = 5;
    spec.rows_per_regime_max = 7;
    spec.noise = 0.2;
    spec.seed = 21;
    return synth_dataset(spec);
}

PipelineConfig tiny_config() {
    PipelineConfig config;
    config.n_f = 3;
    config.n_c = 4;
    config.obs_levels = {0.5, 1.0};
    config.kmeans_restarts = 2;
    config.seed = 5;
    return config;
}

}  // namespace

TEST_CASE("lhs_sample: each parameter covers every stratum midpoint once") {
    LhsBounds bounds;
    bounds.phi = {0.0, 1.0};
    bounds.delta = {0.0, 1.0};
    bounds.lambda = {1.0, 2.0};
    bounds.beta = {0.0, 1.0};
    const auto samples = lhs_sample(bounds, 4, 33);
    REQUIRE(samples.size() == 4);

    std::multiset<double> phis, deltas, lambdas, betas;
    for (const auto& sample : samples) {
        phis.insert(sample.phi);
        deltas.insert(sample.delta);
        lambdas.insert(sample.lambda);
        betas.insert(sample.beta);
    }
    const std::multiset<double> unit = {0.125, 0.375, 0.625, 0.875};
    CHECK(phis == unit);
    CHECK(deltas == unit);
    CHECK(betas == unit);
    CHECK(lambdas == std::multiset<double>{1.125, 1.375, 1.625, 1.875});
}

TEST_CASE("lhs_sample determinism and seed sensitivity") {
    const auto a = lhs_sample({}, 8, 42);
    const auto b = lhs_sample({}, 8, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].phi == b[i].phi);
        CHECK(a[i].delta == b[i].delta);
        CHECK(a[i].lambda == b[i].lambda);
        CHECK(a[i].beta == b[i].beta);
    }
    const auto c = lhs_sample({}, 8, 43);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].phi != c[i].phi || a[i].beta != c[i].beta) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("grid_search picks the best feasible cell and reports the table") {
    const auto dataset = tiny_dataset();
    const auto base = tiny_config();
    const auto result = grid_search(dataset, {2, 3}, {3, 4}, base);

    REQUIRE(result.table.size() == 4);
    double best_seen = -1.0;
    for (const auto& row : result.table)
        if (row.feasible) best_seen = std::max(best_seen, row.f1);
    CHECK(result.best_f1 == best_seen);

    bool found = false;
    for (const auto& row : result.table)
        if (row.feasible && row.n_f == result.best_n_f && row.n_c == result.best_n_c &&
            row.f1 == result.best_f1)
            found = true;
    CHECK(found);

    // ties keep the earliest row
    for (const auto& row : result.table) {
        if (!row.feasible) continue;
        if (row.f1 == result.best_f1) {
            CHECK(row.n_f == result.best_n_f);
            CHECK(row.n_c == result.best_n_c);
            break;
        }
    }
}

TEST_CASE("grid_search records infeasible cells instead of failing") {
    const auto dataset = tiny_dataset();
    const auto result = grid_search(dataset, {2}, {3, 100000}, tiny_config());
    REQUIRE(result.table.size() == 2);
    CHECK(result.table[0].feasible);
    CHECK_FALSE(result.table[1].feasible);
    CHECK(!result.table[1].note.empty());
    CHECK(result.best_n_c == 3);
}

TEST_CASE("tune_weights keeps the earliest best candidate") {
    const auto dataset = tiny_dataset();
    const auto base = tiny_config();
    const auto candidates = lhs_sample({}, 3, 9);
    const auto result = tune_weights(dataset, candidates, base);
    REQUIRE(result.table.size() == 3);
    double best = -1.0;
    std::size_t first_best = 0;
    for (std::size_t i = 0; i < result.table.size(); ++i)
        if (result.table[i].f1 > best) {
            best = result.table[i].f1;
            first_best = i;
        }
    CHECK(result.best_f1 == best);
    CHECK(result.best_weights.phi == result.table[first_best].weights.phi);
    CHECK(result.best_weights.beta == result.table[first_best].weights.beta);
}

TEST_CASE("phi shifts every weight equally, so the ranking F1 is invariant") {
    const auto dataset = tiny_dataset();
    const auto base = tiny_config();
    WeightParams w1, w2;
    w1.phi = 0.0;
    w2.phi = 4.0;
    const auto result = tune_weights(dataset, {w1, w2}, base);
    REQUIRE(result.table.size() == 2);
    CHECK(result.table[0].f1 == doctest::Approx(result.table[1].f1).epsilon(1e-9));
    CHECK(result.best_weights.phi == 0.0);  // tie keeps the first candidate
}

TEST_CASE("progress file lets a search resume without recomputation") {
    const auto dataset = tiny_dataset();
    const auto base = tiny_config();
    const auto path =
        (std::filesystem::temp_directory_path() / "gorec_tune_progress.jsonl").string();
    std::remove(path.c_str());

    const auto first = grid_search(dataset, {2, 3}, {3}, base, 1, path);
    REQUIRE(std::filesystem::exists(path));
    const auto resumed = grid_search(dataset, {2, 3}, {3}, base, 1, path);
    CHECK(resumed.to_json() == first.to_json());
    std::remove(path.c_str());
}

TEST_CASE("tune results are worker independent") {
    const auto dataset = tiny_dataset();
    const auto base = tiny_config();
    const auto a = grid_search(dataset, {2, 3}, {3, 4}, base, 1);
    const auto b = grid_search(dataset, {2, 3}, {3, 4}, base, 4);
    CHECK(a.to_json() == b.to_json());
}
