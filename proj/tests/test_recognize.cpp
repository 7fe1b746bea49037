#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "gorec/errors.hpp"
#include "gorec/recognize.hpp"
#include "gorec/rng.hpp"

using namespace gorec;
using gorec::testing::make_log;

namespace {

Alignment make_alignment(const std::vector<std::pair<MoveKind, double>>& moves) {
    Alignment alignment;
    for (const auto& [kind, cost] : moves) {
        Move move;
        move.kind = kind;
        move.cost = cost;
        if (kind != MoveKind::Model) move.trace_event = 0;
        if (kind != MoveKind::Log) move.model_event = 0;
        alignment.moves.push_back(move);
        alignment.total_cost += cost;
    }
    return alignment;
}

}  // namespace

TEST_CASE("alignment_weight hand-evaluated cases") {
    WeightParams params;  // phi=1, delta=1, lambda=2

    const auto all_sync = make_alignment({{MoveKind::Sync, 0}, {MoveKind::Sync, 0}});
    CHECK(alignment_weight(all_sync, params) == params.phi);

    // (SYNC, LOG, SYNC): m = 0, omega = 1 + 1 * (2^1 * 1) = 3
    const auto mid_log =
        make_alignment({{MoveKind::Sync, 0}, {MoveKind::Log, 1}, {MoveKind::Sync, 0}});
    CHECK(alignment_weight(mid_log, params) == 3.0);

    // (SYNC, LOG, LOG), phi=0, lambda=2, delta=0: m=2, omega = 4 * (1+1) = 8
    WeightParams flat;
    flat.phi = 0.0;
    flat.delta = 0.0;
    flat.lambda = 2.0;
    const auto trailing =
        make_alignment({{MoveKind::Sync, 0}, {MoveKind::Log, 1}, {MoveKind::Log, 1}});
    CHECK(alignment_weight(trailing, flat) == 8.0);

    // a trailing model move resets the trailing-log run
    const auto capped = make_alignment(
        {{MoveKind::Sync, 0}, {MoveKind::Log, 1}, {MoveKind::Log, 1}, {MoveKind::Model, 0}});
    CHECK(capped.trailing_log_run() == 0);
    CHECK(alignment_weight(capped, flat) == 2.0);  // lambda^0 * (1 + 1)
}

TEST_CASE("alignment_weight monotone in lambda and delta when log moves exist") {
    Rng rng(31);
    for (int round = 0; round < 100; ++round) {
        std::vector<std::pair<MoveKind, double>> moves;
        bool has_log = false;
        const int n = 1 + static_cast<int>(rng.uniform_int(0, 5));
        for (int i = 0; i < n; ++i) {
            if (rng.uniform() < 0.4) {
                moves.push_back({MoveKind::Log, 1.0});
                has_log = true;
            } else {
                moves.push_back({MoveKind::Sync, 0.0});
            }
        }
        if (!has_log) moves.push_back({MoveKind::Log, 1.0});
        const auto alignment = make_alignment(moves);
        WeightParams lo, hi;
        lo.lambda = 1.5;
        hi.lambda = 3.0;
        CHECK(alignment_weight(alignment, hi) >= alignment_weight(alignment, lo));
        WeightParams d_lo, d_hi;
        d_lo.delta = 0.5;
        d_hi.delta = 1.5;
        CHECK(alignment_weight(alignment, d_hi) >= alignment_weight(alignment, d_lo));
    }
}

TEST_CASE("goal_posterior algebra") {
    // symmetry
    const auto uniform = goal_posterior({{"a", 2.0}, {"b", 2.0}, {"c", 2.0}}, 1.0);
    for (const auto& [goal, p] : uniform) CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-12));

    // hand evaluation: weights (5, 1), beta 1
    const auto two = goal_posterior({{"a", 5.0}, {"b", 1.0}}, 1.0);
    CHECK(two.at("a") == doctest::Approx(0.0180).epsilon(1e-2));
    CHECK(two.at("b") == doctest::Approx(0.9820).epsilon(1e-3));

    // normalization and shift invariance
    Rng rng(8);
    for (int round = 0; round < 100; ++round) {
        std::map<std::string, double> weights;
        for (int g = 0; g < 4; ++g)
            weights["g" + std::to_string(g)] = rng.uniform(-10.0, 10.0);
        const double beta = rng.uniform(0.05, 1.0);
        const auto p = goal_posterior(weights, beta);
        double total = 0.0;
        for (const auto& [goal, prob] : p) total += prob;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

        auto shifted = weights;
        const double shift = rng.uniform(-5.0, 5.0);
        for (auto& [goal, w] : shifted) w += shift;
        const auto q = goal_posterior(shifted, beta);
        for (const auto& [goal, prob] : p)
            CHECK(std::abs(prob - q.at(goal)) < 1e-12);

        // order reversal: smaller weight, larger probability
        for (const auto& [ga, wa] : weights)
            for (const auto& [gb, wb] : weights)
                if (wa < wb) CHECK(p.at(ga) > p.at(gb));
    }
}

TEST_CASE("infinite weights get probability zero; all-infinite is uniform") {
    const double inf = std::numeric_limits<double>::infinity();
    const auto p = goal_posterior({{"a", 1.0}, {"b", inf}}, 1.0);
    CHECK(p.at("a") == doctest::Approx(1.0));
    CHECK(p.at("b") == 0.0);
    const auto u = goal_posterior({{"a", inf}, {"b", inf}}, 0.5);
    CHECK(u.at("a") == doctest::Approx(0.5));
}

TEST_CASE("infer_goals threshold arithmetic") {
    CHECK(infer_goals({{"g1", 0.7}, {"g2", 0.3}}, 1e-9) == std::vector<std::string>{"g1"});
    CHECK(infer_goals({{"g1", 0.5}, {"g2", 0.5}}, 1e-9) ==
          std::vector<std::string>{"g1", "g2"});
    CHECK(infer_goals({{"g1", 0.4}, {"g2", 0.39}, {"g3", 0.21}}, 0.02) ==
          std::vector<std::string>{"g1", "g2"});
}

TEST_CASE("recognize_events: training trace of the true goal wins") {
    const auto m1 = build_model(make_log("T1", {{0, 1, 2}, {0, 2}}));
    const auto m2 = build_model(make_log("T2", {{3, 4}, {3, 3, 4}}));
    WeightParams params;
    const auto posterior = recognize_events({0, 1, 2}, {m1, m2}, params);
    CHECK(posterior.weights.at("T1") == params.phi);  // perfect fit -> omega = phi
    CHECK(posterior.probabilities.at("T1") > posterior.probabilities.at("T2"));
    REQUIRE(posterior.inferred.size() == 1);
    CHECK(posterior.inferred[0] == "T1");
    CHECK(posterior.alignments.at("T1").cost == 0.0);
}

TEST_CASE("single candidate goal gets probability one") {
    const auto model = build_model(make_log("only", {{0, 1}}));
    const auto posterior = recognize_events({5, 5, 5}, {model}, {});
    CHECK(posterior.probabilities.at("only") == doctest::Approx(1.0));
    CHECK(posterior.inferred == std::vector<std::string>{"only"});
}

TEST_CASE("running-example ordering: tau prefers the second goal model") {
    const auto m1 = build_model(make_log("T1", {{8, 8}}));
    const auto m2 = build_model(make_log("T2", {{8, 6, 1, 1, 9, 4, 3, 3}}));
    const auto posterior = recognize_events({8, 6, 2, 1, 1, 9}, {m1, m2}, {});
    CHECK(posterior.probabilities.at("T2") > posterior.probabilities.at("T1"));
    CHECK(posterior.inferred == std::vector<std::string>{"T2"});
}

TEST_CASE("recognize is worker-count independent") {
    const auto m1 = build_model(make_log("T1", {{0, 1, 2}}));
    const auto m2 = build_model(make_log("T2", {{3, 4}}));
    const auto m3 = build_model(make_log("T3", {{0, 4, 4}}));
    const std::vector<std::size_t> events = {0, 4, 1};
    const auto a = recognize_events(events, {m1, m2, m3}, {}, 1);
    const auto b = recognize_events(events, {m1, m2, m3}, {}, 4);
    CHECK(a.probabilities == b.probabilities);
    CHECK(a.inferred == b.inferred);
    CHECK(a.to_json() == b.to_json());
}

TEST_CASE("WeightParams validation and JSON round trip") {
    WeightParams bad;
    bad.lambda = 0.5;
    CHECK_THROWS_AS(bad.validate(), domain_error);
    bad = {};
    bad.beta = 0.0;
    CHECK_THROWS_AS(bad.validate(), domain_error);

    WeightParams params;
    params.phi = 2.5;
    params.delta = 0.75;
    const auto restored = WeightParams::from_json(params.to_json());
    CHECK(restored.phi == params.phi);
    CHECK(restored.delta == params.delta);
    CHECK(restored.lambda == params.lambda);
    CHECK(restored.beta == params.beta);
}
