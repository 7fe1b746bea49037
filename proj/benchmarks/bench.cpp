#include <benchmark/benchmark.h>

#include <vector>

#include "gorec/align.hpp"
#include "gorec/dataset.hpp"
#include "gorec/discover.hpp"
#include "gorec/quantize.hpp"
#include "gorec/recognize.hpp"
#include "gorec/rng.hpp"

namespace {

gorec::GoalModel make_model(std::size_t symbols, std::size_t traces, std::size_t length) {
    gorec::Rng rng(404);
    std::vector<gorec::EventTrace> log(traces);
    for (std::size_t i = 0; i < traces; ++i) {
        log[i].trace_id = "t" + std::to_string(i + 1);
        log[i].goal = "g";
        log[i].events.resize(length);
        for (auto& e : log[i].events)
            e = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(symbols - 1)));
    }
    return gorec::build_model(log);
}

std::vector<std::size_t> make_trace(std::size_t symbols, std::size_t length) {
    gorec::Rng rng(505);
    std::vector<std::size_t> events(length);
    for (auto& e : events)
        e = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(symbols - 1)));
    return events;
}

void BM_OptimalAlignment(benchmark::State& state) {
    const auto symbols = static_cast<std::size_t>(state.range(0));
    const auto model = make_model(symbols, 40, 50);
    const auto events = make_trace(symbols, static_cast<std::size_t>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(gorec::optimal_alignment(events, model).total_cost);
    state.SetLabel(std::to_string(model.n_states) + " states");
}
BENCHMARK(BM_OptimalAlignment)->Args({20, 50})->Args({100, 100})->Args({196, 100});

void BM_Recognize(benchmark::State& state) {
    const auto model = make_model(100, 40, 50);
    std::vector<gorec::GoalModel> models(static_cast<std::size_t>(state.range(0)), model);
    for (std::size_t g = 0; g < models.size(); ++g) models[g].goal = "g" + std::to_string(g);
    const auto events = make_trace(100, 100);
    const int workers = static_cast<int>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(gorec::recognize_events(events, models, {}, workers));
}
BENCHMARK(BM_Recognize)->Args({6, 1})->Args({6, 3})->Args({24, 1})->Args({24, 3});

void BM_FitCodebook(benchmark::State& state) {
    gorec::SynthSpec spec;
    spec.seed = 31;
    const auto dataset = gorec::synth_dataset(spec);
    std::vector<std::size_t> all(dataset.traces.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto rows = gorec::pooled_rows(dataset, all);
    std::vector<std::size_t> selected;
    for (std::size_t f = 0; f < 8; ++f) selected.push_back(f);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            gorec::fit_codebook(rows, selected, static_cast<std::size_t>(state.range(0)), 31));
    state.SetLabel(std::to_string(rows.size()) + " rows");
}
BENCHMARK(BM_FitCodebook)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
