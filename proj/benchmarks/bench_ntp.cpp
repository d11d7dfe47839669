#include <benchmark/benchmark.h>

#include "cimgraph/cime.hpp"
#include "cimgraph/graph.hpp"
#include "cimgraph/model.hpp"
#include "cimgraph/ntp.hpp"
#include "cimgraph/synth.hpp"

namespace {

using namespace cimgraph;

GridModel scaled_model(std::size_t buses) {
    return synthesize_node_breaker(generate_case(buses, 42));
}

void bench_parse(benchmark::State& state) {
    auto text = serialize_cime(unbind_model(scaled_model(state.range(0))));
    for (auto _ : state) {
        auto result = parse_cime(text);
        benchmark::DoNotOptimize(result.doc.tables.size());
    }
}
BENCHMARK(bench_parse)->Arg(118)->Arg(500)->Unit(benchmark::kMillisecond);

void bench_build(benchmark::State& state) {
    auto model = scaled_model(state.range(0));
    Strategy strategy = state.range(1) ? Strategy::B : Strategy::A;
    for (auto _ : state) {
        auto g = build_graph(model, strategy);
        benchmark::DoNotOptimize(g.stats().vertex_count);
    }
}
BENCHMARK(bench_build)->Args({118, 0})->Args({118, 1})->Args({1500, 1})->Unit(benchmark::kMillisecond);

void bench_ntp(benchmark::State& state) {
    auto model = scaled_model(state.range(0));
    Strategy strategy = state.range(1) ? Strategy::B : Strategy::A;
    unsigned parallelism = static_cast<unsigned>(state.range(2));
    auto g = build_graph(model, strategy);
    for (auto _ : state) {
        auto result = run_ntp(g, parallelism);
        benchmark::DoNotOptimize(result.nodes.size());
    }
}
BENCHMARK(bench_ntp)
    ->Args({118, 0, 1})
    ->Args({118, 1, 1})
    ->Args({118, 1, 0})
    ->Args({1500, 0, 1})
    ->Args({1500, 1, 1})
    ->Args({1500, 1, 0})
    ->Unit(benchmark::kMillisecond);

void bench_oracle(benchmark::State& state) {
    auto model = scaled_model(state.range(0));
    for (auto _ : state) {
        auto partition = oracle_partition(model);
        benchmark::DoNotOptimize(partition.groups.size());
    }
}
BENCHMARK(bench_oracle)->Arg(118)->Arg(1500)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
