#include <benchmark/benchmark.h>

#include "minsurf/codec.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/skeleton.hpp"

using namespace minsurf;

static Skeleton sized_skeleton(uint64_t seed, int nodes) {
    RandomSkeletonConfig cfg;
    cfg.min_nodes = nodes;
    cfg.max_nodes = nodes;
    return random_skeleton(seed, cfg);
}

static void BM_MatchNodes(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Skeleton pred = sized_skeleton(1, n);
    const Skeleton gt = sized_skeleton(2, n);
    for (auto _ : state) benchmark::DoNotOptimize(match_nodes(pred, gt));
    state.SetComplexityN(n);
}
BENCHMARK(BM_MatchNodes)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_TopologySimilarity(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Skeleton pred = sized_skeleton(3, n);
    const Skeleton gt = sized_skeleton(4, n);
    for (auto _ : state) benchmark::DoNotOptimize(topology_similarity(pred, gt));
    state.SetComplexityN(n);
}
BENCHMARK(BM_TopologySimilarity)->RangeMultiplier(2)->Range(4, 64)->Complexity();

static void BM_EvaluatePair(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const std::string pred = serialize_text(sized_skeleton(5, n));
    const std::string gt = serialize_text(sized_skeleton(6, n));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_pair(pred, gt));
}
BENCHMARK(BM_EvaluatePair)->Arg(4)->Arg(8)->Arg(16);

static void BM_ParseText(benchmark::State& state) {
    const std::string text = serialize_text(sized_skeleton(7, static_cast<int>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(parse_text(text));
    state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseText)->Arg(8)->Arg(32);

static void BM_EvaluateBatch(benchmark::State& state) {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (int i = 0; i < 100; ++i) {
        pairs.emplace_back(serialize_text(sized_skeleton(i, 8)),
                           serialize_text(sized_skeleton(i + 500, 8)));
    }
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_batch(pairs, {}, threads));
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_EvaluateBatch)->Arg(1)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
