#include <benchmark/benchmark.h>

#include "minsurf/decoder.hpp"
#include "minsurf/field.hpp"
#include "minsurf/skeleton.hpp"

using namespace minsurf;

static Skeleton bench_skeleton() {
    RandomSkeletonConfig cfg;
    cfg.min_nodes = 6;
    cfg.max_nodes = 6;
    return random_skeleton(11, cfg);
}

static void BM_FieldEvaluate(benchmark::State& state) {
    const ScalarField field = assemble_field(bench_skeleton());
    const Vec3 center = 0.5 * (field.bounds.lo + field.bounds.hi);
    for (auto _ : state) benchmark::DoNotOptimize(field.evaluate(center));
}
BENCHMARK(BM_FieldEvaluate);

static void BM_ExtractSurface(benchmark::State& state) {
    const Skeleton skel = bench_skeleton();
    const ScalarField field = assemble_field(skel);
    DecodeParams params;
    params.grid_resolution = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(extract_surface(field, params));
}
BENCHMARK(BM_ExtractSurface)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_RelaxIteration(benchmark::State& state) {
    const Skeleton skel = bench_skeleton();
    DecodeParams extract;
    extract.grid_resolution = static_cast<int>(state.range(0));
    extract.relax_iters = 0;
    const TriMesh mesh = decode(skel, extract);
    DecodeParams one;
    one.relax_iters = 1;
    for (auto _ : state) benchmark::DoNotOptimize(relax_curvature(mesh, skel, one));
    state.SetItemsProcessed(state.iterations() * mesh.vertex_count());
}
BENCHMARK(BM_RelaxIteration)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_DecodeFull(benchmark::State& state) {
    const Skeleton skel = bench_skeleton();
    DecodeParams params;
    params.grid_resolution = 48;
    params.relax_iters = 50;
    for (auto _ : state) benchmark::DoNotOptimize(decode(skel, params));
}
BENCHMARK(BM_DecodeFull)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
