// Serial reference against the OpenMP path for the per-point kernels and harnesses.
// On a single core the two should be close; the comparison matters on wider machines.

#include <benchmark/benchmark.h>

#include "subgeom/catalog.hpp"
#include "subgeom/pinch.hpp"
#include "subgeom/sampling.hpp"

namespace {

using namespace subgeom;

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::Parallel : Exec::Serial; }

const std::vector<Vec>& cp2_points() {
    static const Chart chart = catalog::build_model({"cp2_veronese", catalog::json::object()});
    static const std::vector<Vec> pts = sample_points(chart.domain(), {8, 100, 1});
    return pts;
}

void BM_evaluate_sff(benchmark::State& state) {
    const Chart chart = catalog::build_model({"cp2_veronese", catalog::json::object()});
    const std::vector<Vec>& pts = cp2_points();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_sff(chart, pts, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(pts.size()));
}

void BM_evaluate_pinch(benchmark::State& state) {
    const Chart chart = catalog::build_model({"cp2_veronese", catalog::json::object()});
    const std::vector<SFF> sffs = evaluate_sff(chart, cp2_points(), Exec::Serial);
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_pinch(sffs, 2, 1e-8, mode(state)));
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(sffs.size()));
}

void BM_lemp_harness(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(pinching::lemp_harness(2000, 7, 1e-9, mode(state)));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_propu_harness(benchmark::State& state) {
    const pinching::LSOptions options;
    for (auto _ : state)
        benchmark::DoNotOptimize(pinching::propu_harness(100, 7, {0.0, 1.0}, 1.0, options, 1e-6, mode(state)));
    state.SetItemsProcessed(state.iterations() * 100);
}

}  // namespace

// Argument 0 is the serial reference, 1 the OpenMP path.
BENCHMARK(BM_evaluate_sff)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_evaluate_pinch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lemp_harness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_propu_harness)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
