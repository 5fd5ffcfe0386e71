#include <benchmark/benchmark.h>

#include "otto/cumulants.hpp"
#include "otto/landauzener.hpp"

using namespace otto;

namespace {

CycleParams params() {
    CycleParams p;
    p.beta = 0.7;
    p.nu1 = 1.0;
    p.nu2 = 2.0;
    p.delta = 0.1;
    p.zeta = 0.25;
    return p;
}

void BM_EnumeratePaths(benchmark::State& s) {
    auto p = params();
    for (auto _ : s) benchmark::DoNotOptimize(enumerate_paths(p, 0.3));
}
BENCHMARK(BM_EnumeratePaths);

void BM_Cumulants(benchmark::State& s) {
    auto d = enumerate_paths(params(), 0.3);
    for (auto _ : s) benchmark::DoNotOptimize(cumulants_from_distribution(d));
}
BENCHMARK(BM_Cumulants);

void BM_CfUnital(benchmark::State& s) {
    auto p = params();
    double g = 0.1;
    for (auto _ : s) {
        benchmark::DoNotOptimize(cf_unital(p, 0.3, g, -g));
        g += 1e-9;
    }
}
BENCHMARK(BM_CfUnital);

void BM_CfDerivativeCheck(benchmark::State& s) {
    auto p = params();
    const int n = static_cast<int>(s.range(0));
    for (auto _ : s) benchmark::DoNotOptimize(cf_derivative_check(p, 0.3, n));
}
BENCHMARK(BM_CfDerivativeCheck)->DenseRange(1, 4);

void BM_Sample(benchmark::State& s) {
    auto d = enumerate_paths(params(), 0.3);
    for (auto _ : s) benchmark::DoNotOptimize(sample(d, static_cast<std::uint64_t>(s.range(0)), 7));
    s.SetItemsProcessed(s.iterations() * s.range(0));
}
BENCHMARK(BM_Sample)->Arg(1000)->Arg(1000000)->Unit(benchmark::kMillisecond);

void BM_UnmonitoredCycle(benchmark::State& s) {
    LZParams p;
    p.cycle = params();
    p.cycle.delta = 0.3;
    p.phi = 0.1;
    p.channel = MeasurementChannel(1.0, 0.1);
    for (auto _ : s) benchmark::DoNotOptimize(unmonitored_cycle(p));
}
BENCHMARK(BM_UnmonitoredCycle);

} // namespace

BENCHMARK_MAIN();
