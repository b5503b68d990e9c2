#include <benchmark/benchmark.h>

#include "lassolab/fixtures.hpp"

namespace {

using namespace lassolab;

void BM_build_packing_set(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        RngStream stream = make_stream(5, 0);
        PackingSet set = build_packing_set(d, 5, 1.0, 0.1, stream);
        benchmark::DoNotOptimize(set.size());
    }
}
BENCHMARK(BM_build_packing_set)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_sample_omega1(benchmark::State& state) {
    RngStream stream = make_stream(5, 0);
    for (auto _ : state) {
        SparseParam theta = sample_omega1(50, 5, 1.0, stream);
        benchmark::DoNotOptimize(theta.values.data());
    }
}
BENCHMARK(BM_sample_omega1);

}  // namespace
