#include <benchmark/benchmark.h>

#include "lassolab/bandit_lab.hpp"
#include "lassolab/seq_lab.hpp"

namespace {

using namespace lassolab;

BanditScenario small_bandit(std::size_t d, std::size_t K, std::size_t T) {
    BanditScenario sc;
    sc.K = K;
    sc.s0 = 5;
    sc.d = d;
    sc.T = T;
    sc.cov = CovariateModel::clipped(d, 1.0);
    sc.gamma1 = 10 * K;
    sc.gamma2 = 80 * K;
    sc.g1 = sc.g2 = 50;
    sc.C0 = 2.0;
    sc.C0_hard = 0.6;
    sc.base_seed = 11;
    return sc;
}

void BM_bandit_replication(benchmark::State& state) {
    const BanditScenario sc = small_bandit(100, 5, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        BanditRunRecord rec = run_bandit_replication(sc, PolicyKind::three_stage, make_stream(1, 0));
        benchmark::DoNotOptimize(rec.regret.data());
    }
}
BENCHMARK(BM_bandit_replication)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_sequential_replication(benchmark::State& state) {
    SequentialScenario sc;
    sc.s0 = 5;
    sc.d = 100;
    sc.T = static_cast<std::size_t>(state.range(0));
    sc.cov = CovariateModel::identity(100);
    sc.estimator = SeqEstimator::opt_lasso;
    sc.C0 = 0.8;
    sc.C0_hard = 0.6;
    sc.error_window = {sc.T / 10, sc.T};
    for (auto _ : state) {
        SeqRunRecord rec = run_sequential_replication(sc, make_stream(1, 0));
        benchmark::DoNotOptimize(rec.squared_error.data());
    }
}
BENCHMARK(BM_sequential_replication)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
