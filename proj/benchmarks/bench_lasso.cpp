#include <benchmark/benchmark.h>

#include "lassolab/lasso.hpp"
#include "lassolab/opt_lasso.hpp"
#include "lassolab/rng.hpp"

namespace {

using namespace lassolab;

GramData make_gram(std::size_t n, std::size_t d, std::size_t s0, std::uint64_t seed) {
    RngStream stream = make_stream(seed, 0);
    SparseParam theta = sample_sparse_uniform_param(stream, d, s0, 0.0, 1.0);
    GramData g(d);
    for (std::size_t i = 0; i < n; ++i) {
        RealVector x = sample_standard_normal(stream, d);
        double y = stream.normal();
        for (std::size_t k = 0; k < theta.support.size(); ++k)
            y += x[theta.support[k]] * theta.values[k];
        g.add_row(x, y);
    }
    return g;
}

void BM_lasso_fit_gram(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const std::size_t n = 4 * d;
    const GramData g = make_gram(n, d, 5, 7);
    const double lambda = seq_lambda({ScheduleVariant::sim_seq, 0.8, 1.0, d}, n);
    for (auto _ : state) {
        LassoFit fit = lasso_fit_gram(g, n, lambda);
        benchmark::DoNotOptimize(fit.kkt_residual);
    }
}
BENCHMARK(BM_lasso_fit_gram)->Arg(100)->Arg(500)->Arg(1000);

void BM_lasso_fit_gram_warm(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const std::size_t n = 4 * d;
    const GramData g = make_gram(n, d, 5, 7);
    const double lambda = seq_lambda({ScheduleVariant::sim_seq, 0.8, 1.0, d}, n);
    const LassoFit cold = lasso_fit_gram(g, n, lambda);
    LassoOptions opts;
    opts.warm_start = &cold.coef;
    for (auto _ : state) {
        LassoFit fit = lasso_fit_gram(g, n, lambda, opts);
        benchmark::DoNotOptimize(fit.kkt_residual);
    }
}
BENCHMARK(BM_lasso_fit_gram_warm)->Arg(100)->Arg(1000);

void BM_opt_lasso_fit_gram(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const std::size_t n = 4 * d;
    const GramData g = make_gram(n, d, 5, 7);
    OptLassoConfig cfg;
    cfg.lambda = seq_lambda({ScheduleVariant::sim_seq, 0.8, 1.0, d}, n);
    cfg.lambda_opt = seq_lambda_opt({ScheduleVariant::sim_seq, 0.8, 1.0, d}, 0.6, n);
    cfg.normalizer_n = n;
    for (auto _ : state) {
        OptLassoFit fit = opt_lasso_fit_gram(g, cfg);
        benchmark::DoNotOptimize(fit.coef.data());
    }
}
BENCHMARK(BM_opt_lasso_fit_gram)->Arg(100)->Arg(1000);

void BM_gram_add_row(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    RngStream stream = make_stream(3, 0);
    GramData g(d);
    RealVector x = sample_standard_normal(stream, d);
    for (auto _ : state) {
        g.add_row(x, 1.0);
        benchmark::DoNotOptimize(g.yy);
    }
}
BENCHMARK(BM_gram_add_row)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
