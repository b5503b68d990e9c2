#include <doctest.h>

#include <cmath>

#include "lassolab/opt_lasso.hpp"
#include "lassolab/rng.hpp"

using namespace lassolab;

namespace {

DenseMatrix random_design(std::size_t n, std::size_t d, RngStream& s) {
    DenseMatrix x(n, d);
    for (double& v : x.data) v = s.normal();
    return x;
}

}  // namespace

TEST_CASE("threshold_support is strict and ordered") {
    const RealVector beta = {0.1, -0.5, 0.3};
    CHECK(threshold_support(beta, 0.3) == IndexSet{1});  // 0.3 itself excluded
    CHECK(threshold_support(beta, 0.0) == IndexSet{0, 1, 2});
    CHECK(threshold_support(beta, 0.5).empty());
    CHECK(threshold_support(beta, 10.0).empty());
}

TEST_CASE("all coefficients at or below the threshold give the zero estimator") {
    RngStream s = make_stream(301, 0);
    const DenseMatrix x = random_design(15, 5, s);
    RealVector y(15);
    for (double& v : y) v = 0.01 * s.normal();

    OptLassoConfig cfg;
    cfg.lambda = 0.05;
    cfg.lambda_opt = 10.0;
    cfg.normalizer_n = 15;
    const OptLassoFit fit = opt_lasso_fit(x, y, cfg);
    CHECK(fit.selected.empty());
    for (double b : fit.coef) CHECK(b == 0.0);
}

TEST_CASE("noise-free strong single signal refits to the single-column normal equation") {
    RngStream s = make_stream(302, 0);
    const std::size_t n = 50, d = 6;
    const DenseMatrix x = random_design(n, d, s);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 3.0 * x(i, 1);

    OptLassoConfig cfg;
    cfg.lambda = 0.02;
    cfg.lambda_opt = 0.5;
    cfg.normalizer_n = n;
    const OptLassoFit fit = opt_lasso_fit(x, y, cfg);
    REQUIRE(fit.selected == IndexSet{1});

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += x(i, 1) * y[i];
        den += x(i, 1) * x(i, 1);
    }
    CHECK(std::abs(fit.coef[1] - num / den) <= 1e-9);
    for (std::size_t j = 0; j < d; ++j)
        if (j != 1) CHECK(fit.coef[j] == 0.0);
}

TEST_CASE("zero response is a fixed point") {
    RngStream s = make_stream(303, 0);
    const DenseMatrix x = random_design(12, 4, s);
    const RealVector y(12, 0.0);
    OptLassoConfig cfg;
    cfg.lambda = 0.3;
    cfg.lambda_opt = 0.1;
    cfg.normalizer_n = 12;
    const OptLassoFit fit = opt_lasso_fit(x, y, cfg);
    for (double b : fit.coef) CHECK(b == 0.0);
}

TEST_CASE("raising the threshold never adds selected indices") {
    RngStream s = make_stream(304, 0);
    const DenseMatrix x = random_design(40, 8, s);
    RealVector y(40);
    for (double& v : y) v = s.normal();

    IndexSet prev;
    bool first = true;
    for (double lam_opt : {0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0}) {
        OptLassoConfig cfg;
        cfg.lambda = 0.03;
        cfg.lambda_opt = lam_opt;
        cfg.normalizer_n = 40;
        const OptLassoFit fit = opt_lasso_fit(x, y, cfg);
        if (!first) {
            for (std::size_t j : fit.selected)
                CHECK(std::find(prev.begin(), prev.end(), j) != prev.end());
        }
        prev = fit.selected;
        first = false;
    }
}

TEST_CASE("instance-sum bound holds exactly") {
    RngStream s = make_stream(305, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const double a = (s.uniform01() < 0.5 ? -1.0 : 1.0) * (0.01 + 2.0 * s.uniform01());
        const double b = 0.01 + 10.0 * s.uniform01();
        const std::size_t T = 1 + static_cast<std::size_t>(s.uniform_int(10000));
        double sum = 0.0;
        for (std::size_t t = 1; t <= T; ++t)
            if (std::abs(a) <= std::sqrt(b / static_cast<double>(t))) sum += a * a;
        CHECK(sum <= b);
    }
}

TEST_CASE("deterministic bound check on an empty-support parameter") {
    RngStream s = make_stream(306, 0);
    const std::size_t n = 30, d = 5;
    const DenseMatrix x = random_design(n, d, s);
    RealVector eps(n);
    for (double& v : eps) v = 0.01 * s.normal();
    const RealVector y = eps;  // theta = 0

    OptLassoConfig cfg;
    cfg.lambda = 0.05;
    cfg.lambda_opt = 0.2;
    cfg.normalizer_n = n;
    const OptLassoFit fit = opt_lasso_fit(x, y, cfg);

    SparseParam theta;
    theta.dim = d;
    const BoundCheck check = deterministic_bound_check(theta, fit, x, eps, 0.5, 2.0);
    REQUIRE(check.verifiable);
    CHECK(check.lhs == 0.0);
    CHECK(check.holds);
}

TEST_CASE("bound check reports unverifiable hypotheses") {
    RngStream s = make_stream(307, 0);
    const std::size_t n = 30, d = 5;
    const DenseMatrix x = random_design(n, d, s);
    RealVector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 2.0 * x(i, 0) + 0.05 * s.normal();

    OptLassoConfig cfg;
    cfg.lambda = 0.05;
    cfg.lambda_opt = 1e-9;  // l_inf hypothesis cannot hold at this threshold
    cfg.normalizer_n = n;
    const OptLassoFit fit = opt_lasso_fit(x, y, cfg);

    SparseParam theta;
    theta.dim = d;
    theta.support = {0};
    theta.values = {2.0};
    const BoundCheck check = deterministic_bound_check(theta, fit, x, y, 0.5, 2.0);
    CHECK_FALSE(check.verifiable);
}

TEST_CASE("non-converged lasso stage is still refit and flagged") {
    RngStream s = make_stream(308, 0);
    const DenseMatrix x = random_design(30, 10, s);
    RealVector y(30);
    for (double& v : y) v = s.normal();

    OptLassoConfig cfg;
    cfg.lambda = 0.001;
    cfg.lambda_opt = 0.01;
    cfg.normalizer_n = 30;
    LassoOptions opts;
    opts.max_iters = 1;
    const OptLassoFit fit = opt_lasso_fit(x, y, cfg, opts);
    CHECK_FALSE(fit.lasso_stage.converged);
    CHECK(fit.coef.size() == 10);  // refit still happened on the returned iterate
}

TEST_CASE("seq_lambda_opt uses log(dt) in both variants") {
    const SeqLambdaSchedule sim{ScheduleVariant::sim_seq, 0.8, 1.0, 1000};
    CHECK(seq_lambda_opt(sim, 0.6, 1000) ==
          doctest::Approx(0.48 * std::sqrt(std::log(1e6) / 1000.0)).epsilon(1e-12));
    CHECK(seq_lambda_opt(sim, 0.6, 1000) == doctest::Approx(0.056418912).epsilon(1e-7));

    const SeqLambdaSchedule theory{ScheduleVariant::theory_seq, 1.0, 2.0, 100};
    CHECK(seq_lambda_opt(theory, 0.0, 17) == 0.0);
    // ratio lambda_opt / lambda constant in t for the theory variant
    for (std::size_t t : {1, 5, 50, 500}) {
        const double ratio = seq_lambda_opt(theory, 0.7, t) / seq_lambda(theory, t);
        CHECK(ratio == doctest::Approx(0.7).epsilon(1e-12));
    }
}

TEST_CASE("gram route of opt_lasso matches the design route") {
    RngStream s = make_stream(309, 0);
    const std::size_t n = 25, d = 7;
    const DenseMatrix x = random_design(n, d, s);
    RealVector y(n);
    for (double& v : y) v = s.normal();

    OptLassoConfig cfg;
    cfg.lambda = 0.04;
    cfg.lambda_opt = 0.05;
    cfg.normalizer_n = n;

    GramData g(d);
    RealVector row(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) row[j] = x(i, j);
        g.add_row(row, y[i]);
    }

    const OptLassoFit a = opt_lasso_fit(x, y, cfg);
    const OptLassoFit b = opt_lasso_fit_gram(g, cfg);
    REQUIRE(a.selected == b.selected);
    for (std::size_t j = 0; j < d; ++j) CHECK(std::abs(a.coef[j] - b.coef[j]) <= 1e-8);
}
