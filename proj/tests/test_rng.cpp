#include <doctest.h>

#include <cmath>

#include "lassolab/rng.hpp"

using namespace lassolab;

namespace {

// Simpson's rule on [a, b]
double simpson(double (*f)(double), double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double clipped_sq_density(double z) {
    const double c = std::min(std::max(z, -1.0), 1.0);
    return c * c * std::exp(-z * z / 2.0) / std::sqrt(2.0 * M_PI);
}

}  // namespace

TEST_CASE("identical (seed, stream) replays bit-identically") {
    RngStream a = make_stream(42, 0);
    RngStream b = make_stream(42, 0);
    for (int i = 0; i < 1'000'000; ++i) REQUIRE(a.next_u32() == b.next_u32());
}

TEST_CASE("distinct streams are empirically uncorrelated") {
    RngStream a = make_stream(42, 0);
    RngStream b = make_stream(42, 1);
    const int n = 10'000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < n; ++i) {
        const double x = a.normal(), y = b.normal();
        sa += x;
        sb += y;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    const double cov = sab / n - (sa / n) * (sb / n);
    const double corr = cov / std::sqrt((saa / n - sa / n * sa / n) * (sbb / n - sb / n * sb / n));
    CHECK(std::abs(corr) < 0.05);
}

TEST_CASE("streams are counter-split: consuming one never perturbs another") {
    RngStream noise = make_stream(42, 3);
    for (int i = 0; i < 12345; ++i) noise.next_u32();

    RngStream fresh = make_stream(42, 7);
    RngStream again = make_stream(42, 7);
    for (int i = 0; i < 1000; ++i) CHECK(fresh.next_u64() == again.next_u64());
}

TEST_CASE("channels of one replication are distinct and reproducible") {
    RngStream base = make_stream(9, 5);
    RngStream c1 = base.channel(1);
    RngStream c2 = base.channel(2);
    CHECK(c1.next_u64() != c2.next_u64());
    RngStream c1b = make_stream(9, 5).channel(1);
    c1 = base.channel(1);
    for (int i = 0; i < 100; ++i) CHECK(c1.next_u64() == c1b.next_u64());
}

TEST_CASE("standard normal moments and central mass") {
    RngStream s = make_stream(7, 0);
    const std::size_t n = 100'000;
    const RealVector z = sample_standard_normal(s, n);
    double mean = 0, var = 0, central = 0;
    for (double v : z) mean += v;
    mean /= n;
    for (double v : z) {
        var += (v - mean) * (v - mean);
        if (v > -1.0 && v < 1.0) central += 1.0;
    }
    var /= (n - 1);
    central /= n;
    CHECK(mean > -0.013);
    CHECK(mean < 0.013);
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
    CHECK(central == doctest::Approx(0.6826894921).epsilon(0.01));
    CHECK(std::abs(central - 0.6826894921) < 0.006);
}

TEST_CASE("clipped covariates stay inside the box and match the quadrature variance") {
    RngStream s = make_stream(11, 0);
    const CovariateSampler sampler(CovariateModel::clipped(4, 1.0));
    const std::size_t n = 100'000;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const RealVector x = sampler.sample(s);
        for (double v : x) {
            REQUIRE(v >= -1.0);
            REQUIRE(v <= 1.0);
        }
        sum_sq += x[0] * x[0];
    }
    const double oracle = simpson(clipped_sq_density, -10.0, 10.0, 4000);
    CHECK(oracle == doctest::Approx(0.5160585510).epsilon(1e-6));  // frozen quadrature value
    CHECK(std::abs(sum_sq / n - oracle) < 0.01);
}

TEST_CASE("identity covariates have unit coordinate variance") {
    RngStream s = make_stream(12, 0);
    const CovariateSampler sampler(CovariateModel::identity(3));
    const std::size_t n = 100'000;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const RealVector x = sampler.sample(s);
        sum_sq += x[0] * x[0];
    }
    CHECK(std::abs(sum_sq / n - 1.0) < 0.02);
}

TEST_CASE("circulant covariates reproduce the r^|i-j| correlation") {
    RngStream s = make_stream(13, 0);
    const CovariateSampler sampler(CovariateModel::circulant(5, 0.7));
    const std::size_t n = 40'000;
    double c01 = 0, c02 = 0, v0 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const RealVector x = sampler.sample(s);
        c01 += x[0] * x[1];
        c02 += x[0] * x[2];
        v0 += x[0] * x[0];
    }
    CHECK(c01 / n == doctest::Approx(0.7).epsilon(0.05));
    CHECK(c02 / n == doctest::Approx(0.49).epsilon(0.08));
    CHECK(v0 / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("block covariates correlate only within a block") {
    RngStream s = make_stream(14, 0);
    const CovariateSampler sampler(CovariateModel::block(4, 2));
    const std::size_t n = 40'000;
    double within = 0, across = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const RealVector x = sampler.sample(s);
        within += x[0] * x[1];
        across += x[0] * x[2];
    }
    CHECK(within / n == doctest::Approx(0.5).epsilon(0.08));
    CHECK(std::abs(across / n) < 0.03);
}

TEST_CASE("sparse uniform parameters have exact support size and uniform values") {
    RngStream s = make_stream(15, 0);

    const SparseParam full = sample_sparse_uniform_param(s, 10, 10, 0.0, 1.0);
    CHECK(full.support.size() == 10);
    for (double v : full.values) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }

    const SparseParam p = sample_sparse_uniform_param(s, 100, 5, 0.0, 1.0);
    CHECK(p.support.size() == 5);
    for (std::size_t i = 1; i < p.support.size(); ++i) CHECK(p.support[i] > p.support[i - 1]);

    double mean = 0.0;
    const int reps = 2000;  // 2000 * 5 = 1e4 supported values
    for (int rep = 0; rep < reps; ++rep) {
        const SparseParam q = sample_sparse_uniform_param(s, 100, 5, 0.0, 1.0);
        REQUIRE(q.support.size() == 5);
        for (double v : q.values) mean += v;
    }
    mean /= reps * 5;
    CHECK(std::abs(mean - 0.5) < 0.012);
}

TEST_CASE("support is uniform over subsets (coordinate frequencies)") {
    RngStream s = make_stream(16, 0);
    const std::size_t d = 20, s0 = 4;
    std::vector<int> hits(d, 0);
    const int reps = 20'000;
    for (int rep = 0; rep < reps; ++rep) {
        const SparseParam p = sample_sparse_uniform_param(s, d, s0, -1.0, 1.0);
        for (std::size_t j : p.support) ++hits[j];
    }
    const double expect = static_cast<double>(reps) * s0 / d;  // 4000
    for (int h : hits) CHECK(std::abs(h - expect) < 5.0 * std::sqrt(expect));
}

TEST_CASE("model-level sample_covariate overload matches the sampler path") {
    const CovariateModel model = CovariateModel::clipped(5, 1.0);
    RngStream a = make_stream(33, 0);
    RngStream b = make_stream(33, 0);
    const RealVector via_model = sample_covariate(a, model);
    const RealVector via_sampler = sample_covariate(b, CovariateSampler(model));
    CHECK(via_model == via_sampler);
}

TEST_CASE("make_stream validates the replication index") {
    CHECK_THROWS(make_stream(1, 1ull << 32));
    CHECK_NOTHROW(make_stream(1, (1ull << 32) - 1));
}
