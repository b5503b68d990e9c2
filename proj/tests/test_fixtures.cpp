#include <doctest.h>

#include <cmath>

#include "lassolab/fixtures.hpp"

using namespace lassolab;

namespace {

double simpson(double (*f)(double), double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double radial_density(double tau) {  // r = 1
    if (tau < 0.5 || tau > 1.0) return 0.0;
    const double s = std::sin(2.0 * M_PI * tau);
    return 4.0 * s * s;
}

double radial_mean_integrand(double tau) { return tau * radial_density(tau); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("l_ds values and regime") {
    CHECK(l_ds(7, 3) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(l_ds(100, 5) == doctest::Approx(2.0 * std::log(47.5)).epsilon(1e-12));
    CHECK(l_ds(100, 5) == doctest::Approx(7.7214594221).epsilon(1e-9));

    // monotone increasing in d for fixed s
    double prev = l_ds(20, 5);
    for (std::size_t d = 21; d <= 60; ++d) {
        const double cur = l_ds(d, 5);
        CHECK(cur > prev);
        prev = cur;
    }

    CHECK_THROWS_AS(l_ds(7, 2), OutOfRegime);
    CHECK_THROWS_AS(l_ds(7, 4), OutOfRegime);   // 3s > d + 2
    CHECK_NOTHROW(l_ds(7, 3));
}

TEST_CASE("packing set construction verified by brute force") {
    RngStream s = make_stream(501, 0);
    const double r = 1.0, delta = 0.1;
    const PackingSet set = build_packing_set(7, 3, r, delta, s);
    REQUIRE(set.size() >= 4);  // ceil(exp(ln 4)) = 4
    CHECK(std::log(static_cast<double>(set.size())) >= l_ds(7, 3));

    std::vector<RealVector> dense;
    for (const SparseParam& v : set.vectors) {
        CHECK(v.support.size() == 3);
        CHECK(v.support.front() == 0);
        dense.push_back(v.to_dense());
        CHECK(dense.back()[0] == r);  // first coordinate is exactly r
        CHECK(std::abs(v.l2_norm_sq() - (r * r + 2.0 * delta * delta)) <= 1e-12);
    }
    for (std::size_t i = 0; i < dense.size(); ++i) {
        for (std::size_t j = i + 1; j < dense.size(); ++j) {
            double dist_sq = 0.0;
            for (std::size_t k = 0; k < 7; ++k)
                dist_sq += (dense[i][k] - dense[j][k]) * (dense[i][k] - dense[j][k]);
            CHECK(dist_sq >= delta * delta - 1e-12);
            CHECK(dist_sq <= 8.0 * delta * delta + 1e-12);
        }
    }
}

TEST_CASE("packing fails cleanly when attempts run out") {
    RngStream s = make_stream(502, 0);
    CHECK_THROWS_AS(build_packing_set(100, 5, 1.0, 0.1, s, 10), PackingFailed);
}

TEST_CASE("omega1 samples live on the first s coordinates with radius in [r/2, r]") {
    RngStream s = make_stream(503, 0);
    for (int rep = 0; rep < 200; ++rep) {
        const SparseParam theta = sample_omega1(20, 5, 2.0, s);
        CHECK(theta.dim == 20);
        REQUIRE(theta.support.size() == 5);
        for (std::size_t i = 0; i < 5; ++i) CHECK(theta.support[i] == i);
        const double radius = std::sqrt(theta.l2_norm_sq());
        CHECK(radius >= 1.0 - 1e-12);
        CHECK(radius <= 2.0 + 1e-12);
    }
}

TEST_CASE("omega1 radial mean matches the quadrature oracle") {
    const double oracle = simpson(radial_mean_integrand, 0.5, 1.0, 2000);
    CHECK(oracle == doctest::Approx(0.75).epsilon(1e-9));  // frozen: 3r/4 at r = 1

    RngStream s = make_stream(504, 0);
    const std::size_t n = 100'000;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += std::sqrt(sample_omega1(6, 3, 1.0, s).l2_norm_sq());
    mean /= n;
    CHECK(std::abs(mean - oracle) < 0.005);
}

TEST_CASE("omega1 radial histogram passes the chi-square check") {
    RngStream s = make_stream(505, 0);
    const std::size_t n = 100'000;
    const int bins = 20;
    std::vector<int> counts(bins, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = std::sqrt(sample_omega1(6, 3, 1.0, s).l2_norm_sq());
        int b = static_cast<int>((radius - 0.5) / 0.5 * bins);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    double stat = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double lo = 0.5 + 0.5 * b / bins, hi = 0.5 + 0.5 * (b + 1) / bins;
        const double p = simpson(radial_density, lo, hi, 200);
        const double expect = p * n;
        stat += (counts[b] - expect) * (counts[b] - expect) / expect;
    }
    CHECK(stat < 43.8202);  // chi-square 0.999 quantile, 19 dof
}

TEST_CASE("re_constant_sampled on orthonormal-scaled designs") {
    // X = sqrt(n) I has X'X / n = I: every cone ratio is exactly 1
    const std::size_t d = 6;
    DenseMatrix x(d, d, 0.0);
    for (std::size_t i = 0; i < d; ++i) x(i, i) = std::sqrt(static_cast<double>(d));
    RngStream s = make_stream(506, 0);
    const double re = re_constant_sampled(x, d, 2, 3.0, 100, s);
    CHECK(re == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("re_constant_sampled is exactly scale-equivariant for power-of-two scales") {
    RngStream s0 = make_stream(507, 0);
    DenseMatrix x(10, 6);
    for (double& v : x.data) v = s0.normal();

    RngStream s1 = make_stream(508, 0);
    RngStream s2 = make_stream(508, 0);
    const double base = re_constant_sampled(x, 10, 2, 3.0, 64, s1);
    DenseMatrix x2 = x;
    for (double& v : x2.data) v *= 2.0;
    const double scaled = re_constant_sampled(x2, 10, 2, 3.0, 64, s2);
    CHECK(scaled == 4.0 * base);  // exact in floating point
}

TEST_CASE("re_constant_sampled detects a planted null-space direction") {
    RngStream s = make_stream(509, 0);
    DenseMatrix x(12, 5);
    for (double& v : x.data) v = s.normal();
    for (std::size_t i = 0; i < 12; ++i) x(i, 3) = x(i, 1);  // duplicated column

    RealVector null_dir(5, 0.0);
    null_dir[1] = 1.0;
    null_dir[3] = -1.0;  // in the cone for s >= 2
    const std::vector<RealVector> extra = {null_dir};
    const double re = re_constant_sampled(x, 12, 2, 3.0, 16, s, extra);
    CHECK(re <= 1e-10);
}

TEST_CASE("margin_curve matches the Gaussian CDF oracle and scales correctly") {
    RngStream s = make_stream(510, 0);
    const CovariateModel model = CovariateModel::identity(4);
    RealVector u(4, 0.0);
    u[1] = 1.0;
    const RealVector taus = {0.05, 0.1, 0.2, 0.4, 0.8, 5.0};
    const MarginCurve curve = margin_curve(model, u, taus, 200'000, s);

    for (std::size_t k = 0; k < taus.size(); ++k) {
        const double oracle = 2.0 * std_normal_cdf(taus[k]) - 1.0;
        CHECK(std::abs(curve.empirical_probs[k] - oracle) < 0.01);
        if (k) CHECK(curve.empirical_probs[k] >= curve.empirical_probs[k - 1]);
    }
    CHECK(curve.empirical_probs.back() == doctest::Approx(1.0).epsilon(1e-3));

    // doubling u halves the curve at small tau: P(|2u'X| <= tau) = P(|u'X| <= tau/2)
    RngStream s2 = make_stream(511, 0);
    RealVector u2(4, 0.0);
    u2[1] = 2.0;
    const MarginCurve doubled = margin_curve(model, u2, taus, 200'000, s2);
    for (std::size_t k = 0; k < 3; ++k) {
        const double oracle_half = 2.0 * std_normal_cdf(taus[k] / 2.0) - 1.0;
        CHECK(std::abs(doubled.empirical_probs[k] - oracle_half) < 0.01);
    }
}

TEST_CASE("margin_curve respects the log-concave margin bound on small tau") {
    // P(|u'X| <= tau) <= C tau / ||u||_2; for standard normal the density bound
    // gives C = 2 phi(0) = 0.7979
    RngStream s = make_stream(512, 0);
    const CovariateModel model = CovariateModel::identity(3);
    RealVector u = {1.0, 2.0, -2.0};  // norm 3
    const RealVector taus = {0.1, 0.3, 0.6};
    const MarginCurve curve = margin_curve(model, u, taus, 100'000, s);
    for (std::size_t k = 0; k < taus.size(); ++k)
        CHECK(curve.empirical_probs[k] <= 0.7979 * taus[k] / 3.0 + 0.01);
}
