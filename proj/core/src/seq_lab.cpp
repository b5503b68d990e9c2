#include "lassolab/seq_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lassolab {

namespace {

// fixed channel ids shared by both labs; replications keep common random
// numbers across estimator/policy variants
constexpr std::uint32_t kThetaChannel = 1;
constexpr std::uint32_t kCovariateChannel = 2;
constexpr std::uint32_t kNoiseChannel = 3;

struct SupportCounts {
    int fp = 0;
    int fn = 0;
};

SupportCounts count_support_errors(const IndexSet& estimated, const IndexSet& truth) {
    SupportCounts c;
    std::size_t i = 0, j = 0;
    while (i < estimated.size() && j < truth.size()) {
        if (estimated[i] == truth[j]) {
            ++i;
            ++j;
        } else if (estimated[i] < truth[j]) {
            ++c.fp;
            ++i;
        } else {
            ++c.fn;
            ++j;
        }
    }
    c.fp += static_cast<int>(estimated.size() - i);
    c.fn += static_cast<int>(truth.size() - j);
    return c;
}

}  // namespace

void SequentialScenario::validate() const {
    if (s0 < 1 || s0 > d) throw std::invalid_argument("SequentialScenario: need 1 <= s0 <= d");
    if (T < 2) throw std::invalid_argument("SequentialScenario: need T >= 2");
    if (cov.d != d) throw std::invalid_argument("SequentialScenario: covariate model dimension != d");
    if (error_window.first < 1 || error_window.second > T ||
        error_window.first > error_window.second)
        throw std::invalid_argument("SequentialScenario: error window must lie within [1, T]");
    if (refit_every < 1) throw std::invalid_argument("SequentialScenario: refit_every must be >= 1");
    if (cap_xi && !(*cap_xi >= 0.0)) throw std::invalid_argument("SequentialScenario: cap must be >= 0");
    cov.validate();
}

SeqRunRecord run_sequential_replication(const SequentialScenario& sc, RngStream stream) {
    sc.validate();
    RngStream theta_stream = stream.channel(kThetaChannel);
    RngStream cov_stream = stream.channel(kCovariateChannel);
    RngStream noise_stream = stream.channel(kNoiseChannel);

    SeqRunRecord rec;
    rec.theta_true = sample_sparse_uniform_param(theta_stream, sc.d, sc.s0, 0.0, 1.0);
    const RealVector theta_dense = rec.theta_true.to_dense();
    const IndexSet& true_support = rec.theta_true.support;

    rec.squared_error.assign(sc.T, 0.0);
    rec.fp.assign(sc.T, 0);
    rec.fn.assign(sc.T, 0);
    rec.support_size.assign(sc.T, 0);
    rec.fit_converged.assign(sc.T, 1);

    const CovariateSampler sampler(sc.cov);
    const SeqLambdaSchedule sched{sc.schedule_variant, sc.C0, sc.sigma, sc.d};

    // the oracle only ever solves on the true support; keep its statistics
    // restricted so oracle replications stay O(s0^2) per round
    const bool oracle = sc.estimator == SeqEstimator::oracle_ls;
    GramData data(oracle ? sc.s0 : sc.d);
    RealVector x_restricted(oracle ? sc.s0 : 0);
    LassoOptions opts;
    opts.tol = sc.solver_tol;
    opts.max_iters = sc.solver_max_iters;

    RealVector warm(sc.d, 0.0);
    RealVector estimate(sc.d, 0.0);
    IndexSet est_support;
    bool last_converged = true;

    for (std::size_t t = 1; t <= sc.T; ++t) {
        RealVector x = sampler.sample(cov_stream);
        const double eps = sc.sigma * noise_stream.normal();
        double y = eps;
        for (std::size_t i = 0; i < true_support.size(); ++i)
            y += x[true_support[i]] * rec.theta_true.values[i];
        if (oracle) {
            for (std::size_t i = 0; i < true_support.size(); ++i)
                x_restricted[i] = x[true_support[i]];
            data.add_row(x_restricted, y);
        } else {
            data.add_row(x, y);
        }

        if (t % sc.refit_every == 0) {
            switch (sc.estimator) {
                case SeqEstimator::lasso: {
                    const double lam = seq_lambda(sched, t);
                    opts.warm_start = &warm;
                    LassoFit fit = lasso_fit_gram(data, t, lam, opts);
                    warm = fit.coef;
                    estimate = std::move(fit.coef);
                    est_support = std::move(fit.support);
                    last_converged = fit.converged;
                    break;
                }
                case SeqEstimator::opt_lasso: {
                    OptLassoConfig cfg;
                    cfg.lambda = seq_lambda(sched, t);
                    cfg.lambda_opt = seq_lambda_opt(sched, sc.C0_hard, t);
                    cfg.normalizer_n = t;
                    opts.warm_start = &warm;
                    OptLassoFit fit = opt_lasso_fit_gram(data, cfg, opts);
                    warm = fit.lasso_stage.coef;
                    estimate = std::move(fit.coef);
                    est_support = std::move(fit.selected);
                    last_converged = fit.lasso_stage.converged;
                    break;
                }
                case SeqEstimator::oracle_ls: {
                    // knows the true support; least squares restricted to it
                    const RealVector b = least_squares_from_gram(data.K, data.c);
                    std::fill(estimate.begin(), estimate.end(), 0.0);
                    for (std::size_t i = 0; i < true_support.size(); ++i)
                        estimate[true_support[i]] = b[i];
                    est_support = true_support;
                    last_converged = true;
                    break;
                }
            }
        }

        double err = 0.0;
        for (std::size_t j = 0; j < sc.d; ++j) {
            const double dj = estimate[j] - theta_dense[j];
            err += dj * dj;
        }
        rec.squared_error[t - 1] = err;
        if (sc.estimator == SeqEstimator::oracle_ls) {
            rec.fp[t - 1] = 0;
            rec.fn[t - 1] = 0;
        } else {
            const SupportCounts c = count_support_errors(est_support, true_support);
            rec.fp[t - 1] = c.fp;
            rec.fn[t - 1] = c.fn;
        }
        rec.support_size[t - 1] = static_cast<int>(est_support.size());
        rec.fit_converged[t - 1] = last_converged ? 1 : 0;
    }
    return rec;
}

double cumulative_error(const SeqRunRecord& rec, std::pair<std::size_t, std::size_t> window,
                        std::optional<double> cap) {
    if (window.first < 1 || window.second > rec.squared_error.size() ||
        window.first > window.second)
        throw std::invalid_argument("cumulative_error: invalid window");
    double sum = 0.0;
    for (std::size_t t = window.first; t <= window.second; ++t) {
        const double e = rec.squared_error[t - 1];
        sum += cap ? std::min(e, *cap) : e;
    }
    return sum;
}

std::vector<std::size_t> refit_cadence_plan(std::size_t T, std::size_t every) {
    if (every < 1) throw std::invalid_argument("refit_cadence_plan: every must be >= 1");
    std::vector<std::size_t> rounds;
    for (std::size_t t = every; t <= T; t += every) rounds.push_back(t);
    return rounds;
}

Aggregate aggregate_replications(const RealVector& values) {
    if (values.size() < 2)
        throw TooFewReplications("aggregate_replications: need at least 2 replications");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    return {mean, sd / std::sqrt(n), sd};
}

}  // namespace lassolab
