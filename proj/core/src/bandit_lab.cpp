#include "lassolab/bandit_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lassolab {

namespace {

constexpr std::uint32_t kThetaChannel = 1;
constexpr std::uint32_t kCovariateChannel = 2;
constexpr std::uint32_t kNoiseChannel = 3;
constexpr std::uint32_t kPolicyChannel = 4;

int support_fp(const IndexSet& estimated, const IndexSet& truth) {
    int fp = 0;
    std::size_t j = 0;
    for (std::size_t e : estimated) {
        while (j < truth.size() && truth[j] < e) ++j;
        if (j >= truth.size() || truth[j] != e) ++fp;
    }
    return fp;
}

int support_fn(const IndexSet& estimated, const IndexSet& truth) {
    return support_fp(truth, estimated);
}

}  // namespace

void BanditScenario::validate() const {
    if (K < 1) throw std::invalid_argument("BanditScenario: K must be >= 1");
    if (s0 < 1 || s0 > d) throw std::invalid_argument("BanditScenario: need 1 <= s0 <= d");
    if (T < 2) throw std::invalid_argument("BanditScenario: need T >= 2");
    if (!(gamma1 >= 1 && gamma1 <= gamma2 && gamma2 <= T))
        throw std::invalid_argument("BanditScenario: need 1 <= gamma1 <= gamma2 <= T");
    if (g1 < 1 || g2 < 1) throw std::invalid_argument("BanditScenario: cadences must be >= 1");
    if (cov.d != d) throw std::invalid_argument("BanditScenario: covariate model dimension != d");
    cov.validate();
}

double instantaneous_regret(const RealVector& x, const std::vector<SparseParam>& thetas,
                            std::size_t a) {
    if (a < 1 || a > thetas.size()) throw std::invalid_argument("instantaneous_regret: bad arm");
    double best = -std::numeric_limits<double>::infinity();
    double chosen = 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const SparseParam& th = thetas[k];
        double v = 0.0;
        for (std::size_t i = 0; i < th.support.size(); ++i) v += x[th.support[i]] * th.values[i];
        if (v > best) best = v;
        if (k + 1 == a) chosen = v;
    }
    return best - chosen;
}

std::size_t select_arm_greedy(const std::vector<RealVector>& estimates, const RealVector& x,
                              TieRule tie_rule, RngStream* tie_stream) {
    if (estimates.empty()) throw std::invalid_argument("select_arm_greedy: no estimates");
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> argmaxes;
    for (std::size_t k = 0; k < estimates.size(); ++k) {
        double v = 0.0;
        const RealVector& e = estimates[k];
        for (std::size_t j = 0; j < e.size(); ++j) v += e[j] * x[j];
        if (v > best) {
            best = v;
            argmaxes.assign(1, k + 1);
        } else if (v == best) {
            argmaxes.push_back(k + 1);
        }
    }
    if (argmaxes.size() == 1 || tie_rule == TieRule::lowest_index) return argmaxes.front();
    if (!tie_stream) throw std::invalid_argument("select_arm_greedy: random tie rule needs a stream");
    return argmaxes[tie_stream->uniform_int(argmaxes.size())];
}

std::pair<double, double> bandit_lambda(const BanditScenario& sc, std::size_t t, std::size_t k,
                                        double pull_fraction) {
    if (t < 1) throw std::invalid_argument("bandit_lambda: t must be >= 1");
    if (k < 1 || k > sc.K) throw std::invalid_argument("bandit_lambda: bad arm");
    const double td = static_cast<double>(t);
    const double dd = static_cast<double>(sc.d);
    switch (sc.lambda_variant) {
        case BanditLambdaVariant::theory_bandit: {
            const double lam =
                6.0 * sc.m_X * sc.sigma * std::sqrt(std::log(dd * static_cast<double>(sc.T)) / td);
            return {lam, 28.0 * sc.L3 * lam};
        }
        case BanditLambdaVariant::sim_bandit: {
            if (pull_fraction < 0.0 || pull_fraction > 1.0)
                throw std::invalid_argument("bandit_lambda: pull_fraction must be in [0,1]");
            const double lam = sc.C0 * pull_fraction * std::sqrt(std::log(dd) / td);
            const double lam_opt = sc.C0_hard * sc.C0 * std::sqrt(std::log(dd * td) / td);
            return {lam, lam_opt};
        }
    }
    return {0.0, 0.0};
}

BanditRunRecord run_bandit_replication(const BanditScenario& sc, PolicyKind policy,
                                       RngStream stream,
                                       const std::vector<SparseParam>* theta_override) {
    sc.validate();
    RngStream theta_stream = stream.channel(kThetaChannel);
    RngStream cov_stream = stream.channel(kCovariateChannel);
    RngStream noise_stream = stream.channel(kNoiseChannel);
    RngStream policy_stream = stream.channel(kPolicyChannel);

    // effective stage ends per policy
    std::size_t eff_gamma1 = sc.gamma1;
    std::size_t eff_gamma2 = sc.gamma2;
    switch (policy) {
        case PolicyKind::two_stage_opt: eff_gamma2 = sc.gamma1; break;
        case PolicyKind::two_stage_lasso: eff_gamma2 = sc.T; break;
        case PolicyKind::random_policy: eff_gamma1 = eff_gamma2 = sc.T; break;
        default: break;
    }

    std::vector<SparseParam> thetas;
    thetas.reserve(sc.K);
    for (std::size_t k = 0; k < sc.K; ++k)
        thetas.push_back(sample_sparse_uniform_param(theta_stream, sc.d, sc.s0, 0.0, 1.0));
    if (theta_override) {
        if (theta_override->size() != sc.K)
            throw std::invalid_argument("run_bandit_replication: theta_override must have K entries");
        thetas = *theta_override;
    }

    BanditRunRecord rec;
    rec.regret.assign(sc.T, 0.0);
    rec.arm.assign(sc.T, 0);
    rec.stage1_end = eff_gamma1;
    rec.stage2_end = eff_gamma2;

    const CovariateSampler sampler(sc.cov);

    std::vector<ArmDataset> arms;
    arms.reserve(sc.K);
    for (std::size_t k = 0; k < sc.K; ++k) arms.emplace_back(sc.d);

    std::vector<RealVector> estimates(sc.K, RealVector(sc.d, 0.0));
    std::vector<RealVector> warm(sc.K, RealVector(sc.d, 0.0));
    std::vector<RealVector> oracle_params;
    if (policy == PolicyKind::oracle) {
        oracle_params.reserve(sc.K);
        for (const SparseParam& th : thetas) oracle_params.push_back(th.to_dense());
    }

    LassoOptions opts;
    opts.tol = sc.solver_tol;
    opts.max_iters = sc.solver_max_iters;

    const bool wants_fits = policy != PolicyKind::random_policy && policy != PolicyKind::oracle;

    auto refit = [&](std::size_t t, bool use_opt) {
        RefitRecord rr;
        rr.round = t;
        rr.used_opt = use_opt;
        rr.fp.resize(sc.K);
        rr.fn.resize(sc.K);
        rr.fitted.resize(sc.K);
        std::size_t total_rows = 0;
        for (std::size_t k = 0; k < sc.K; ++k) {
            ArmDataset& arm = arms[k];
            total_rows += arm.pull_count();
            if (arm.pull_count() == 0) {
                // lambda would degenerate; keep the previous estimate
                rr.fitted[k] = 0;
                rr.fp[k] = support_fp(threshold_support(estimates[k], 0.0), thetas[k].support);
                rr.fn[k] = support_fn(threshold_support(estimates[k], 0.0), thetas[k].support);
                continue;
            }
            const double p_hat =
                static_cast<double>(arm.pull_count()) / static_cast<double>(t);
            const auto [lam, lam_opt] = bandit_lambda(sc, t, k + 1, p_hat);
            opts.warm_start = &warm[k];
            IndexSet est_support;
            if (use_opt) {
                OptLassoConfig cfg{lam, lam_opt, t};
                OptLassoFit fit = opt_lasso_fit_gram(arm.stats, cfg, opts);
                warm[k] = fit.lasso_stage.coef;
                if (fit.selected.empty()) {
                    // nothing survives the hard threshold (small-sample refits);
                    // the policy keeps the Lasso-stage estimate rather than an
                    // all-zero vector, which would degenerate arm selection to
                    // tie-breaking for the whole block
                    estimates[k] = fit.lasso_stage.coef;
                    est_support = fit.lasso_stage.support;
                } else {
                    estimates[k] = std::move(fit.coef);
                    est_support = std::move(fit.selected);
                }
            } else {
                LassoFit fit = lasso_fit_gram(arm.stats, t, lam, opts);
                warm[k] = fit.coef;
                estimates[k] = std::move(fit.coef);
                est_support = std::move(fit.support);
            }
            rr.fitted[k] = 1;
            rr.fp[k] = support_fp(est_support, thetas[k].support);
            rr.fn[k] = support_fn(est_support, thetas[k].support);
        }
        if (total_rows != t)
            throw std::logic_error("bandit round partition violated: arm datasets do not sum to t");
        rec.refits.push_back(std::move(rr));
    };

    for (std::size_t t = 1; t <= sc.T; ++t) {
        RealVector x = sampler.sample(cov_stream);

        std::size_t a;
        if (policy == PolicyKind::oracle) {
            a = select_arm_greedy(oracle_params, x, TieRule::lowest_index);
        } else if (t <= eff_gamma1) {
            a = 1 + static_cast<std::size_t>(policy_stream.uniform_int(sc.K));
        } else {
            a = select_arm_greedy(estimates, x, sc.tie_rule, &policy_stream);
        }

        const double eps = sc.sigma * noise_stream.normal();
        const SparseParam& th = thetas[a - 1];
        double y = eps;
        for (std::size_t i = 0; i < th.support.size(); ++i) y += x[th.support[i]] * th.values[i];

        rec.regret[t - 1] = instantaneous_regret(x, thetas, a);
        rec.arm[t - 1] = static_cast<int>(a);

        ArmDataset& pulled = arms[a - 1];
        pulled.rounds.push_back(t);
        pulled.rewards.push_back(y);
        pulled.stats.add_row(x, y);

        if (wants_fits) {
            // Lasso fits govern (gamma1 + m g1, gamma1 + (m+1) g1] within Stage 2,
            // OPT-Lasso fits govern the Stage 3 blocks; each fit uses data up to
            // and including its own round.
            if (t >= eff_gamma1 && t < eff_gamma2 && (t - eff_gamma1) % sc.g1 == 0)
                refit(t, /*use_opt=*/false);
            else if (t >= eff_gamma2 && t < sc.T && (t - eff_gamma2) % sc.g2 == 0)
                refit(t, /*use_opt=*/true);
        }
    }
    return rec;
}

double cumulative_regret(const BanditRunRecord& rec, std::pair<std::size_t, std::size_t> window) {
    if (window.first < 1 || window.second > rec.regret.size() || window.first > window.second)
        throw std::invalid_argument("cumulative_regret: invalid window");
    double sum = 0.0;
    for (std::size_t t = window.first; t <= window.second; ++t) sum += rec.regret[t - 1];
    return sum;
}

}  // namespace lassolab
