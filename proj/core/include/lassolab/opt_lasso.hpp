#pragma once

#include "lassolab/lasso.hpp"
#include "lassolab/types.hpp"

namespace lassolab {

/// (lambda, lambda_opt) pair for one fit; the Lasso stage and the OLS refit
/// share normalizer_n, including the bandit zero-padded case.
struct OptLassoConfig {
    double lambda = 0.0;
    double lambda_opt = 0.0;
    std::size_t normalizer_n = 0;
};

struct OptLassoFit {
    RealVector coef;
    IndexSet selected;      // {j : |lasso coef_j| > lambda_opt}, strict, ascending
    LassoFit lasso_stage;
    OptLassoConfig config;
};

/// {j : |beta_j| > lambda_opt}, strict inequality, ascending.
IndexSet threshold_support(const RealVector& beta, double lambda_opt);

/// Lasso with config.lambda, hard-threshold at config.lambda_opt, OLS refit
/// on the surviving columns (minimum-norm when the selected Gram is
/// singular). Empty selection gives the zero vector. A non-converged Lasso
/// stage is still refit and flagged through lasso_stage.converged.
OptLassoFit opt_lasso_fit(const DenseMatrix& x, const RealVector& y, const OptLassoConfig& cfg,
                          const LassoOptions& opts = {});

/// Same estimator from accumulated sufficient statistics.
OptLassoFit opt_lasso_fit_gram(const GramData& g, const OptLassoConfig& cfg,
                               const LassoOptions& opts = {});

/// Instance check of the deterministic OPT-Lasso error bound:
///   lhs = ||coef - theta||_2^2
///   rhs = (2b/a + 1) * sum_{j in S} theta_j^2 1{|theta_j| <= 2 lambda_opt}
///         + (2/a^2) * ||Z_S' eps / n||_2^2
/// Hypotheses verified before evaluation: ||lasso - theta||_inf <= lambda_opt
/// and a <= lambda_min(Sigma_hat_SS) <= lambda_max(Sigma_hat_SS) <= b (via
/// sym_eig_range). verifiable = false when they fail on the given instance.
struct BoundCheck {
    bool verifiable = false;
    bool holds = false;
    double lhs = 0.0;
    double rhs = 0.0;
};

BoundCheck deterministic_bound_check(const SparseParam& theta, const OptLassoFit& fit,
                                     const DenseMatrix& x, const RealVector& eps, double a,
                                     double b);

/// theory_seq: lambda_opt_t = C0_hard * C0 * sigma * sqrt(log(d t) / t)
/// sim_seq:    lambda_opt_t = C0_hard * C0 * sqrt(log(d t) / t)
/// (the simulation threshold uses log(d t) even though its lambda uses log d)
double seq_lambda_opt(const SeqLambdaSchedule& sched, double C0_hard, std::size_t t);

}  // namespace lassolab
