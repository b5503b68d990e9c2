#pragma once

#include <cstddef>
#include <optional>

#include "lassolab/linalg.hpp"
#include "lassolab/types.hpp"

namespace lassolab {

/// sign(z) * max(|z| - tau, 0)
double soft_threshold(double z, double tau);

/// Objective: (1 / (2 * normalizer_n)) * ||y - X beta||_2^2 + lambda * ||beta||_1.
/// normalizer_n can exceed X.rows: the bandit case stores only the selected
/// rows but normalizes by the total round count.
struct LassoProblem {
    const DenseMatrix& X;
    const RealVector& y;
    double lambda = 0.0;
    std::size_t normalizer_n = 0;
};

struct LassoOptions {
    double tol = 1e-10;
    std::size_t max_iters = 10000;  // cyclic sweeps
    const RealVector* warm_start = nullptr;
    /// Asserts that each sweep does not increase the objective. Defaults to
    /// on in debug builds; can be forced at runtime.
#ifdef NDEBUG
    bool check_objective_monotone = false;
#else
    bool check_objective_monotone = true;
#endif
};

struct LassoFit {
    RealVector coef;
    IndexSet support;       // {j : coef[j] != 0}, ascending
    double kkt_residual = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Cyclic coordinate descent (order 0..d-1, no randomization), incremental
/// residual updates. converged requires both the per-sweep coordinate change
/// to fall below tol * (1 + ||beta||_inf) and kkt <= 10 * tol; at the default
/// tol the certified KKT residual is <= 1e-8. On sweep exhaustion the best
/// iterate is returned with converged = false.
LassoFit lasso_fit(const LassoProblem& p, const LassoOptions& opts = {});

/// Max over j of |g_j + lambda*sign(beta_j)| (active) or max(|g_j|-lambda, 0)
/// (inactive), with g = X'(X beta - y) / normalizer_n. Zero iff beta optimal.
double kkt_residual(const LassoProblem& p, const RealVector& beta);

/// Sufficient statistics of a design accumulated row by row: K = X'X,
/// c = X'y, yy = y'y. One rank-one update per observed row; this is what the
/// sequential and bandit labs refit from (identical solutions to the
/// design-matrix route, pinned against it in tests).
struct GramData {
    explicit GramData(std::size_t dim) : d(dim), K(dim, dim, 0.0), c(dim, 0.0) {}

    std::size_t d;
    DenseMatrix K;
    RealVector c;
    double yy = 0.0;
    std::size_t n_rows = 0;

    void add_row(const RealVector& x, double y_value);
};

LassoFit lasso_fit_gram(const GramData& g, std::size_t normalizer_n, double lambda,
                        const LassoOptions& opts = {});

double kkt_residual_gram(const GramData& g, std::size_t normalizer_n, double lambda,
                         const RealVector& beta);

double lasso_objective_gram(const GramData& g, std::size_t normalizer_n, double lambda,
                            const RealVector& beta);

enum class ScheduleVariant { theory_seq, sim_seq };

/// theory_seq: lambda_t = C0 * sigma * sqrt(log(d t) / t)
/// sim_seq:    lambda_t = C0 * sqrt(log(d) / t)
struct SeqLambdaSchedule {
    ScheduleVariant variant = ScheduleVariant::sim_seq;
    double C0 = 1.0;
    double sigma = 1.0;
    std::size_t d = 2;
};

double seq_lambda(const SeqLambdaSchedule& sched, std::size_t t);

}  // namespace lassolab
