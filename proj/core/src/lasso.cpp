#include "lassolab/lasso.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace lassolab {

double soft_threshold(double z, double tau) {
    if (z > tau) return z - tau;
    if (z < -tau) return z + tau;
    return 0.0;
}

namespace {

IndexSet nonzero_support(const RealVector& beta) {
    IndexSet s;
    for (std::size_t j = 0; j < beta.size(); ++j)
        if (beta[j] != 0.0) s.push_back(j);
    return s;
}

double kkt_from_gradient(const RealVector& g, const RealVector& beta, double lambda) {
    double worst = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        double v;
        if (beta[j] > 0.0)
            v = std::abs(g[j] + lambda);
        else if (beta[j] < 0.0)
            v = std::abs(g[j] - lambda);
        else
            v = std::max(std::abs(g[j]) - lambda, 0.0);
        worst = std::max(worst, v);
    }
    return worst;
}

void check_monotone(double before, double after) {
    if (after > before + 1e-12 * (1.0 + std::abs(before)))
        throw std::logic_error("coordinate descent sweep increased the objective");
}

// Shared sweep driver. UpdateOne(j) performs the coordinate update for j and
// returns |change|; Objective() is only evaluated when monotonicity checks
// are on; Kkt() certifies the candidate solution.
template <typename UpdateOne, typename Objective, typename Kkt>
LassoFit run_cd(std::size_t d, RealVector beta, const LassoOptions& opts, UpdateOne update_one,
                Objective objective, Kkt kkt) {
    LassoFit fit;
    fit.coef = std::move(beta);

    const auto sweep = [&](const IndexSet* active) {
        double maxchange = 0.0;
        double before = 0.0;
        if (opts.check_objective_monotone) before = objective(fit.coef);
        if (active) {
            for (std::size_t j : *active) maxchange = std::max(maxchange, update_one(j, fit.coef));
        } else {
            for (std::size_t j = 0; j < d; ++j) maxchange = std::max(maxchange, update_one(j, fit.coef));
        }
        if (opts.check_objective_monotone) check_monotone(before, objective(fit.coef));
        ++fit.iterations;
        return maxchange;
    };

    while (fit.iterations < opts.max_iters) {
        const double change = sweep(nullptr);
        const double thresh = opts.tol * (1.0 + linf_norm(fit.coef));
        if (change <= thresh) {
            fit.kkt_residual = kkt(fit.coef);
            if (fit.kkt_residual <= 10.0 * opts.tol) {
                fit.converged = true;
                break;
            }
            continue;  // sweep change small but stationarity not certified yet
        }
        // polish on the current active set before the next full sweep
        IndexSet active = nonzero_support(fit.coef);
        while (fit.iterations < opts.max_iters && !active.empty()) {
            const double ch = sweep(&active);
            if (ch <= opts.tol * (1.0 + linf_norm(fit.coef))) break;
        }
    }
    fit.kkt_residual = kkt(fit.coef);
    if (!fit.converged) fit.converged = fit.kkt_residual <= 10.0 * opts.tol;
    fit.support = nonzero_support(fit.coef);
    return fit;
}

}  // namespace

LassoFit lasso_fit(const LassoProblem& p, const LassoOptions& opts) {
    const std::size_t d = p.X.cols;
    const std::size_t rows = p.X.rows;
    if (p.y.size() != rows) throw DimensionError("lasso_fit: y size mismatch");
    if (p.normalizer_n < rows || p.normalizer_n == 0)
        throw DimensionError("lasso_fit: normalizer_n must be >= X.rows and positive");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("lasso_fit: tol must be positive");
    if (p.lambda < 0.0) throw std::invalid_argument("lasso_fit: lambda must be >= 0");

    RealVector colsq(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        const double* cj = p.X.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += cj[i] * cj[i];
        colsq[j] = s;
    }

    RealVector beta(d, 0.0);
    if (opts.warm_start) {
        if (opts.warm_start->size() != d) throw DimensionError("lasso_fit: warm start size mismatch");
        beta = *opts.warm_start;
    }
    for (std::size_t j = 0; j < d; ++j)
        if (colsq[j] == 0.0) beta[j] = 0.0;  // identically-zero columns stay out

    RealVector resid = p.y;
    for (std::size_t j = 0; j < d; ++j) {
        const double bj = beta[j];
        if (bj == 0.0) continue;
        const double* cj = p.X.col(j);
        for (std::size_t i = 0; i < rows; ++i) resid[i] -= cj[i] * bj;
    }

    const double n = static_cast<double>(p.normalizer_n);
    const double lambda = p.lambda;

    auto update_one = [&](std::size_t j, RealVector& b) -> double {
        if (colsq[j] == 0.0) return 0.0;
        const double* cj = p.X.col(j);
        double xr = 0.0;
        for (std::size_t i = 0; i < rows; ++i) xr += cj[i] * resid[i];
        const double cj_full = xr + colsq[j] * b[j];
        const double next = soft_threshold(cj_full / n, lambda) * n / colsq[j];
        const double delta = next - b[j];
        if (delta != 0.0) {
            for (std::size_t i = 0; i < rows; ++i) resid[i] -= cj[i] * delta;
            b[j] = next;
        }
        return std::abs(delta);
    };
    auto objective = [&](const RealVector& b) {
        double l1 = 0.0;
        for (double v : b) l1 += std::abs(v);
        return l2_norm_sq(resid) / (2.0 * n) + lambda * l1;
    };
    auto kkt = [&](const RealVector& b) {
        // refresh the residual from scratch so drift cannot fake optimality
        resid = p.y;
        for (std::size_t j = 0; j < d; ++j) {
            const double bj = b[j];
            if (bj == 0.0) continue;
            const double* cj = p.X.col(j);
            for (std::size_t i = 0; i < rows; ++i) resid[i] -= cj[i] * bj;
        }
        RealVector g(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            const double* cj = p.X.col(j);
            double s = 0.0;
            for (std::size_t i = 0; i < rows; ++i) s += cj[i] * resid[i];
            g[j] = -s / n;
        }
        return kkt_from_gradient(g, b, lambda);
    };

    return run_cd(d, std::move(beta), opts, update_one, objective, kkt);
}

double kkt_residual(const LassoProblem& p, const RealVector& beta) {
    if (beta.size() != p.X.cols) throw DimensionError("kkt_residual: beta size mismatch");
    RealVector fitted = matvec(p.X, beta);
    for (std::size_t i = 0; i < fitted.size(); ++i) fitted[i] -= p.y[i];
    RealVector g = matvec_transposed(p.X, fitted);
    const double n = static_cast<double>(p.normalizer_n);
    for (double& v : g) v /= n;
    return kkt_from_gradient(g, beta, p.lambda);
}

void GramData::add_row(const RealVector& x, double y_value) {
    if (x.size() != d) throw DimensionError("GramData::add_row: row size mismatch");
    for (std::size_t j = 0; j < d; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        double* col = K.col(j);
        const double* xi = x.data();
        for (std::size_t i = 0; i < d; ++i) col[i] += xi[i] * xj;
    }
    for (std::size_t j = 0; j < d; ++j) c[j] += x[j] * y_value;
    yy += y_value * y_value;
    ++n_rows;
}

LassoFit lasso_fit_gram(const GramData& g, std::size_t normalizer_n, double lambda,
                        const LassoOptions& opts) {
    const std::size_t d = g.d;
    if (normalizer_n < g.n_rows || normalizer_n == 0)
        throw DimensionError("lasso_fit_gram: normalizer_n must be >= row count and positive");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("lasso_fit_gram: tol must be positive");
    if (lambda < 0.0) throw std::invalid_argument("lasso_fit_gram: lambda must be >= 0");

    RealVector beta(d, 0.0);
    if (opts.warm_start) {
        if (opts.warm_start->size() != d)
            throw DimensionError("lasso_fit_gram: warm start size mismatch");
        beta = *opts.warm_start;
    }
    for (std::size_t j = 0; j < d; ++j)
        if (g.K(j, j) == 0.0) beta[j] = 0.0;

    // q = K beta, maintained across coordinate updates
    RealVector q(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
        const double bj = beta[j];
        if (bj == 0.0) continue;
        const double* col = g.K.col(j);
        for (std::size_t i = 0; i < d; ++i) q[i] += col[i] * bj;
    }

    const double n = static_cast<double>(normalizer_n);

    auto refresh_q = [&](const RealVector& b) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            const double bj = b[j];
            if (bj == 0.0) continue;
            const double* col = g.K.col(j);
            for (std::size_t i = 0; i < d; ++i) q[i] += col[i] * bj;
        }
    };

    auto update_one = [&](std::size_t j, RealVector& b) -> double {
        const double kjj = g.K(j, j);
        if (kjj == 0.0) return 0.0;
        const double cj = g.c[j] - q[j] + kjj * b[j];
        const double next = soft_threshold(cj / n, lambda) * n / kjj;
        const double delta = next - b[j];
        if (delta != 0.0) {
            const double* col = g.K.col(j);
            for (std::size_t i = 0; i < d; ++i) q[i] += col[i] * delta;
            b[j] = next;
        }
        return std::abs(delta);
    };
    auto objective = [&](const RealVector& b) {
        double l1 = 0.0, bc = 0.0, bq = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            l1 += std::abs(b[j]);
            bc += b[j] * g.c[j];
            bq += b[j] * q[j];
        }
        return (g.yy - 2.0 * bc + bq) / (2.0 * n) + lambda * l1;
    };
    auto kkt = [&](const RealVector& b) {
        refresh_q(b);
        double worst = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double gj = (q[j] - g.c[j]) / n;
            double v;
            if (b[j] > 0.0)
                v = std::abs(gj + lambda);
            else if (b[j] < 0.0)
                v = std::abs(gj - lambda);
            else
                v = std::max(std::abs(gj) - lambda, 0.0);
            worst = std::max(worst, v);
        }
        return worst;
    };

    return run_cd(d, std::move(beta), opts, update_one, objective, kkt);
}

double kkt_residual_gram(const GramData& g, std::size_t normalizer_n, double lambda,
                         const RealVector& beta) {
    if (beta.size() != g.d) throw DimensionError("kkt_residual_gram: beta size mismatch");
    const double n = static_cast<double>(normalizer_n);
    RealVector q(g.d, 0.0);
    for (std::size_t j = 0; j < g.d; ++j) {
        const double bj = beta[j];
        if (bj == 0.0) continue;
        const double* col = g.K.col(j);
        for (std::size_t i = 0; i < g.d; ++i) q[i] += col[i] * bj;
    }
    RealVector grad(g.d);
    for (std::size_t j = 0; j < g.d; ++j) grad[j] = (q[j] - g.c[j]) / n;
    return kkt_from_gradient(grad, beta, lambda);
}

double lasso_objective_gram(const GramData& g, std::size_t normalizer_n, double lambda,
                            const RealVector& beta) {
    const double n = static_cast<double>(normalizer_n);
    double l1 = 0.0, bc = 0.0, quad = 0.0;
    for (std::size_t j = 0; j < g.d; ++j) {
        l1 += std::abs(beta[j]);
        bc += beta[j] * g.c[j];
    }
    for (std::size_t j = 0; j < g.d; ++j) {
        const double bj = beta[j];
        if (bj == 0.0) continue;
        const double* col = g.K.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < g.d; ++i) s += col[i] * beta[i];
        quad += bj * s;
    }
    return (g.yy - 2.0 * bc + quad) / (2.0 * n) + lambda * l1;
}

double seq_lambda(const SeqLambdaSchedule& sched, std::size_t t) {
    if (t < 1) throw std::invalid_argument("seq_lambda: t must be >= 1");
    if (!(sched.C0 > 0.0)) throw std::invalid_argument("seq_lambda: C0 must be > 0");
    const double td = static_cast<double>(t);
    const double dd = static_cast<double>(sched.d);
    switch (sched.variant) {
        case ScheduleVariant::theory_seq:
            return sched.C0 * sched.sigma * std::sqrt(std::log(dd * td) / td);
        case ScheduleVariant::sim_seq:
            return sched.C0 * std::sqrt(std::log(dd) / td);
    }
    return 0.0;
}

}  // namespace lassolab
