#include "lassolab/opt_lasso.hpp"

#include <cmath>
#include <stdexcept>

namespace lassolab {

IndexSet threshold_support(const RealVector& beta, double lambda_opt) {
    if (lambda_opt < 0.0) throw std::invalid_argument("threshold_support: lambda_opt must be >= 0");
    IndexSet s;
    for (std::size_t j = 0; j < beta.size(); ++j)
        if (std::abs(beta[j]) > lambda_opt) s.push_back(j);
    return s;
}

namespace {

RealVector scatter(const IndexSet& sel, const RealVector& vals, std::size_t d) {
    RealVector out(d, 0.0);
    for (std::size_t i = 0; i < sel.size(); ++i) out[sel[i]] = vals[i];
    return out;
}

}  // namespace

OptLassoFit opt_lasso_fit(const DenseMatrix& x, const RealVector& y, const OptLassoConfig& cfg,
                          const LassoOptions& opts) {
    OptLassoFit fit;
    fit.config = cfg;
    fit.lasso_stage = lasso_fit({x, y, cfg.lambda, cfg.normalizer_n}, opts);
    fit.selected = threshold_support(fit.lasso_stage.coef, cfg.lambda_opt);
    if (fit.selected.empty()) {
        fit.coef.assign(x.cols, 0.0);
        return fit;
    }
    IndexSet all_rows(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) all_rows[i] = i;
    const DenseMatrix xs = submatrix(x, all_rows, fit.selected);
    fit.coef = scatter(fit.selected, least_squares_min_norm(xs, y), x.cols);
    return fit;
}

OptLassoFit opt_lasso_fit_gram(const GramData& g, const OptLassoConfig& cfg,
                               const LassoOptions& opts) {
    OptLassoFit fit;
    fit.config = cfg;
    fit.lasso_stage = lasso_fit_gram(g, cfg.normalizer_n, cfg.lambda, opts);
    fit.selected = threshold_support(fit.lasso_stage.coef, cfg.lambda_opt);
    if (fit.selected.empty()) {
        fit.coef.assign(g.d, 0.0);
        return fit;
    }
    const DenseMatrix kss = submatrix(g.K, fit.selected, fit.selected);
    RealVector cs(fit.selected.size());
    for (std::size_t i = 0; i < fit.selected.size(); ++i) cs[i] = g.c[fit.selected[i]];
    fit.coef = scatter(fit.selected, least_squares_from_gram(kss, cs), g.d);
    return fit;
}

BoundCheck deterministic_bound_check(const SparseParam& theta, const OptLassoFit& fit,
                                     const DenseMatrix& x, const RealVector& eps, double a,
                                     double b) {
    if (theta.dim != x.cols || fit.coef.size() != x.cols || eps.size() != x.rows)
        throw DimensionError("deterministic_bound_check: size mismatch");
    if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("deterministic_bound_check: need 0 < a <= b");

    BoundCheck out;
    const double n = static_cast<double>(fit.config.normalizer_n);
    const double lambda_opt = fit.config.lambda_opt;

    const RealVector theta_dense = theta.to_dense();
    double linf = 0.0;
    for (std::size_t j = 0; j < theta.dim; ++j)
        linf = std::max(linf, std::abs(fit.lasso_stage.coef[j] - theta_dense[j]));
    if (linf > lambda_opt) return out;  // l_inf hypothesis fails

    if (!theta.support.empty()) {
        IndexSet all_rows(x.rows);
        for (std::size_t i = 0; i < x.rows; ++i) all_rows[i] = i;
        DenseMatrix sigma_ss = gram(submatrix(x, all_rows, theta.support));
        for (double& v : sigma_ss.data) v /= n;
        const auto [lo, hi] = sym_eig_range(sigma_ss);
        if (lo < a || hi > b) return out;  // eigenvalue hypothesis fails
    }
    out.verifiable = true;

    double lhs = 0.0;
    for (std::size_t j = 0; j < theta.dim; ++j) {
        const double dj = fit.coef[j] - theta_dense[j];
        lhs += dj * dj;
    }

    double weak_mass = 0.0;
    for (double v : theta.values)
        if (std::abs(v) <= 2.0 * lambda_opt) weak_mass += v * v;

    double noise_term = 0.0;
    for (std::size_t j : theta.support) {
        const double* cj = x.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < x.rows; ++i) s += cj[i] * eps[i];
        s /= n;
        noise_term += s * s;
    }

    out.lhs = lhs;
    out.rhs = (2.0 * b / a + 1.0) * weak_mass + (2.0 / (a * a)) * noise_term;
    out.holds = lhs <= out.rhs + 1e-12;
    return out;
}

double seq_lambda_opt(const SeqLambdaSchedule& sched, double C0_hard, std::size_t t) {
    if (t < 1) throw std::invalid_argument("seq_lambda_opt: t must be >= 1");
    if (C0_hard < 0.0) throw std::invalid_argument("seq_lambda_opt: C0_hard must be >= 0");
    const double td = static_cast<double>(t);
    const double dd = static_cast<double>(sched.d);
    const double root = std::sqrt(std::log(dd * td) / td);
    switch (sched.variant) {
        case ScheduleVariant::theory_seq:
            return C0_hard * sched.C0 * sched.sigma * root;
        case ScheduleVariant::sim_seq:
            return C0_hard * sched.C0 * root;
    }
    return 0.0;
}

}  // namespace lassolab
