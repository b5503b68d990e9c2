#include "lassolab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lassolab {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw DimensionError(msg);
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double v : a.data) m = std::max(m, std::abs(v));
    return m;
}

void require_symmetric(const DenseMatrix& a) {
    require(a.rows == a.cols, "matrix must be square");
    const double scale = max_abs(a);
    const double tol = 1e-12 * (scale > 0 ? scale : 1.0);
    for (std::size_t j = 0; j < a.cols; ++j)
        for (std::size_t i = j + 1; i < a.rows; ++i)
            if (std::abs(a(i, j) - a(j, i)) > tol)
                throw DimensionError("matrix is not symmetric");
}

// Lower Cholesky factor in place of a copy; throws on pivot breakdown.
DenseMatrix cholesky_lower(const DenseMatrix& a) {
    const std::size_t n = a.rows;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a(i, i);
    const double pivot_floor = 1e-12 * trace / static_cast<double>(n);

    DenseMatrix l(n, n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= pivot_floor)
            throw NotPositiveDefinite("Cholesky pivot " + std::to_string(d) +
                                      " at column " + std::to_string(j));
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }
    return l;
}

RealVector cholesky_solve(const DenseMatrix& l, const RealVector& b) {
    const std::size_t n = l.rows;
    RealVector x = b;
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x[k];
        x[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

// Minimum-norm solve of G beta = c for symmetric PSD G via eigen
// decomposition; singular values of the underlying design below
// 1e-10 * sigma_max are dropped (eigenvalues below the squared cutoff).
RealVector pinv_solve_sym(const DenseMatrix& g, const RealVector& c) {
    const std::size_t n = g.rows;
    DenseMatrix vecs;
    RealVector evals = jacobi_eigenvalues(g, &vecs);
    double emax = 0.0;
    for (double e : evals) emax = std::max(emax, e);
    if (emax <= 0.0) return RealVector(n, 0.0);
    const double cutoff = 1e-20 * emax;  // (1e-10 * sigma_max)^2 in Gram scale

    RealVector beta(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        if (evals[k] <= cutoff) continue;
        double proj = 0.0;
        for (std::size_t i = 0; i < n; ++i) proj += vecs(i, k) * c[i];
        proj /= evals[k];
        for (std::size_t i = 0; i < n; ++i) beta[i] += vecs(i, k) * proj;
    }
    return beta;
}

}  // namespace

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealVector matvec(const DenseMatrix& a, const RealVector& x) {
    require(x.size() == a.cols, "matvec: size mismatch");
    RealVector y(a.rows, 0.0);
    for (std::size_t j = 0; j < a.cols; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        const double* cj = a.col(j);
        for (std::size_t i = 0; i < a.rows; ++i) y[i] += cj[i] * xj;
    }
    return y;
}

RealVector matvec_transposed(const DenseMatrix& a, const RealVector& x) {
    require(x.size() == a.rows, "matvec_transposed: size mismatch");
    RealVector y(a.cols, 0.0);
    for (std::size_t j = 0; j < a.cols; ++j) {
        const double* cj = a.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < a.rows; ++i) s += cj[i] * x[i];
        y[j] = s;
    }
    return y;
}

double dot(const RealVector& a, const RealVector& b) {
    require(a.size() == b.size(), "dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2_norm_sq(const RealVector& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

double linf_norm(const RealVector& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

DenseMatrix gram(const DenseMatrix& x) {
    DenseMatrix g(x.cols, x.cols, 0.0);
    for (std::size_t j = 0; j < x.cols; ++j) {
        const double* cj = x.col(j);
        for (std::size_t k = j; k < x.cols; ++k) {
            const double* ck = x.col(k);
            double s = 0.0;
            for (std::size_t i = 0; i < x.rows; ++i) s += cj[i] * ck[i];
            g(j, k) = s;
            g(k, j) = s;
        }
    }
    return g;
}

DenseMatrix submatrix(const DenseMatrix& a, const IndexSet& row_idx, const IndexSet& col_idx) {
    DenseMatrix out(row_idx.size(), col_idx.size());
    for (std::size_t j = 0; j < col_idx.size(); ++j)
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            out(i, j) = a(row_idx[i], col_idx[j]);
    return out;
}

RealVector solve_spd(const DenseMatrix& a, const RealVector& b) {
    require_symmetric(a);
    require(b.size() == a.rows, "solve_spd: rhs size mismatch");
    return cholesky_solve(cholesky_lower(a), b);
}

RealVector least_squares_min_norm(const DenseMatrix& x, const RealVector& y) {
    require(x.rows >= 1, "least_squares_min_norm: empty design");
    require(y.size() == x.rows, "least_squares_min_norm: rhs size mismatch");
    if (x.cols == 0) return {};
    return least_squares_from_gram(gram(x), matvec_transposed(x, y));
}

RealVector least_squares_from_gram(const DenseMatrix& g, const RealVector& c) {
    require(g.rows == g.cols && c.size() == g.rows, "least_squares_from_gram: size mismatch");
    if (g.rows == 0) return {};
    try {
        return cholesky_solve(cholesky_lower(g), c);
    } catch (const NotPositiveDefinite&) {
        return pinv_solve_sym(g, c);
    }
}

RealVector jacobi_eigenvalues(const DenseMatrix& a_in, DenseMatrix* vectors) {
    require(a_in.rows == a_in.cols, "jacobi: matrix must be square");
    const std::size_t n = a_in.rows;
    DenseMatrix a = a_in;
    DenseMatrix v = DenseMatrix::identity(n);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = j + 1; i < n; ++i) off += a(i, j) * a(i, j);
        double diag_scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) diag_scale += a(i, i) * a(i, i);
        if (off <= 1e-30 * (diag_scale + 1e-300)) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double cth = 1.0 / std::sqrt(1.0 + t * t);
                const double sth = t * cth;

                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cth * akp - sth * akq;
                    a(k, q) = sth * akp + cth * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cth * apk - sth * aqk;
                    a(q, k) = sth * apk + cth * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cth * vkp - sth * vkq;
                    v(k, q) = sth * vkp + cth * vkq;
                }
            }
        }
    }

    RealVector evals(n);
    for (std::size_t i = 0; i < n; ++i) evals[i] = a(i, i);

    // sort ascending, permuting eigenvectors along
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return evals[i] < evals[j]; });
    RealVector sorted(n);
    DenseMatrix vs(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        sorted[k] = evals[order[k]];
        for (std::size_t i = 0; i < n; ++i) vs(i, k) = v(i, order[k]);
    }
    if (vectors) *vectors = std::move(vs);
    return sorted;
}

std::pair<double, double> sym_eig_range(const DenseMatrix& a) {
    if (a.rows > 200)
        throw DimensionTooLarge("sym_eig_range supports side <= 200, got " +
                                std::to_string(a.rows));
    require_symmetric(a);
    if (a.rows == 0) return {0.0, 0.0};
    RealVector evals = jacobi_eigenvalues(a);
    return {evals.front(), evals.back()};
}

}  // namespace lassolab
