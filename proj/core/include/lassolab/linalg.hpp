#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lassolab/types.hpp"

namespace lassolab {

/// Column-major dense matrix. Kept deliberately small: the lab only needs
/// SPD solves, minimum-norm least squares and symmetric eigen ranges.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    RealVector data;  // rows * cols, column-major

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }

    double* col(std::size_t j) { return data.data() + j * rows; }
    const double* col(std::size_t j) const { return data.data() + j * rows; }

    static DenseMatrix identity(std::size_t n);
};

struct NotPositiveDefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionTooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RealVector matvec(const DenseMatrix& a, const RealVector& x);
RealVector matvec_transposed(const DenseMatrix& a, const RealVector& x);

double dot(const RealVector& a, const RealVector& b);
double l2_norm_sq(const RealVector& a);
double linf_norm(const RealVector& a);

/// X'X for a (rows x cols) design.
DenseMatrix gram(const DenseMatrix& x);

DenseMatrix submatrix(const DenseMatrix& a, const IndexSet& row_idx, const IndexSet& col_idx);

/// Solves A x = b for symmetric positive definite A by Cholesky.
/// Throws NotPositiveDefinite when a pivot falls at or below
/// 1e-12 * trace(A) / n.
RealVector solve_spd(const DenseMatrix& a, const RealVector& b);

/// Least squares min_beta ||y - X beta||_2; among minimizers returns the one
/// of minimum l2 norm (pseudo-inverse path, singular values below
/// 1e-10 * sigma_max dropped). cols == 0 yields an empty vector.
RealVector least_squares_min_norm(const DenseMatrix& x, const RealVector& y);

/// Same solution computed from the normal equations G beta = c with
/// G = X'X, c = X'y. Cholesky fast path, eigen fallback when singular.
RealVector least_squares_from_gram(const DenseMatrix& g, const RealVector& c);

/// Extreme eigenvalues of a symmetric matrix (cyclic Jacobi), side <= 200.
std::pair<double, double> sym_eig_range(const DenseMatrix& a);

/// All eigenvalues (ascending) of a symmetric matrix; eigenvectors in the
/// columns of `vectors` when non-null. Internal building block.
RealVector jacobi_eigenvalues(const DenseMatrix& a, DenseMatrix* vectors = nullptr);

}  // namespace lassolab
