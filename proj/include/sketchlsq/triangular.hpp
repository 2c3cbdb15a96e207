#pragma once

#include <cmath>
#include <string>

#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/errors.hpp"

namespace sketchlsq {

/// Inverse of an upper-triangular matrix, formed explicitly by
/// back-substitution one column at a time. One O(n^3) cost so that every
/// later preconditioner apply is a plain O(n^2) matrix-vector product.
inline DenseMatrix tri_inverse(const DenseMatrix& R) {
    const index_t n = R.rows();
    if (R.cols() != n) throw DimensionMismatch("tri_inverse: matrix not square");
    for (index_t i = 0; i < n; ++i) {
        if (R(i, i) == 0.0) {
            throw SingularTriangular("tri_inverse: zero diagonal at " + std::to_string(i));
        }
    }
    DenseMatrix M(n, n);
    for (index_t j = 0; j < n; ++j) {
        double* mj = M.col(j);
        mj[j] = 1.0 / R(j, j);
        for (index_t i = j - 1; i >= 0; --i) {
            double s = 0.0;
            for (index_t k = i + 1; k <= j; ++k) s += R(i, k) * mj[k];
            mj[i] = -s / R(i, i);
        }
    }
    return M;
}

/// y = R x with R upper triangular (only the upper triangle is touched).
inline Vector tri_upper_matvec(const DenseMatrix& R, const Vector& x) {
    const index_t n = R.rows();
    if (static_cast<index_t>(x.size()) != n) throw DimensionMismatch("tri_upper_matvec");
    Vector y(static_cast<std::size_t>(n), 0.0);
    for (index_t j = 0; j < n; ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        if (xj == 0.0) continue;
        const double* rj = R.col(j);
        for (index_t i = 0; i <= j; ++i) y[static_cast<std::size_t>(i)] += rj[i] * xj;
    }
    return y;
}

/// y = R^T x with R upper triangular.
inline Vector tri_upper_rmatvec(const DenseMatrix& R, const Vector& x) {
    const index_t n = R.rows();
    if (static_cast<index_t>(x.size()) != n) throw DimensionMismatch("tri_upper_rmatvec");
    Vector y(static_cast<std::size_t>(n), 0.0);
    for (index_t j = 0; j < n; ++j) {
        const double* rj = R.col(j);
        double s = 0.0;
        for (index_t i = 0; i <= j; ++i) s += rj[i] * x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(j)] = s;
    }
    return y;
}

/// Solve R x = b by back-substitution, R upper triangular.
inline Vector tri_upper_solve(const DenseMatrix& R, const Vector& b) {
    const index_t n = R.rows();
    if (static_cast<index_t>(b.size()) != n) throw DimensionMismatch("tri_upper_solve");
    Vector x(b);
    for (index_t i = n - 1; i >= 0; --i) {
        if (R(i, i) == 0.0) throw SingularTriangular("tri_upper_solve: zero diagonal");
        double s = x[static_cast<std::size_t>(i)];
        for (index_t k = i + 1; k < n; ++k) s -= R(i, k) * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / R(i, i);
    }
    return x;
}

/// Solve R^T x = b by forward substitution, R upper triangular.
inline Vector tri_upper_solve_transposed(const DenseMatrix& R, const Vector& b) {
    const index_t n = R.rows();
    if (static_cast<index_t>(b.size()) != n) throw DimensionMismatch("tri_upper_solve_transposed");
    Vector x(b);
    for (index_t i = 0; i < n; ++i) {
        if (R(i, i) == 0.0) throw SingularTriangular("tri_upper_solve_transposed: zero diagonal");
        double s = x[static_cast<std::size_t>(i)];
        for (index_t k = 0; k < i; ++k) s -= R(k, i) * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / R(i, i);
    }
    return x;
}

}  // namespace sketchlsq
