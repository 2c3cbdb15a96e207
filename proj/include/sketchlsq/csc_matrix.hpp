#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/errors.hpp"
#include "sketchlsq/vector_ops.hpp"

namespace sketchlsq {

/// Compressed-sparse-column matrix.
///
/// Row indices are kept strictly increasing within each column; for sketch
/// generation the duplicate-detection step of rejection sampling doubles as
/// this canonicalization.
struct CscMatrix {
    index_t rows = 0;
    index_t cols = 0;
    std::vector<double> values;
    std::vector<index_t> row_indices;
    std::vector<index_t> col_pointers;  // length cols + 1

    CscMatrix() : col_pointers{0} {}
    CscMatrix(index_t r, index_t c) : rows(r), cols(c), col_pointers(static_cast<std::size_t>(c) + 1, 0) {}

    index_t nnz() const { return static_cast<index_t>(values.size()); }

    static CscMatrix identity(index_t n) {
        CscMatrix I(n, n);
        I.values.assign(static_cast<std::size_t>(n), 1.0);
        I.row_indices.resize(static_cast<std::size_t>(n));
        for (index_t i = 0; i < n; ++i) {
            I.row_indices[static_cast<std::size_t>(i)] = i;
            I.col_pointers[static_cast<std::size_t>(i) + 1] = i + 1;
        }
        return I;
    }

    /// Checks the structural invariants; throws on violation.
    void validate() const {
        if (static_cast<index_t>(col_pointers.size()) != cols + 1 || col_pointers[0] != 0 ||
            col_pointers.back() != nnz()) {
            throw Error("CscMatrix: bad col_pointers");
        }
        for (index_t j = 0; j < cols; ++j) {
            if (col_pointers[j] > col_pointers[j + 1]) throw Error("CscMatrix: col_pointers decrease");
            for (index_t k = col_pointers[j]; k < col_pointers[j + 1]; ++k) {
                index_t r = row_indices[static_cast<std::size_t>(k)];
                if (r < 0 || r >= rows) throw Error("CscMatrix: row index out of range");
                if (k > col_pointers[j] && row_indices[static_cast<std::size_t>(k - 1)] >= r) {
                    throw Error("CscMatrix: row indices not strictly increasing in column " +
                                std::to_string(j));
                }
            }
        }
    }
};

inline DenseMatrix densify(const CscMatrix& S) {
    DenseMatrix A(S.rows, S.cols);
    for (index_t j = 0; j < S.cols; ++j)
        for (index_t k = S.col_pointers[j]; k < S.col_pointers[j + 1]; ++k)
            A(S.row_indices[static_cast<std::size_t>(k)], j) = S.values[static_cast<std::size_t>(k)];
    return A;
}

/// y = S x
inline Vector matvec(const CscMatrix& S, const Vector& x) {
    if (static_cast<index_t>(x.size()) != S.cols) throw DimensionMismatch("matvec(csc): length mismatch");
    Vector y(static_cast<std::size_t>(S.rows), 0.0);
    for (index_t j = 0; j < S.cols; ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        if (xj == 0.0) continue;
        for (index_t k = S.col_pointers[j]; k < S.col_pointers[j + 1]; ++k)
            y[static_cast<std::size_t>(S.row_indices[static_cast<std::size_t>(k)])] +=
                S.values[static_cast<std::size_t>(k)] * xj;
    }
    return y;
}

/// y = S^T x
inline Vector rmatvec(const CscMatrix& S, const Vector& x) {
    if (static_cast<index_t>(x.size()) != S.rows) throw DimensionMismatch("rmatvec(csc): length mismatch");
    Vector y(static_cast<std::size_t>(S.cols), 0.0);
    for (index_t j = 0; j < S.cols; ++j) {
        double s = 0.0;
        for (index_t k = S.col_pointers[j]; k < S.col_pointers[j + 1]; ++k)
            s += S.values[static_cast<std::size_t>(k)] *
                 x[static_cast<std::size_t>(S.row_indices[static_cast<std::size_t>(k)])];
        y[static_cast<std::size_t>(j)] = s;
    }
    return y;
}

/// Y = S A for dense A.
///
/// Accumulation order is fixed — columns of S in order, ascending row index
/// within each column — so results are bit-reproducible for a fixed seed in
/// serial mode and match a naive dense multiply entry-exactly.
inline DenseMatrix spmm(const CscMatrix& S, const DenseMatrix& A) {
    if (S.cols != A.rows()) {
        throw DimensionMismatch("spmm: S is " + std::to_string(S.rows) + "x" + std::to_string(S.cols) +
                                ", A is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()));
    }
    DenseMatrix Y(S.rows, A.cols());
    for (index_t j = 0; j < A.cols(); ++j) {
        const double* aj = A.col(j);
        double* yj = Y.col(j);
        for (index_t k = 0; k < S.cols; ++k) {
            const double akj = aj[k];
            if (akj == 0.0) continue;
            for (index_t p = S.col_pointers[k]; p < S.col_pointers[k + 1]; ++p)
                yj[S.row_indices[static_cast<std::size_t>(p)]] += S.values[static_cast<std::size_t>(p)] * akj;
        }
    }
    return Y;
}

/// Y = S A for sparse A, result dense.
inline DenseMatrix spmm(const CscMatrix& S, const CscMatrix& A) {
    if (S.cols != A.rows) throw DimensionMismatch("spmm(csc,csc): inner dimensions disagree");
    DenseMatrix Y(S.rows, A.cols);
    for (index_t j = 0; j < A.cols; ++j) {
        double* yj = Y.col(j);
        for (index_t q = A.col_pointers[j]; q < A.col_pointers[j + 1]; ++q) {
            const index_t k = A.row_indices[static_cast<std::size_t>(q)];
            const double akj = A.values[static_cast<std::size_t>(q)];
            for (index_t p = S.col_pointers[k]; p < S.col_pointers[k + 1]; ++p)
                yj[S.row_indices[static_cast<std::size_t>(p)]] += S.values[static_cast<std::size_t>(p)] * akj;
        }
    }
    return Y;
}

/// Rows [row_begin, row_end) of A as a standalone CSC block, indices rebased.
inline CscMatrix csc_row_block(const CscMatrix& A, index_t row_begin, index_t row_end) {
    CscMatrix B(row_end - row_begin, A.cols);
    for (index_t j = 0; j < A.cols; ++j) {
        for (index_t k = A.col_pointers[j]; k < A.col_pointers[j + 1]; ++k) {
            index_t r = A.row_indices[static_cast<std::size_t>(k)];
            if (r >= row_begin && r < row_end) {
                B.row_indices.push_back(r - row_begin);
                B.values.push_back(A.values[static_cast<std::size_t>(k)]);
            }
        }
        B.col_pointers[static_cast<std::size_t>(j) + 1] = static_cast<index_t>(B.values.size());
    }
    return B;
}

/// Columns [col_begin, col_end) of A as a standalone CSC block.
inline CscMatrix csc_col_block(const CscMatrix& A, index_t col_begin, index_t col_end) {
    CscMatrix B(A.rows, col_end - col_begin);
    const index_t base = A.col_pointers[col_begin];
    B.values.assign(A.values.begin() + base, A.values.begin() + A.col_pointers[col_end]);
    B.row_indices.assign(A.row_indices.begin() + base, A.row_indices.begin() + A.col_pointers[col_end]);
    for (index_t j = col_begin; j <= col_end; ++j)
        B.col_pointers[static_cast<std::size_t>(j - col_begin)] = A.col_pointers[j] - base;
    return B;
}

inline double max_abs(const CscMatrix& A) {
    double s = 0.0;
    for (double v : A.values) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace sketchlsq
