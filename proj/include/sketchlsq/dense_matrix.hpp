#pragma once

#include <cassert>
#include <cstdint>
#include <vector>

#include "sketchlsq/errors.hpp"
#include "sketchlsq/vector_ops.hpp"

namespace sketchlsq {

using index_t = std::int64_t;

/// Column-major dense matrix of doubles.
///
/// Column-major because everything downstream walks columns: sketches hit
/// tall matrices column-block-wise and the QR works on columns.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(index_t rows, index_t cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {}
    DenseMatrix(index_t rows, index_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        assert(static_cast<index_t>(data_.size()) == rows_ * cols_);
    }

    index_t rows() const { return rows_; }
    index_t cols() const { return cols_; }

    double& operator()(index_t i, index_t j) { return data_[static_cast<std::size_t>(j * rows_ + i)]; }
    double operator()(index_t i, index_t j) const { return data_[static_cast<std::size_t>(j * rows_ + i)]; }

    double* col(index_t j) { return data_.data() + j * rows_; }
    const double* col(index_t j) const { return data_.data() + j * rows_; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    static DenseMatrix identity(index_t n) {
        DenseMatrix I(n, n);
        for (index_t i = 0; i < n; ++i) I(i, i) = 1.0;
        return I;
    }

private:
    index_t rows_ = 0;
    index_t cols_ = 0;
    std::vector<double> data_;
};

/// y = A x
inline Vector matvec(const DenseMatrix& A, const Vector& x) {
    if (static_cast<index_t>(x.size()) != A.cols()) {
        throw DimensionMismatch("matvec: A is " + std::to_string(A.rows()) + "x" +
                                std::to_string(A.cols()) + ", x has length " +
                                std::to_string(x.size()));
    }
    Vector y(static_cast<std::size_t>(A.rows()), 0.0);
    for (index_t j = 0; j < A.cols(); ++j) {
        const double xj = x[static_cast<std::size_t>(j)];
        if (xj == 0.0) continue;
        const double* aj = A.col(j);
        for (index_t i = 0; i < A.rows(); ++i) y[static_cast<std::size_t>(i)] += aj[i] * xj;
    }
    return y;
}

/// y = A^T x
inline Vector rmatvec(const DenseMatrix& A, const Vector& x) {
    if (static_cast<index_t>(x.size()) != A.rows()) {
        throw DimensionMismatch("rmatvec: A is " + std::to_string(A.rows()) + "x" +
                                std::to_string(A.cols()) + ", x has length " +
                                std::to_string(x.size()));
    }
    Vector y(static_cast<std::size_t>(A.cols()), 0.0);
    for (index_t j = 0; j < A.cols(); ++j) {
        const double* aj = A.col(j);
        double s = 0.0;
        for (index_t i = 0; i < A.rows(); ++i) s += aj[i] * x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(j)] = s;
    }
    return y;
}

/// C = A B
inline DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.cols() != B.rows()) {
        throw DimensionMismatch("matmul: inner dimensions " + std::to_string(A.cols()) +
                                " vs " + std::to_string(B.rows()));
    }
    DenseMatrix C(A.rows(), B.cols());
    for (index_t j = 0; j < B.cols(); ++j) {
        double* cj = C.col(j);
        for (index_t k = 0; k < A.cols(); ++k) {
            const double bkj = B(k, j);
            if (bkj == 0.0) continue;
            const double* ak = A.col(k);
            for (index_t i = 0; i < A.rows(); ++i) cj[i] += ak[i] * bkj;
        }
    }
    return C;
}

/// C = A^T B
inline DenseMatrix matmul_at_b(const DenseMatrix& A, const DenseMatrix& B) {
    if (A.rows() != B.rows()) {
        throw DimensionMismatch("matmul_at_b: row counts differ");
    }
    DenseMatrix C(A.cols(), B.cols());
    for (index_t j = 0; j < B.cols(); ++j) {
        const double* bj = B.col(j);
        for (index_t i = 0; i < A.cols(); ++i) {
            const double* ai = A.col(i);
            double s = 0.0;
            for (index_t k = 0; k < A.rows(); ++k) s += ai[k] * bj[k];
            C(i, j) = s;
        }
    }
    return C;
}

inline DenseMatrix transpose(const DenseMatrix& A) {
    DenseMatrix T(A.cols(), A.rows());
    for (index_t j = 0; j < A.cols(); ++j)
        for (index_t i = 0; i < A.rows(); ++i) T(j, i) = A(i, j);
    return T;
}

inline double frobenius_norm(const DenseMatrix& A) {
    double s = 0.0;
    for (double v : A.data()) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const DenseMatrix& A) {
    double s = 0.0;
    for (double v : A.data()) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace sketchlsq
