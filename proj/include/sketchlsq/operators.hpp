#pragma once

#include <utility>

#include "sketchlsq/csc_matrix.hpp"
#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/vector_ops.hpp"

namespace sketchlsq {

/// Execution backend over a plain in-process matrix. Solvers are written
/// against this surface; the distributed twin in distsim.hpp provides the
/// same operations over row-partitioned data with synchronization counting.
template <class MatT>
struct SerialOperator {
    const MatT& A;

    using VecM = Vector;  // vectors in the row (length-m) space

    index_t rows() const { return mat_rows(A); }
    index_t cols() const { return mat_cols(A); }

    VecM matvec(const Vector& x) const { return sketchlsq::matvec(A, x); }
    Vector rmatvec(const VecM& y) const { return sketchlsq::rmatvec(A, y); }

    /// Fused transpose-product and norm; one synchronization when distributed.
    std::pair<Vector, double> rmatvec_and_norm(const VecM& y) const {
        return {sketchlsq::rmatvec(A, y), norm2(y)};
    }

    double norm(const VecM& y) const { return norm2(y); }
    void axpy(double a, const VecM& x, VecM& y) const { sketchlsq::axpy(a, x, y); }
    void scal(double a, VecM& y) const { sketchlsq::scal(a, y); }

    /// Uncounted instrumentation helpers.
    double error_norm(const Vector& xdiff) const { return norm2(sketchlsq::matvec(A, xdiff)); }
    double residual_norm(const VecM& b, const Vector& x) const {
        VecM r = b;
        sketchlsq::axpy(-1.0, sketchlsq::matvec(A, x), r);
        return norm2(r);
    }
    double norm_uncounted(const VecM& y) const { return norm2(y); }

    std::pair<long, long> sync_snapshot() const { return {0, 0}; }  // reductions, broadcasts

private:
    static index_t mat_rows(const DenseMatrix& M) { return M.rows(); }
    static index_t mat_cols(const DenseMatrix& M) { return M.cols(); }
    static index_t mat_rows(const CscMatrix& M) { return M.rows; }
    static index_t mat_cols(const CscMatrix& M) { return M.cols; }
};

template <class MatT>
SerialOperator<MatT> serial_operator(const MatT& A) {
    return SerialOperator<MatT>{A};
}

}  // namespace sketchlsq
