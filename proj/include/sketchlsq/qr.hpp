#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/errors.hpp"

namespace sketchlsq {

struct QrResult {
    DenseMatrix Q;  // d x n, orthonormal columns
    DenseMatrix R;  // n x n, upper triangular, nonnegative diagonal
};

/// Thin Householder QR of a tall matrix Y (d >= n).
///
/// Throws RankDeficient when a diagonal of R falls below 1e-12 * max|Y|,
/// which signals that the sketch failed to preserve rank.
inline QrResult householder_qr(const DenseMatrix& Y) {
    const index_t d = Y.rows();
    const index_t n = Y.cols();
    if (d < n) throw DimensionMismatch("householder_qr: need rows >= cols");

    const double rank_tol = 1e-12 * max_abs(Y);

    // Factor in place: strict lower triangle of W holds the Householder
    // vectors (unit leading entry implicit), upper triangle holds R.
    DenseMatrix W = Y;
    std::vector<double> tau(static_cast<std::size_t>(n), 0.0);

    for (index_t k = 0; k < n; ++k) {
        double* wk = W.col(k);
        double sigma = 0.0;
        for (index_t i = k + 1; i < d; ++i) sigma += wk[i] * wk[i];
        const double x0 = wk[k];
        const double normx = std::sqrt(x0 * x0 + sigma);
        if (normx < rank_tol || normx == 0.0) {
            throw RankDeficient("householder_qr: column " + std::to_string(k) +
                                " numerically dependent");
        }

        const double beta = (x0 > 0.0) ? -normx : normx;
        const double v0 = x0 - beta;
        for (index_t i = k + 1; i < d; ++i) wk[i] /= v0;
        tau[static_cast<std::size_t>(k)] = (beta - x0) / beta;
        wk[k] = beta;

        for (index_t j = k + 1; j < n; ++j) {
            double* wj = W.col(j);
            double s = wj[k];
            for (index_t i = k + 1; i < d; ++i) s += wk[i] * wj[i];
            s *= tau[static_cast<std::size_t>(k)];
            wj[k] -= s;
            for (index_t i = k + 1; i < d; ++i) wj[i] -= s * wk[i];
        }
    }

    QrResult out{DenseMatrix(d, n), DenseMatrix(n, n)};
    for (index_t j = 0; j < n; ++j)
        for (index_t i = 0; i <= j; ++i) out.R(i, j) = W(i, j);

    // Q = H_0 H_1 ... H_{n-1} [I_n; 0], reflectors applied back to front.
    for (index_t j = 0; j < n; ++j) out.Q(j, j) = 1.0;
    for (index_t k = n - 1; k >= 0; --k) {
        const double* wk = W.col(k);
        const double t = tau[static_cast<std::size_t>(k)];
        for (index_t j = 0; j < n; ++j) {
            double* qj = out.Q.col(j);
            double s = qj[k];
            for (index_t i = k + 1; i < d; ++i) s += wk[i] * qj[i];
            s *= t;
            qj[k] -= s;
            for (index_t i = k + 1; i < d; ++i) qj[i] -= s * wk[i];
        }
    }

    // Flip signs so the diagonal of R is nonnegative.
    for (index_t k = 0; k < n; ++k) {
        if (out.R(k, k) < 0.0) {
            for (index_t j = k; j < n; ++j) out.R(k, j) = -out.R(k, j);
            double* qk = out.Q.col(k);
            for (index_t i = 0; i < d; ++i) qk[i] = -qk[i];
        }
    }

    return out;
}

}  // namespace sketchlsq
