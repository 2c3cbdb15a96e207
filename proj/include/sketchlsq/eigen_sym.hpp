#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/errors.hpp"

namespace sketchlsq {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Returns the eigenvalues in descending order; values only, no vectors.
inline std::vector<double> jacobi_eigenvalues(DenseMatrix A) {
    const index_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("jacobi_eigenvalues: matrix not square");

    double fro = frobenius_norm(A);
    if (fro == 0.0) return std::vector<double>(static_cast<std::size_t>(n), 0.0);
    const double stop = 1e-15 * fro;

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (index_t p = 0; p < n; ++p)
            for (index_t q = p + 1; q < n; ++q) off += 2.0 * A(p, q) * A(p, q);
        if (std::sqrt(off) <= stop) break;

        for (index_t p = 0; p < n; ++p) {
            for (index_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double app = A(p, p);
                const double aqq = A(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (index_t k = 0; k < n; ++k) {
                    const double akp = A(k, p);
                    const double akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double apk = A(p, k);
                    const double aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> ev(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = A(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

/// Singular values of a tall matrix B (d >= n), descending.
///
/// Computed as square roots of the eigenvalues of the n x n Gram matrix
/// B^T B. Squaring the condition number is acceptable here: downstream
/// consumers (distortion, condition estimates) need ~1e-6 accuracy on
/// well-separated spectra, and this avoids a bidiagonalization.
inline std::vector<double> singular_values(const DenseMatrix& B) {
    if (B.rows() < B.cols()) throw DimensionMismatch("singular_values: need rows >= cols");
    DenseMatrix G = matmul_at_b(B, B);
    // Symmetrize; roundoff in the Gram product is not exactly symmetric.
    for (index_t i = 0; i < G.rows(); ++i)
        for (index_t j = i + 1; j < G.cols(); ++j) {
            const double v = 0.5 * (G(i, j) + G(j, i));
            G(i, j) = v;
            G(j, i) = v;
        }
    std::vector<double> ev = jacobi_eigenvalues(std::move(G));
    for (double& v : ev) v = (v > 0.0) ? std::sqrt(v) : 0.0;
    return ev;
}

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
inline DenseMatrix cholesky(const DenseMatrix& A) {
    const index_t n = A.rows();
    if (A.cols() != n) throw DimensionMismatch("cholesky: matrix not square");
    DenseMatrix L(n, n);
    for (index_t j = 0; j < n; ++j) {
        double s = A(j, j);
        for (index_t k = 0; k < j; ++k) s -= L(j, k) * L(j, k);
        if (s <= 0.0) throw Error("cholesky: matrix not positive definite");
        L(j, j) = std::sqrt(s);
        for (index_t i = j + 1; i < n; ++i) {
            double t = A(i, j);
            for (index_t k = 0; k < j; ++k) t -= L(i, k) * L(j, k);
            L(i, j) = t / L(j, j);
        }
    }
    return L;
}

/// Solve A x = b for symmetric positive definite A via Cholesky.
inline Vector cholesky_solve(const DenseMatrix& A, const Vector& b) {
    const index_t n = A.rows();
    if (static_cast<index_t>(b.size()) != n) throw DimensionMismatch("cholesky_solve");
    DenseMatrix L = cholesky(A);
    Vector y(b);
    for (index_t i = 0; i < n; ++i) {
        double s = y[static_cast<std::size_t>(i)];
        for (index_t k = 0; k < i; ++k) s -= L(i, k) * y[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = s / L(i, i);
    }
    for (index_t i = n - 1; i >= 0; --i) {
        double s = y[static_cast<std::size_t>(i)];
        for (index_t k = i + 1; k < n; ++k) s -= L(k, i) * y[static_cast<std::size_t>(k)];
        y[static_cast<std::size_t>(i)] = s / L(i, i);
    }
    return y;
}

}  // namespace sketchlsq
