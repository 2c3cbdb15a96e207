// Test-side oracles, kept independent of the library code paths they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/rng.hpp"
#include "sketchlsq/vector_ops.hpp"

namespace oracle {

using sketchlsq::DenseMatrix;
using sketchlsq::index_t;
using sketchlsq::Vector;

/// Naive triple-loop product with the inner index ascending, matching the
/// documented accumulation order of the library's sparse multiply.
inline DenseMatrix naive_gemm(const DenseMatrix& A, const DenseMatrix& B) {
    DenseMatrix C(A.rows(), B.cols());
    for (index_t j = 0; j < B.cols(); ++j)
        for (index_t k = 0; k < A.cols(); ++k)
            for (index_t i = 0; i < A.rows(); ++i) C(i, j) += A(i, k) * B(k, j);
    return C;
}

inline Vector naive_matvec(const DenseMatrix& A, const Vector& x) {
    Vector y(static_cast<std::size_t>(A.rows()), 0.0);
    for (index_t i = 0; i < A.rows(); ++i) {
        double s = 0.0;
        for (index_t j = 0; j < A.cols(); ++j) s += A(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

inline Vector naive_rmatvec(const DenseMatrix& A, const Vector& x) {
    Vector y(static_cast<std::size_t>(A.cols()), 0.0);
    for (index_t j = 0; j < A.cols(); ++j) {
        double s = 0.0;
        for (index_t i = 0; i < A.rows(); ++i) s += A(i, j) * x[static_cast<std::size_t>(i)];
        y[static_cast<std::size_t>(j)] = s;
    }
    return y;
}

inline DenseMatrix rand_dense(index_t m, index_t n, sketchlsq::Rng& rng) {
    DenseMatrix A(m, n);
    for (double& v : A.data()) v = rng.normal();
    return A;
}

inline Vector rand_vector(index_t n, sketchlsq::Rng& rng) {
    Vector v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.normal();
    return v;
}

/// Symmetric eigenvalues via an independently written one-sided Jacobi
/// sweep (distinct code from the library's implementation).
inline std::vector<double> jacobi_eigen_oracle(DenseMatrix A, int sweeps = 100) {
    const index_t n = A.rows();
    for (int s = 0; s < sweeps; ++s) {
        double off = 0.0;
        for (index_t p = 0; p < n; ++p)
            for (index_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                off += apq * apq;
                if (apq == 0.0) continue;
                const double theta = 0.5 * std::atan2(2.0 * apq, A(q, q) - A(p, p));
                const double c = std::cos(theta), sn = std::sin(theta);
                for (index_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - sn * akq;
                    A(k, q) = sn * akp + c * akq;
                }
                for (index_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - sn * aqk;
                    A(q, k) = sn * apk + c * aqk;
                }
            }
        if (std::sqrt(off) < 1e-14) break;
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = A(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

/// Singular values through the Gram matrix and the Jacobi oracle above.
inline std::vector<double> singular_values_oracle(const DenseMatrix& B) {
    DenseMatrix G(B.cols(), B.cols());
    for (index_t i = 0; i < B.cols(); ++i)
        for (index_t j = 0; j < B.cols(); ++j) {
            double s = 0.0;
            for (index_t k = 0; k < B.rows(); ++k) s += B(k, i) * B(k, j);
            G(i, j) = s;
        }
    auto ev = jacobi_eigen_oracle(std::move(G));
    for (double& v : ev) v = v > 0.0 ? std::sqrt(v) : 0.0;
    return ev;
}

/// Dense solve by Gaussian elimination with partial pivoting.
inline Vector solve_oracle(DenseMatrix A, Vector b) {
    const index_t n = A.rows();
    for (index_t k = 0; k < n; ++k) {
        index_t piv = k;
        for (index_t i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(piv, k))) piv = i;
        if (piv != k) {
            for (index_t j = 0; j < n; ++j) std::swap(A(k, j), A(piv, j));
            std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(piv)]);
        }
        for (index_t i = k + 1; i < n; ++i) {
            const double f = A(i, k) / A(k, k);
            for (index_t j = k; j < n; ++j) A(i, j) -= f * A(k, j);
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
        }
    }
    Vector x(static_cast<std::size_t>(n));
    for (index_t i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (index_t j = i + 1; j < n; ++j) s -= A(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / A(i, i);
    }
    return x;
}

/// Normal-equations least squares: solve (A^T A) x = A^T b directly.
inline Vector normal_equations_oracle(const DenseMatrix& A, const Vector& b) {
    DenseMatrix G(A.cols(), A.cols());
    for (index_t i = 0; i < A.cols(); ++i)
        for (index_t j = 0; j < A.cols(); ++j) {
            double s = 0.0;
            for (index_t k = 0; k < A.rows(); ++k) s += A(k, i) * A(k, j);
            G(i, j) = s;
        }
    return solve_oracle(std::move(G), naive_rmatvec(A, b));
}

/// Lambert W by bisection on w e^w - x = 0, for x >= 0.
inline double lambert_bisect(double x) {
    if (x == 0.0) return 0.0;
    double lo = 0.0, hi = std::log1p(x) + 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid * std::exp(mid) < x) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Upper chi-square critical value by the Wilson-Hilferty approximation.
/// z is the standard normal quantile of the target tail (3.0902 ~ 1e-3).
inline double chi2_critical(double df, double z = 3.090232306167814) {
    const double a = 2.0 / (9.0 * df);
    const double t = 1.0 - a + z * std::sqrt(a);
    return df * t * t * t;
}

}  // namespace oracle
