#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>

#include "sketchlsq/csc_matrix.hpp"
#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/eigen_sym.hpp"
#include "sketchlsq/errors.hpp"
#include "sketchlsq/matrix_market.hpp"
#include "sketchlsq/qr.hpp"
#include "sketchlsq/rng.hpp"

namespace sketchlsq {

using AnyMatrix = std::variant<DenseMatrix, CscMatrix>;

inline index_t rows_of(const DenseMatrix& M) { return M.rows(); }
inline index_t cols_of(const DenseMatrix& M) { return M.cols(); }
inline index_t rows_of(const CscMatrix& M) { return M.rows; }
inline index_t cols_of(const CscMatrix& M) { return M.cols; }

inline index_t matrix_rows(const AnyMatrix& A) {
    return std::visit([](const auto& M) { return rows_of(M); }, A);
}
inline index_t matrix_cols(const AnyMatrix& A) {
    return std::visit([](const auto& M) { return cols_of(M); }, A);
}

/// A regression test problem: the matrix, right-hand side, and when the
/// construction makes them available, the true solution and its residual.
struct ProblemInstance {
    AnyMatrix A;
    Vector b;
    std::optional<Vector> x_star;
    std::optional<double> res_star;  // ||b - A x_star||
    std::string descriptor;
};

/// Dense m x n matrix with prescribed condition number: A = U diag(s) V^T
/// with singular values log-spaced in [1/cond, 1], U the Q factor of a
/// Gaussian m x n (approximately Haar), V the Q factor of a Gaussian n x n.
inline DenseMatrix gen_dense(index_t m, index_t n, double cond, std::uint64_t seed) {
    if (cond < 1.0) throw InvalidDims("gen_dense: need cond >= 1");
    Rng rng(seed, 0);
    DenseMatrix G(m, n);
    for (double& v : G.data()) v = rng.normal();
    DenseMatrix U = householder_qr(G).Q;

    Rng rng2(seed, 1);
    DenseMatrix H(n, n);
    for (double& v : H.data()) v = rng2.normal();
    DenseMatrix V = householder_qr(H).Q;

    // Scale columns of U by the singular values, then multiply by V^T.
    for (index_t j = 0; j < n; ++j) {
        const double s = (n == 1) ? 1.0
                                  : std::pow(10.0, -std::log10(cond) * static_cast<double>(j) /
                                                       static_cast<double>(n - 1));
        double* uj = U.col(j);
        for (index_t i = 0; i < m; ++i) uj[i] *= s;
    }
    return matmul(U, transpose(V));
}

/// Sparse m x n matrix where each entry is independently nonzero with the
/// given probability, nonzero values a random sign. Column substreams keep
/// it deterministic per seed.
inline CscMatrix gen_sparse_sign_matrix(index_t m, index_t n, double density, std::uint64_t seed) {
    if (!(density >= 0.0 && density <= 1.0)) throw InvalidDims("gen_sparse_sign_matrix: density in [0,1]");
    CscMatrix A(m, n);
    for (index_t j = 0; j < n; ++j) {
        Rng rng(seed, static_cast<std::uint64_t>(j));
        for (index_t i = 0; i < m; ++i) {
            if (rng.uniform01() < density) {
                A.row_indices.push_back(i);
                A.values.push_back(rng.sign());
            }
        }
        A.col_pointers[static_cast<std::size_t>(j) + 1] = static_cast<index_t>(A.values.size());
    }
    return A;
}

/// First n columns of the m x m identity: the maximally coherent hard case
/// for sparse sign sketches.
inline CscMatrix gen_identity_columns(index_t m, index_t n) {
    if (n > m) throw InvalidDims("gen_identity_columns: need n <= m");
    CscMatrix A(m, n);
    for (index_t j = 0; j < n; ++j) {
        A.row_indices.push_back(j);
        A.values.push_back(1.0);
        A.col_pointers[static_cast<std::size_t>(j) + 1] = j + 1;
    }
    return A;
}

namespace detail {

inline DenseMatrix gram(const DenseMatrix& A) { return matmul_at_b(A, A); }

inline DenseMatrix gram(const CscMatrix& A) {
    DenseMatrix G(A.cols, A.cols);
    Vector work(static_cast<std::size_t>(A.rows), 0.0);
    for (index_t j = 0; j < A.cols; ++j) {
        for (index_t k = A.col_pointers[j]; k < A.col_pointers[j + 1]; ++k)
            work[static_cast<std::size_t>(A.row_indices[static_cast<std::size_t>(k)])] =
                A.values[static_cast<std::size_t>(k)];
        for (index_t i = 0; i < A.cols; ++i) {
            double s = 0.0;
            for (index_t k = A.col_pointers[i]; k < A.col_pointers[i + 1]; ++k)
                s += A.values[static_cast<std::size_t>(k)] *
                     work[static_cast<std::size_t>(A.row_indices[static_cast<std::size_t>(k)])];
            G(i, j) = s;
        }
        for (index_t k = A.col_pointers[j]; k < A.col_pointers[j + 1]; ++k)
            work[static_cast<std::size_t>(A.row_indices[static_cast<std::size_t>(k)])] = 0.0;
    }
    return G;
}

}  // namespace detail

struct RhsResult {
    Vector b;
    Vector x_star;
    double res_star = 0.0;
};

/// Right-hand side with ||b|| = 1 and ||b - A x_star|| = rho: the range
/// component comes from a uniform coefficient vector, the residual from a
/// uniform vector projected off range(A) (twice, to push the orthogonality
/// error to roundoff) and rescaled.
template <class MatT>
RhsResult gen_rhs(const MatT& A, double rho, std::uint64_t seed) {
    if (!(rho >= 0.0 && rho < 1.0)) throw InvalidResidual("gen_rhs: need 0 <= rho < 1");
    const index_t m = rows_of(A);
    const index_t n = cols_of(A);

    Rng rng(seed, 0);
    Vector w(static_cast<std::size_t>(n));
    for (double& v : w) v = rng.uniform_sym();
    Vector p = matvec(A, w);
    const double pn = norm2(p);
    if (pn == 0.0) throw RankDeficient("gen_rhs: A w vanished; A is rank deficient");
    const double range_norm = std::sqrt(1.0 - rho * rho);

    RhsResult out;
    out.x_star = scaled(w, range_norm / pn);
    out.b = scaled(p, range_norm / pn);
    out.res_star = rho;
    if (rho == 0.0) return out;

    DenseMatrix G = detail::gram(A);
    Vector z(static_cast<std::size_t>(m));
    for (double& v : z) v = rng.uniform_sym();
    for (int pass = 0; pass < 2; ++pass) {
        Vector y = cholesky_solve(G, rmatvec(A, z));
        axpy(-1.0, matvec(A, y), z);
    }
    const double zn = norm2(z);
    if (zn == 0.0) throw InvalidResidual("gen_rhs: no component outside range(A); m == n?");
    axpy(rho / zn, z, out.b);
    return out;
}

/// Columns v, Bv, B^2 v, ..., each normalized to unit length right after it
/// is produced (unnormalized monomials overflow long before n gets large).
inline DenseMatrix build_krylov_basis(const CscMatrix& B, const Vector& v, index_t n) {
    if (B.rows != B.cols) throw DimensionMismatch("build_krylov_basis: B must be square");
    if (static_cast<index_t>(v.size()) != B.rows) throw DimensionMismatch("build_krylov_basis: v length");
    DenseMatrix K(B.rows, n);
    Vector c = v;
    for (index_t j = 0; j < n; ++j) {
        const double cn = norm2(c);
        if (cn < 1e-300) {
            throw BreakdownIfZero("build_krylov_basis: column " + std::to_string(j) + " vanished");
        }
        scal(1.0 / cn, c);
        std::copy(c.begin(), c.end(), K.col(j));
        if (j + 1 < n) c = matvec(B, c);
    }
    return K;
}

/// Reads a Matrix Market file (coordinate -> CSC, array -> dense).
inline AnyMatrix load_matrix_market(const std::string& path) { return mm::load_matrix(path); }

}  // namespace sketchlsq
