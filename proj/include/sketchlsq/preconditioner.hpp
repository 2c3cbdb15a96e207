#pragma once

#include <chrono>

#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/qr.hpp"
#include "sketchlsq/triangular.hpp"

namespace sketchlsq {

/// The sketch-derived right preconditioner: M = R^{-1} stored explicitly
/// (upper triangular) together with the Q factor of the sketched matrix.
/// (S A) M = Q has orthonormal columns, so the sketched system is perfectly
/// conditioned by construction.
struct Preconditioner {
    DenseMatrix M;       // n x n upper triangular, = R^{-1}
    DenseMatrix Q;       // d x n orthonormal columns
    double build_time = 0.0;  // seconds spent in QR + inversion
    index_t d = 0;

    index_t n() const { return M.rows(); }

    static Preconditioner identity(index_t n) {
        Preconditioner P;
        P.M = DenseMatrix::identity(n);
        P.Q = DenseMatrix::identity(n);
        P.d = n;
        return P;
    }
};

/// Builds the preconditioner from the sketched matrix Y = S A:
/// factor Y = Q R, then invert R explicitly. Throws RankDeficient (from the
/// QR) when the sketch lost rank — the caller decides whether to re-sketch.
inline Preconditioner build_preconditioner(const DenseMatrix& Y) {
    const auto t0 = std::chrono::steady_clock::now();
    QrResult qr = householder_qr(Y);
    Preconditioner P;
    P.M = tri_inverse(qr.R);
    P.Q = std::move(qr.Q);
    P.d = Y.rows();
    P.build_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return P;
}

/// x0 = M Q^T (S b): the solution of the sketched problem
/// min_x ||S b - (S A) x||, used as the iterative method's initial guess.
inline Vector initial_guess(const Preconditioner& P, const Vector& Sb) {
    if (static_cast<index_t>(Sb.size()) != P.Q.rows()) {
        throw DimensionMismatch("initial_guess: Sb length does not match sketch dimension");
    }
    return tri_upper_matvec(P.M, rmatvec(P.Q, Sb));
}

inline Vector apply_M(const Preconditioner& P, const Vector& v) { return tri_upper_matvec(P.M, v); }
inline Vector apply_Mt(const Preconditioner& P, const Vector& v) { return tri_upper_rmatvec(P.M, v); }

}  // namespace sketchlsq
