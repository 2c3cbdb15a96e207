#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <utility>

#include "sketchlsq/operators.hpp"
#include "sketchlsq/preconditioner.hpp"
#include "sketchlsq/solve_report.hpp"

namespace sketchlsq {

struct SolveOptions {
    double eps = 1e-10;  // stop when phi_bar_{t+1} <= eps * beta_1
    long maxit = 100;
    const Vector* x_star = nullptr;   // when set, record ||A (x_star - x_t)||
    bool track_true_residual = false; // when set, record ||b - A x_t|| directly
    // Test hook: recomputed norms of the bidiagonalization vectors u_{t+1}
    // and v_{t+1} after each iteration (both should be 1 to roundoff).
    std::function<void(long t, double u_norm, double v_norm)> on_bidiag;
};

namespace detail {

template <class Op>
void record_iterate(const Op& op, const typename Op::VecM& b, const Vector& x,
                    const SolveOptions& opts, SolveReport& rep) {
    if (opts.x_star) {
        Vector diff = *opts.x_star;
        axpy(-1.0, x, diff);
        rep.iterates_error.push_back(op.error_norm(diff));
    }
    if (opts.track_true_residual) {
        rep.residual_true.push_back(op.residual_norm(b, x));
    }
}

/// Shared body of the standard and one-synchronization LSQR variants.
/// The two differ only in how the bidiagonalization step t computes
/// beta_{t+1} and A^T u_{t+1}:
///
///   standard:  beta = ||u_hat||            (one reduction)
///              z    = A^T (u_hat / beta)   (a second reduction)
///   one-sync:  (z~, beta) = fused A^T u_hat and ||u_hat||  (one reduction)
///              z    = z~ / beta
///
/// which are algebraically identical.
template <class Op>
std::pair<Vector, SolveReport> lsqr_impl(const Op& op, const Preconditioner& P,
                                         const typename Op::VecM& b, const Vector& x0,
                                         const SolveOptions& opts, bool one_sync) {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;
    Vector x = x0;

    // beta_1 u_1 = b - A x_0
    typename Op::VecM u = b;
    {
        typename Op::VecM ax0 = op.matvec(x0);
        op.axpy(-1.0, ax0, u);
    }
    const double beta1 = op.norm(u);

    auto finish = [&](Termination term, long iters) {
        rep.termination = term;
        rep.iterations = iters;
        auto [red, bc] = op.sync_snapshot();
        rep.sync_count = red;
        rep.broadcasts = bc;
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return std::make_pair(x, rep);
    };

    detail::record_iterate(op, b, x, opts, rep);

    if (beta1 == 0.0) {
        // x0 already solves the system exactly.
        return finish(Termination::Tolerance, 0);
    }
    op.scal(1.0 / beta1, u);

    // alpha_1 v_1 = M^T A^T u_1
    Vector v = apply_Mt(P, op.rmatvec(u));
    double alpha = norm2(v);
    if (alpha == 0.0) {
        // b - A x0 is orthogonal to range(A M): x0 is already optimal.
        return finish(Termination::Tolerance, 0);
    }
    scal(1.0 / alpha, v);

    Vector w = apply_M(P, v);
    double phi_bar = beta1;
    double rho_bar = alpha;

    std::tie(rep.init_reductions, rep.init_broadcasts) = op.sync_snapshot();

    // A vanished beta_{t+1} or alpha_{t+1} means the bidiagonalization
    // terminated: complete iteration t's rotation with the vanished
    // quantity as exact zero — that lands x_t on the solution — and stop.
    auto final_rotation_and_stop = [&](long t, double beta_term) {
        const double rho = std::hypot(rho_bar, beta_term);
        const double c = rho_bar / rho;
        const double s = beta_term / rho;
        const double phi = c * phi_bar;
        phi_bar = s * phi_bar;
        axpy(phi / rho, w, x);
        rep.residual_estimate.push_back(phi_bar);
        detail::record_iterate(op, b, x, opts, rep);
        return finish(Termination::Breakdown, t);
    };

    for (long t = 1; t <= opts.maxit; ++t) {
        // u_hat = A M v_t - alpha_t u_t
        typename Op::VecM u_hat = op.matvec(apply_M(P, v));
        op.axpy(-alpha, u, u_hat);

        double beta;
        Vector z;  // A^T u_{t+1}
        if (one_sync) {
            auto [zt, b2] = op.rmatvec_and_norm(u_hat);
            beta = b2;
            if (beta < 1e-300) return final_rotation_and_stop(t, 0.0);
            scal(1.0 / beta, zt);
            z = std::move(zt);
            op.scal(1.0 / beta, u_hat);
        } else {
            beta = op.norm(u_hat);
            if (beta < 1e-300) return final_rotation_and_stop(t, 0.0);
            op.scal(1.0 / beta, u_hat);
            z = op.rmatvec(u_hat);
        }
        u = std::move(u_hat);

        // v_hat = M^T A^T u_{t+1} - beta_{t+1} v_t
        Vector v_hat = apply_Mt(P, z);
        axpy(-beta, v, v_hat);
        const double alpha_next = norm2(v_hat);
        if (alpha_next < 1e-300) return final_rotation_and_stop(t, beta);
        scal(1.0 / alpha_next, v_hat);
        v = std::move(v_hat);
        alpha = alpha_next;

        if (opts.on_bidiag) opts.on_bidiag(t, op.norm_uncounted(u), norm2(v));

        // Plane rotation eliminating the subdiagonal of the bidiagonal factor.
        const double rho = std::hypot(rho_bar, beta);
        const double c = rho_bar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rho_bar = -c * alpha;
        const double phi = c * phi_bar;
        phi_bar = s * phi_bar;

        axpy(phi / rho, w, x);
        Vector w_next = apply_M(P, v);
        axpy(-theta / rho, w, w_next);
        w = std::move(w_next);

        rep.residual_estimate.push_back(phi_bar);
        detail::record_iterate(op, b, x, opts, rep);

        if (phi_bar <= opts.eps * beta1) {
            return finish(Termination::Tolerance, t);
        }
    }
    return finish(Termination::MaxIter, opts.maxit);
}

}  // namespace detail

/// Preconditioned LSQR on min ||b - A x|| with right preconditioner M.
/// Stops when phi_bar_{t+1} <= eps * beta_1 or after maxit iterations.
template <class Op>
std::pair<Vector, SolveReport> lsqr(const Op& op, const Preconditioner& P,
                                    const typename Op::VecM& b, const Vector& x0,
                                    const SolveOptions& opts = {}) {
    return detail::lsqr_impl(op, P, b, x0, opts, false);
}

/// LSQR restructured so each iteration needs a single reduction: the norm of
/// u_hat and the product A^T u_hat are combined into one synchronization.
/// Iterates are algebraically identical to lsqr().
template <class Op>
std::pair<Vector, SolveReport> lsqr_one_sync(const Op& op, const Preconditioner& P,
                                             const typename Op::VecM& b, const Vector& x0,
                                             const SolveOptions& opts = {}) {
    return detail::lsqr_impl(op, P, b, x0, opts, true);
}

// Convenience overloads over plain matrices.

inline std::pair<Vector, SolveReport> lsqr(const DenseMatrix& A, const Preconditioner& P,
                                           const Vector& b, const Vector& x0,
                                           const SolveOptions& opts = {}) {
    return lsqr(serial_operator(A), P, b, x0, opts);
}
inline std::pair<Vector, SolveReport> lsqr(const CscMatrix& A, const Preconditioner& P,
                                           const Vector& b, const Vector& x0,
                                           const SolveOptions& opts = {}) {
    return lsqr(serial_operator(A), P, b, x0, opts);
}
inline std::pair<Vector, SolveReport> lsqr_one_sync(const DenseMatrix& A, const Preconditioner& P,
                                                    const Vector& b, const Vector& x0,
                                                    const SolveOptions& opts = {}) {
    return lsqr_one_sync(serial_operator(A), P, b, x0, opts);
}
inline std::pair<Vector, SolveReport> lsqr_one_sync(const CscMatrix& A, const Preconditioner& P,
                                                    const Vector& b, const Vector& x0,
                                                    const SolveOptions& opts = {}) {
    return lsqr_one_sync(serial_operator(A), P, b, x0, opts);
}

}  // namespace sketchlsq
