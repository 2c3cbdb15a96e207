#pragma once

#include <chrono>
#include <cmath>
#include <utility>

#include "sketchlsq/eigen_sym.hpp"
#include "sketchlsq/lsqr.hpp"
#include "sketchlsq/operators.hpp"
#include "sketchlsq/preconditioner.hpp"
#include "sketchlsq/solve_report.hpp"
#include "sketchlsq/triangular.hpp"

namespace sketchlsq {

/// Step size and momentum for the gradient family, tuned from a distortion
/// estimate eta_hat. With cond(AM) <= (1+eta_hat)/(1-eta_hat) the heavy-ball
/// iteration converges at asymptotic rate sqrt(beta) = eta_hat.
struct GradientParams {
    double alpha = 1.0;
    double beta = 0.0;
    double eta_hat = 0.0;
};

/// alpha = (1 - eta^2)^2, beta = eta^2.
inline GradientParams hbm_params(double eta_hat) {
    if (!(eta_hat >= 0.0 && eta_hat < 1.0)) {
        throw InvalidDistortion("hbm_params: need 0 <= eta_hat < 1");
    }
    const double e2 = eta_hat * eta_hat;
    return GradientParams{(1.0 - e2) * (1.0 - e2), e2, eta_hat};
}

/// Plain gradient descent step size alpha = (1 - eta^2)^2 / (1 + eta^2).
inline double gd_step_size(double eta_hat) {
    if (!(eta_hat >= 0.0 && eta_hat < 1.0)) {
        throw InvalidDistortion("gd_step_size: need 0 <= eta_hat < 1");
    }
    const double e2 = eta_hat * eta_hat;
    return (1.0 - e2) * (1.0 - e2) / (1.0 + e2);
}

inline GradientParams gd_params(double eta_hat) {
    return GradientParams{gd_step_size(eta_hat), 0.0, eta_hat};
}

/// Heavy-ball/gradient-descent iteration on the preconditioned problem:
///
///   g_t = M M^T A^T (b - A x_{t-1})
///   x_t = x_{t-1} + alpha g_t + beta (x_{t-1} - x_{t-2})
///
/// Convergence is tested on the free byproduct ||M^T A^T r_t|| (no extra
/// matvec); the same quantity growing by 1e6 over its initial value raises
/// Divergence, the symptom of an eta_hat below the true distortion.
template <class Op>
std::pair<Vector, SolveReport> gradient_descent_hbm(const Op& op, const Preconditioner& P,
                                                    const typename Op::VecM& b, const Vector& x0,
                                                    const GradientParams& params,
                                                    const SolveOptions& opts = {}) {
    const auto t_start = std::chrono::steady_clock::now();
    SolveReport rep;

    Vector x = x0;
    Vector x_prev = x0;

    typename Op::VecM r = b;
    {
        typename Op::VecM ax = op.matvec(x);
        op.axpy(-1.0, ax, r);
    }

    detail::record_iterate(op, b, x, opts, rep);
    std::tie(rep.init_reductions, rep.init_broadcasts) = op.sync_snapshot();

    double metric0 = -1.0;
    auto finish = [&](Termination term, long iters) {
        rep.termination = term;
        rep.iterations = iters;
        auto [red, bc] = op.sync_snapshot();
        rep.sync_count = red;
        rep.broadcasts = bc;
        rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return std::make_pair(x, rep);
    };

    for (long t = 1; t <= opts.maxit; ++t) {
        Vector h = apply_Mt(P, op.rmatvec(r));  // M^T A^T r_{t-1}
        const double metric = norm2(h);
        if (metric0 < 0.0) metric0 = metric;
        if (metric > 1e6 * metric0) {
            throw Divergence("gradient_descent_hbm: ||M^T A^T r|| grew by 1e6; "
                             "eta_hat likely underestimates the true distortion");
        }

        Vector g = apply_M(P, h);
        Vector x_next = x;
        scal(1.0 + params.beta, x_next);
        axpy(-params.beta, x_prev, x_next);
        axpy(params.alpha, g, x_next);
        x_prev = std::move(x);
        x = std::move(x_next);

        typename Op::VecM ax = op.matvec(x);
        r = b;
        op.axpy(-1.0, ax, r);

        rep.residual_estimate.push_back(metric);
        detail::record_iterate(op, b, x, opts, rep);

        if (metric <= opts.eps * metric0) {
            return finish(Termination::Tolerance, t);
        }
    }
    return finish(Termination::MaxIter, opts.maxit);
}

inline std::pair<Vector, SolveReport> gradient_descent_hbm(const DenseMatrix& A, const Preconditioner& P,
                                                           const Vector& b, const Vector& x0,
                                                           const GradientParams& params,
                                                           const SolveOptions& opts = {}) {
    return gradient_descent_hbm(serial_operator(A), P, b, x0, params, opts);
}
inline std::pair<Vector, SolveReport> gradient_descent_hbm(const CscMatrix& A, const Preconditioner& P,
                                                           const Vector& b, const Vector& x0,
                                                           const GradientParams& params,
                                                           const SolveOptions& opts = {}) {
    return gradient_descent_hbm(serial_operator(A), P, b, x0, params, opts);
}

/// Direct solve of the single-sketch iterative-Hessian-sketch subproblem
///
///   minimize_x  (1/2d) ||M^{-1}(x - x_prev)||^2 - (x - x_prev)^T A^T (b - A x_prev)
///
/// used as the oracle for the closed-form equivalence: the minimizer equals
/// the preconditioned gradient step x_prev + d * M M^T A^T (b - A x_prev).
/// The oracle recovers R = M^{-1}, assembles the Hessian (1/d) R^T R and
/// solves it with a dense Cholesky — a route that shares nothing with the
/// closed form's triangular products.
template <class MatT>
Vector ihs_update_oracle(const MatT& A, const Preconditioner& P, const Vector& x_prev,
                         const Vector& b, double d_scale) {
    Vector r = b;
    axpy(-1.0, matvec(A, x_prev), r);
    Vector rhs = rmatvec(A, r);

    DenseMatrix R = tri_inverse(P.M);  // M is upper triangular, so this is R
    const index_t n = R.rows();
    DenseMatrix H(n, n);
    for (index_t i = 0; i < n; ++i)
        for (index_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (index_t k = 0; k <= std::min(i, j); ++k) s += R(k, i) * R(k, j);
            H(i, j) = s / d_scale;
        }

    Vector delta = cholesky_solve(H, rhs);
    Vector out = x_prev;
    axpy(1.0, delta, out);
    return out;
}

/// The closed-form update the oracle above verifies.
template <class MatT>
Vector ihs_closed_form_update(const MatT& A, const Preconditioner& P, const Vector& x_prev,
                              const Vector& b, double d_scale) {
    Vector r = b;
    axpy(-1.0, matvec(A, x_prev), r);
    Vector step = apply_M(P, apply_Mt(P, rmatvec(A, r)));
    Vector out = x_prev;
    axpy(d_scale, step, out);
    return out;
}

}  // namespace sketchlsq
