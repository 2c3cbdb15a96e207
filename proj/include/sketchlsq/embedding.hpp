#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "sketchlsq/errors.hpp"

namespace sketchlsq {

using index_t = std::int64_t;

struct RateEstimate {
    double rate_per_iter;  // sqrt(n/d)
    double kappa;          // (1 + sqrt(n/d)) / (1 - sqrt(n/d))
};

/// Convergence-rate estimate for preconditioned LSQR from the Gaussian
/// asymptotics: distortion ~ sqrt(n/d), hence cond(AM) ~ (1+r)/(1-r).
inline RateEstimate estimate_rate(index_t n, index_t d) {
    if (d <= n) throw InvalidDims("estimate_rate: need d > n");
    const double r = std::sqrt(static_cast<double>(n) / static_cast<double>(d));
    return RateEstimate{r, (1.0 + r) / (1.0 - r)};
}

/// Iterations to reach accuracy eps under the rate estimate:
/// t = ceil(log(eps) / log(n/d)), clamped to at least 1.
inline long iterations_for(double eps, index_t n, index_t d) {
    if (d <= n) throw InvalidDims("iterations_for: need d > n");
    if (eps >= 1.0) return 1;
    const double ratio = std::log(eps) / std::log(static_cast<double>(n) / static_cast<double>(d));
    // The 1e-9 guard keeps exact integer ratios (e.g. log 1e-10 / log 1e-2)
    // from rounding up through the ceiling.
    return std::max<long>(1, static_cast<long>(std::ceil(ratio - 1e-9)));
}

/// Principal-branch Lambert W for x >= 0: returns w with w e^w = x, to
/// |w e^w - x| <= 1e-12 max(1, x). Halley iteration from w0 = log(1 + x),
/// safeguarded by bisection whenever a step leaves the bracket.
inline double lambert_w(double x) {
    if (x < 0.0) throw NegativeArgument("lambert_w: argument must be >= 0");
    if (x == 0.0) return 0.0;

    double lo = 0.0;
    double hi = std::log1p(x) + 1.0;  // w <= log(1+x) < hi on x >= 0
    double w = std::log1p(x);
    for (int it = 0; it < 200; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        if (std::abs(f) <= 1e-13 * std::max(1.0, x)) break;
        if (f > 0.0) hi = w; else lo = w;

        const double fp = ew * (w + 1.0);
        const double fpp = ew * (w + 2.0);
        double step = f / (fp - 0.5 * f * fpp / fp);
        double next = w - step;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        w = next;
    }
    return w;
}

/// Embedding-dimension choice plus its predicted cost figures.
struct DimensionPlan {
    index_t d = 0;
    long predicted_iters = 0;
    double predicted_kappa = 0.0;
    double eps = 0.0;
};

/// The real-valued balance point d = n exp(W(-m log(eps) / n^2)), at which
/// the predicted iteration cost (log eps / log(n/d)) * m n equals the
/// preconditioner build cost d n^2 for dense problems.
inline double balance_dimension_real(index_t m, index_t n, double eps) {
    if (!(m > n && n >= 1)) throw InvalidDims("balance_dimension_real: need m > n >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidDims("balance_dimension_real: need 0 < eps < 1");
    const double arg = -static_cast<double>(m) * std::log(eps) /
                       (static_cast<double>(n) * static_cast<double>(n));
    return static_cast<double>(n) * std::exp(lambert_w(arg));
}

/// Rounded and clamped embedding dimension: d in [n+1, m]. Values of d <= n
/// cannot embed an n-dimensional subspace and d > m never helps.
inline DimensionPlan select_embedding_dim(index_t m, index_t n, double eps) {
    const double d_real = balance_dimension_real(m, n, eps);
    auto d = static_cast<index_t>(std::floor(d_real + 0.5));  // round half up
    d = std::clamp<index_t>(d, n + 1, m);
    DimensionPlan plan;
    plan.d = d;
    plan.eps = eps;
    plan.predicted_iters = iterations_for(eps, n, d);
    plan.predicted_kappa = estimate_rate(n, d).kappa;
    return plan;
}

}  // namespace sketchlsq
