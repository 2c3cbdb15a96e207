#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "sketchlsq/csc_matrix.hpp"
#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/eigen_sym.hpp"
#include "sketchlsq/errors.hpp"
#include "sketchlsq/qr.hpp"

namespace sketchlsq {

/// Distortion measurements of a sketch on a subspace.
struct DistortionReport {
    double eta = 0.0;        // max(1 - sigma_min, sigma_max - 1), median over trials
    double sigma_min = 0.0;  // of S U, from the median-eta trial
    double sigma_max = 0.0;
    index_t d = 0;
    index_t zeta = 0;        // 0 when not a sparse sign sketch
    int trials = 1;
    double q05 = 0.0, q50 = 0.0, q95 = 0.0;  // eta quantiles across trials
};

/// Orthonormal basis for range(A) via thin Householder QR.
inline DenseMatrix orthonormal_basis(const DenseMatrix& A) { return householder_qr(A).Q; }
inline DenseMatrix orthonormal_basis(const CscMatrix& A) { return householder_qr(densify(A)).Q; }

namespace detail {

struct SingleDistortion {
    double eta, sigma_min, sigma_max;
};

inline SingleDistortion distortion_of_product(const DenseMatrix& SU) {
    std::vector<double> sv = singular_values(SU);
    const double smax = sv.front();
    const double smin = sv.back();
    return {std::max(1.0 - smin, smax - 1.0), smin, smax};
}

}  // namespace detail

/// Extends an orthonormal basis U of range(A) with the normalized component
/// of b outside that range, giving a basis of range(A) + span(b). Skipped
/// when b already lies in range(A) (relative component below 1e-12).
inline DenseMatrix extend_basis(const DenseMatrix& U, const Vector& b) {
    Vector proj = matvec(U, rmatvec(U, b));
    Vector res = b;
    axpy(-1.0, proj, res);
    const double rn = norm2(res);
    if (rn <= 1e-12 * norm2(b)) return U;
    DenseMatrix W(U.rows(), U.cols() + 1);
    std::copy(U.data().begin(), U.data().end(), W.data().begin());
    double* last = W.col(U.cols());
    for (index_t i = 0; i < U.rows(); ++i) last[i] = res[static_cast<std::size_t>(i)] / rn;
    return W;
}

/// Distortion of one concrete sketch on the subspace spanned by U
/// (orthonormal columns); when b is given the basis is first extended to
/// range(U) + span(b).
template <class Sketch>
DistortionReport distortion(const Sketch& S, const DenseMatrix& U, const Vector* also_b = nullptr) {
    const DenseMatrix& basis = U;
    detail::SingleDistortion one =
        also_b ? detail::distortion_of_product(apply(S, extend_basis(basis, *also_b)))
               : detail::distortion_of_product(apply(S, basis));
    DistortionReport rep;
    rep.eta = one.eta;
    rep.sigma_min = one.sigma_min;
    rep.sigma_max = one.sigma_max;
    rep.q05 = rep.q50 = rep.q95 = one.eta;
    return rep;
}

/// Applies a freshly drawn sketch to U; the trial index selects the seed
/// substream. Used by the multi-trial protocols below.
using SketchApplyFn = std::function<DenseMatrix(const DenseMatrix&, std::uint64_t trial)>;

inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 0.0;
    const double pos = q * (static_cast<double>(v.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1.0 - frac) + v[hi] * frac;
}

/// Median / 5% / 95% distortion over independent sketch draws.
inline DistortionReport distortion_trials(const SketchApplyFn& apply_sketch, const DenseMatrix& U,
                                          int trials) {
    std::vector<double> etas;
    std::vector<detail::SingleDistortion> singles;
    for (int t = 0; t < trials; ++t) {
        singles.push_back(detail::distortion_of_product(apply_sketch(U, static_cast<std::uint64_t>(t))));
        etas.push_back(singles.back().eta);
    }
    const double med = quantile(etas, 0.5);
    // report sigma_min/max from the trial closest to the median eta
    std::size_t best = 0;
    for (std::size_t i = 1; i < singles.size(); ++i)
        if (std::abs(singles[i].eta - med) < std::abs(singles[best].eta - med)) best = i;

    DistortionReport rep;
    rep.eta = med;
    rep.sigma_min = singles[best].sigma_min;
    rep.sigma_max = singles[best].sigma_max;
    rep.trials = trials;
    rep.q05 = quantile(etas, 0.05);
    rep.q50 = med;
    rep.q95 = quantile(etas, 0.95);
    return rep;
}

/// Marchenko-Pastur density at x for aspect ratio = n/d in (0, 1]:
/// sqrt((l+ - x)(x - l-)) / (2 pi ratio x) on [l-, l+], l+- = (1 +- sqrt(ratio))^2.
inline double marchenko_pastur_pdf(double x, double ratio) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw InvalidDims("marchenko_pastur_pdf: ratio in (0,1]");
    if (!(x > 0.0)) return 0.0;
    const double sr = std::sqrt(ratio);
    const double lm = (1.0 - sr) * (1.0 - sr);
    const double lp = (1.0 + sr) * (1.0 + sr);
    if (x <= lm || x >= lp) return 0.0;
    return std::sqrt((lp - x) * (x - lm)) / (2.0 * std::numbers::pi * ratio * x);
}

/// cond(AM) <= (1 + eta) / (1 - eta).
inline double cond_bound(double eta) {
    if (!(eta >= 0.0 && eta < 1.0)) throw InvalidDistortion("cond_bound: need 0 <= eta < 1");
    return (1.0 + eta) / (1.0 - eta);
}

/// ||A(x_star - x_hat)|| = sqrt(res_hat^2 - res_star^2): the residual norms
/// determine the forward error because the optimal residual is orthogonal
/// to range(A). Small negative differences from roundoff clamp to zero.
inline double forward_error_from_residuals(double res_hat, double res_star) {
    if (res_star < 0.0 || res_hat < 0.0) {
        throw InvalidResidual("forward_error_from_residuals: negative residual norm");
    }
    if (res_hat < res_star * (1.0 - 1e-12) - 1e-12) {
        throw InvalidResidual("forward_error_from_residuals: res_hat < res_star");
    }
    const double diff = res_hat * res_hat - res_star * res_star;
    return diff > 0.0 ? std::sqrt(diff) : 0.0;
}

/// Distribution summary of the row leverage scores ||U[i,:]||^2.
struct CoherenceStats {
    double min = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, max = 0.0;
    double sum = 0.0;  // equals n (trace of the range projector)
};

template <class MatT>
CoherenceStats coherence_stats(const MatT& A) {
    DenseMatrix U = orthonormal_basis(A);
    std::vector<double> scores(static_cast<std::size_t>(U.rows()), 0.0);
    for (index_t j = 0; j < U.cols(); ++j) {
        const double* uj = U.col(j);
        for (index_t i = 0; i < U.rows(); ++i) scores[static_cast<std::size_t>(i)] += uj[i] * uj[i];
    }
    CoherenceStats st;
    for (double s : scores) st.sum += s;
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    st.min = sorted.front();
    st.max = sorted.back();
    st.q25 = quantile(scores, 0.25);
    st.median = quantile(scores, 0.5);
    st.q75 = quantile(scores, 0.75);
    return st;
}

/// Histogram of the squared singular values of S U over independent
/// sketches, with the Marchenko-Pastur reference density sampled at the
/// bin centers.
struct SpectrumHistogram {
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<long> counts;       // size bins; sums to n * trials
    std::vector<double> overlay;    // MP density at bin centers
};

inline SpectrumHistogram sketched_spectrum(const SketchApplyFn& apply_sketch, const DenseMatrix& U,
                                           int trials, int bins = 50) {
    std::vector<double> all;
    all.reserve(static_cast<std::size_t>(trials) * static_cast<std::size_t>(U.cols()));
    index_t d = 0;
    for (int t = 0; t < trials; ++t) {
        DenseMatrix SU = apply_sketch(U, static_cast<std::uint64_t>(t));
        d = SU.rows();
        for (double s : singular_values(SU)) all.push_back(s * s);
    }
    const double ratio = static_cast<double>(U.cols()) / static_cast<double>(d);
    const double sr = std::sqrt(ratio);
    // Bin over the MP support padded by 25% so edge spill is visible.
    const double lo = std::max(0.0, (1.0 - sr) * (1.0 - sr) - 0.25 * sr);
    const double hi_edge = (1.0 + sr) * (1.0 + sr) + 0.25 * sr;
    const double lo_edge = std::min(lo, *std::min_element(all.begin(), all.end()));
    const double hi = std::max(hi_edge, *std::max_element(all.begin(), all.end()) + 1e-12);

    SpectrumHistogram h;
    h.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.bin_edges[static_cast<std::size_t>(i)] = lo_edge + (hi - lo_edge) * i / bins;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : all) {
        auto idx = static_cast<long>((v - lo_edge) / (hi - lo_edge) * bins);
        idx = std::clamp<long>(idx, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    h.overlay.resize(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i) {
        const double c = 0.5 * (h.bin_edges[static_cast<std::size_t>(i)] + h.bin_edges[static_cast<std::size_t>(i) + 1]);
        h.overlay[static_cast<std::size_t>(i)] = c > 0.0 ? marchenko_pastur_pdf(c, ratio) : 0.0;
    }
    return h;
}

}  // namespace sketchlsq
