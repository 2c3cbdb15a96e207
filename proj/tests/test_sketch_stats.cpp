// Statistical contracts of the samplers: marginal distributions, the
// rejection-rate bound, isometry in expectation, and the cost scaling in
// the sparsity parameter. Seeds are fixed, so every check is deterministic.
#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <map>

#include "helpers.hpp"
#include "sketchlsq/sketch.hpp"

using namespace sketchlsq;

namespace {

long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Colexicographic rank of a sorted k-subset; bijection onto [0, C(d,k)).
long subset_rank(const std::vector<index_t>& s) {
    long r = 0;
    for (std::size_t i = 0; i < s.size(); ++i) r += binom(static_cast<int>(s[i]), static_cast<int>(i) + 1);
    return r;
}

double time_generation(index_t d, index_t m, index_t zeta, std::uint64_t seed) {
    double best = 1e300;
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = std::chrono::steady_clock::now();
        SparseSignSketch s = generate_sparse_sign(d, m, zeta, seed + rep);
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
        if (s.matrix.nnz() != m * zeta) return -1.0;  // defeat dead-code elimination
    }
    return best;
}

}  // namespace

TEST_CASE("rejection resample rate obeys the 1 - (1 - zeta^2/d) bound") {
    const index_t d = 1000, zeta = 8, m = 100000;
    RejectionStats stats;
    auto C = rejection_sample_columns(d, m, zeta, /*seed=*/20250809, &stats);
    REQUIRE(static_cast<index_t>(C.size()) == m * zeta);

    const double p_bound = static_cast<double>(zeta * zeta) / static_cast<double>(d);  // 0.064
    const double sigma = std::sqrt(p_bound * (1.0 - p_bound) / static_cast<double>(m));
    const double rate = static_cast<double>(stats.columns_resampled) / static_cast<double>(m);
    CHECK(rate <= p_bound + 3.0 * sigma);
}

TEST_CASE("rejection sampling at d=2 zeta=1 picks both rows evenly") {
    const index_t m = 100000;
    auto C = rejection_sample_columns(2, m, 1, /*seed=*/77);
    long count0 = 0;
    for (index_t j = 0; j < m; ++j) count0 += (C[static_cast<std::size_t>(j)] == 0) ? 1 : 0;
    const double freq = static_cast<double>(count0) / static_cast<double>(m);
    const double sigma = std::sqrt(0.25 / static_cast<double>(m));
    CHECK(std::abs(freq - 0.5) <= 3.0 * sigma);
}

TEST_CASE("fisher_yates unordered pairs at d=3 zeta=2 are uniform") {
    Rng rng(4242);
    const int draws = 100000;
    std::map<std::pair<index_t, index_t>, long> counts;
    for (int t = 0; t < draws; ++t) {
        auto s = fisher_yates_sample(3, 2, rng);
        std::sort(s.begin(), s.end());
        ++counts[{s[0], s[1]}];
    }
    REQUIRE(counts.size() == 3);
    const double p = 1.0 / 3.0;
    const double sigma = std::sqrt(p * (1.0 - p) / draws);
    for (const auto& [pair, c] : counts) {
        const double freq = static_cast<double>(c) / draws;
        CHECK(std::abs(freq - p) <= 3.0 * sigma);
    }
}

TEST_CASE("rejection sampling matches Fisher-Yates over all subsets") {
    // Two-sample chi-square across every zeta-subset of [d], 1e6 draws per
    // sampler, significance 1e-3.
    const long n_samples = 1000000;
    struct Cfg {
        index_t d, zeta;
    };
    for (Cfg cfg : {Cfg{6, 2}, Cfg{6, 3}, Cfg{8, 4}}) {
        const long K = binom(static_cast<int>(cfg.d), static_cast<int>(cfg.zeta));
        std::vector<long> rej_counts(static_cast<std::size_t>(K), 0);
        std::vector<long> fy_counts(static_cast<std::size_t>(K), 0);

        auto C = rejection_sample_columns(cfg.d, n_samples, cfg.zeta,
                                          /*seed=*/1000 + static_cast<std::uint64_t>(cfg.d * 10 + cfg.zeta));
        std::vector<index_t> subset(static_cast<std::size_t>(cfg.zeta));
        for (long j = 0; j < n_samples; ++j) {
            std::copy(C.begin() + j * cfg.zeta, C.begin() + (j + 1) * cfg.zeta, subset.begin());
            ++rej_counts[static_cast<std::size_t>(subset_rank(subset))];
        }

        Rng rng(2000 + static_cast<std::uint64_t>(cfg.d * 10 + cfg.zeta));
        for (long j = 0; j < n_samples; ++j) {
            auto s = fisher_yates_sample(cfg.d, cfg.zeta, rng);
            std::sort(s.begin(), s.end());
            ++fy_counts[static_cast<std::size_t>(subset_rank(s))];
        }

        double chi2 = 0.0;
        for (long k = 0; k < K; ++k) {
            const double o1 = static_cast<double>(rej_counts[static_cast<std::size_t>(k)]);
            const double o2 = static_cast<double>(fy_counts[static_cast<std::size_t>(k)]);
            if (o1 + o2 > 0.0) chi2 += (o1 - o2) * (o1 - o2) / (o1 + o2);
        }
        const double crit = oracle::chi2_critical(static_cast<double>(K - 1));
        INFO("d=" << cfg.d << " zeta=" << cfg.zeta << " chi2=" << chi2 << " crit=" << crit);
        CHECK(chi2 < crit);
    }
}

TEST_CASE("sparse sign sketch is an isometry in expectation") {
    const index_t m = 400, d = 64, zeta = 8;
    Rng xr(31);
    Vector x = oracle::rand_vector(m, xr);
    scal(1.0 / norm2(x), x);

    const int trials = 1000;
    std::vector<double> sq(trials);
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        SparseSignSketch S = generate_sparse_sign(d, m, zeta, 5000 + static_cast<std::uint64_t>(t));
        const double nrm = norm2(sketch_vector(S, x));
        sq[static_cast<std::size_t>(t)] = nrm * nrm;
        mean += sq[static_cast<std::size_t>(t)];
    }
    mean /= trials;
    double var = 0.0;
    for (double v : sq) var += (v - mean) * (v - mean);
    var /= (trials - 1);
    const double se = std::sqrt(var / trials);
    CHECK(std::abs(mean - 1.0) <= 5.0 * se);
}

TEST_CASE("gaussian sketch norm moments") {
    const index_t d = 100, m = 200;
    Vector e1(static_cast<std::size_t>(m), 0.0);
    e1[0] = 1.0;
    const int trials = 1000;
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        GaussianSketch S = generate_gaussian(d, m, 9000 + static_cast<std::uint64_t>(t));
        const double nrm = norm2(sketch_vector(S, e1));
        mean += nrm * nrm;
    }
    mean /= trials;
    // ||S e1||^2 ~ chi^2_d / d: variance 2/d per sketch.
    const double sigma = std::sqrt(2.0 / static_cast<double>(d) / trials);
    CHECK(std::abs(mean - 1.0) <= 3.0 * sigma);
}

TEST_CASE("gaussian sketch entry moments at dm >= 1e5") {
    const index_t d = 100, m = 1000;
    GaussianSketch S = generate_gaussian(d, m, 31337);
    const double N = static_cast<double>(d) * static_cast<double>(m);
    double mean = 0.0;
    for (double v : S.matrix.data()) mean += v;
    mean /= N;
    double var = 0.0;
    for (double v : S.matrix.data()) var += (v - mean) * (v - mean);
    var /= (N - 1.0);

    const double entry_sd = 1.0 / std::sqrt(static_cast<double>(d));
    const double mean_se = entry_sd / std::sqrt(N);
    CHECK(std::abs(mean) <= 5.0 * mean_se);
    const double var_se = std::sqrt(2.0 / N) * entry_sd * entry_sd;
    CHECK(std::abs(var - entry_sd * entry_sd) <= 5.0 * var_se);
}

TEST_CASE("trig sketch Monte-Carlo isometry") {
    Rng rng(61);
    DenseMatrix A = oracle::rand_dense(64, 4, rng);
    const double ref = frobenius_norm(A);
    const int trials = 200;
    double mean = 0.0;
    for (int t = 0; t < trials; ++t) {
        TrigSketch T = generate_trig(32, 64, 100 + static_cast<std::uint64_t>(t));
        const double fn = frobenius_norm(apply_trig(T, A));
        mean += (fn * fn) / (ref * ref);
    }
    mean /= trials;
    CHECK(std::abs(mean - 1.0) <= 0.05);
}

TEST_CASE("generation cost scales with zeta not d") {
    // d large enough that both sparsities stay in the cheap-rejection regime
    // (zeta^2/d well below one), which is where the proportionality claim
    // lives.
    const index_t d = 20000, m = 300000;
    const double t8 = time_generation(d, m, 8, 1);
    const double t24 = time_generation(d, m, 24, 2);
    REQUIRE(t8 > 0.0);
    REQUIRE(t24 > 0.0);
    const double ratio = t24 / t8;
    INFO("t8=" << t8 << " t24=" << t24 << " ratio=" << ratio);
    CHECK(ratio >= 2.0);
    CHECK(ratio <= 4.5);
}
