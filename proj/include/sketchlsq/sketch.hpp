#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sketchlsq/csc_matrix.hpp"
#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/errors.hpp"
#include "sketchlsq/rng.hpp"
#include "sketchlsq/vector_ops.hpp"

namespace sketchlsq {

enum class SketchKind { SparseSign, Gaussian, Trig };

struct SketchParams {
    index_t d = 0;      // embedding dimension (rows of S)
    index_t zeta = 8;   // nonzeros per column (sparse sign only)
    SketchKind kind = SketchKind::SparseSign;
    std::uint64_t seed = 0;

    void validate(index_t m, index_t n) const {
        if (!(n < d && d <= m)) {
            throw InvalidDims("SketchParams: need n < d <= m, got n=" + std::to_string(n) +
                              " d=" + std::to_string(d) + " m=" + std::to_string(m));
        }
        if (kind == SketchKind::SparseSign && !(1 <= zeta && zeta <= d)) {
            throw InvalidSparsity("SketchParams: need 1 <= zeta <= d");
        }
    }
};

/// d x m sparse sign sketch: every column has exactly zeta nonzeros at
/// distinct random rows, each valued +-1/sqrt(zeta).
struct SparseSignSketch {
    CscMatrix matrix;
    index_t zeta = 0;
    std::uint64_t seed = 0;
};

/// d x m sketch with i.i.d. N(0, 1/d) entries.
struct GaussianSketch {
    DenseMatrix matrix;
    std::uint64_t seed = 0;
};

/// Subsampled fast trigonometric transform sketch S = R F D P:
/// random permutation P of the m inputs, diagonal sign flip D, orthonormal
/// fast Walsh-Hadamard transform F on the zero-padded length, and a random
/// restriction R to d of the padded coordinates.
struct TrigSketch {
    index_t d = 0;
    index_t m = 0;
    index_t padded_len = 0;                // next power of two >= m
    std::vector<double> signs;             // +-1, length padded_len
    std::vector<index_t> permutation;      // of [m]
    std::vector<index_t> selected_rows;    // d distinct indices into [padded_len]
    std::uint64_t seed = 0;
};

struct RejectionStats {
    index_t columns_resampled = 0;  // columns that needed at least one redraw
    index_t resample_rounds = 0;    // total redraw rounds across all columns
};

namespace detail {

/// One column draw for rejection sampling: zeta values from [0, d) with
/// replacement, sorted; duplicates are redrawn (only the offending entries)
/// and the column re-sorted until all entries are distinct.
inline bool rejection_sample_one(index_t d, index_t zeta, Rng& rng, index_t* out,
                                 index_t* rounds) {
    for (index_t i = 0; i < zeta; ++i) out[i] = static_cast<index_t>(rng.uniform_below(static_cast<std::uint64_t>(d)));
    std::sort(out, out + zeta);
    bool needed_resample = false;
    while (true) {
        index_t bad = 0;
        for (index_t i = 1; i < zeta; ++i) {
            if (out[i] == out[i - 1]) {
                out[i] = static_cast<index_t>(rng.uniform_below(static_cast<std::uint64_t>(d)));
                ++bad;
            }
        }
        if (bad == 0) break;
        needed_resample = true;
        if (rounds) ++(*rounds);
        std::sort(out, out + zeta);
    }
    return needed_resample;
}

}  // namespace detail

/// Row-index matrix for a sparse sign sketch by rejection sampling.
///
/// Column j of the result (entries [j*zeta, (j+1)*zeta), sorted ascending)
/// holds the zeta distinct rows of [0, d) where column j of S is nonzero.
/// Each column draws from its own RNG substream keyed by the column index,
/// so the output is identical no matter how columns are farmed out to
/// workers. Marginally each column is uniform over zeta-subsets of [d].
inline std::vector<index_t> rejection_sample_columns(index_t d, index_t m, index_t zeta,
                                                     std::uint64_t seed,
                                                     RejectionStats* stats = nullptr) {
    if (zeta > d || zeta < 1) {
        throw InvalidSparsity("rejection_sample_columns: need 1 <= zeta <= d");
    }
    std::vector<index_t> C(static_cast<std::size_t>(m) * static_cast<std::size_t>(zeta));
    for (index_t j = 0; j < m; ++j) {
        Rng rng(seed, 2 * static_cast<std::uint64_t>(j));
        index_t rounds = 0;
        bool resampled = detail::rejection_sample_one(d, zeta, rng,
                                                      C.data() + static_cast<std::size_t>(j) * zeta,
                                                      stats ? &rounds : nullptr);
        if (stats) {
            stats->columns_resampled += resampled ? 1 : 0;
            stats->resample_rounds += rounds;
        }
    }
    return C;
}

/// zeta distinct indices from [0, d), uniform without replacement, via the
/// swap variant of the Fisher-Yates shuffle: O(d) scratch once, O(zeta)
/// sampling work. Returned in selection order (not sorted).
inline std::vector<index_t> fisher_yates_sample(index_t d, index_t zeta, Rng& rng) {
    if (zeta > d || zeta < 1) {
        throw InvalidSparsity("fisher_yates_sample: need 1 <= zeta <= d");
    }
    std::vector<index_t> scratch(static_cast<std::size_t>(d));
    std::iota(scratch.begin(), scratch.end(), index_t{0});
    for (index_t i = 0; i < zeta; ++i) {
        index_t j = i + static_cast<index_t>(rng.uniform_below(static_cast<std::uint64_t>(d - i)));
        std::swap(scratch[static_cast<std::size_t>(i)], scratch[static_cast<std::size_t>(j)]);
    }
    scratch.resize(static_cast<std::size_t>(zeta));
    return scratch;
}

namespace detail {

/// Columns [col_begin, col_end) of the sparse sign sketch as a CSC block.
/// Column j draws indices from substream 2j and values from 2j+1 of the
/// sketch seed, with j the GLOBAL column index, so any partition of the
/// columns reproduces the serial sketch bit for bit.
inline CscMatrix sparse_sign_block(index_t d, index_t zeta, std::uint64_t seed,
                                   index_t col_begin, index_t col_end,
                                   RejectionStats* stats = nullptr) {
    const index_t mb = col_end - col_begin;
    CscMatrix S(d, mb);
    S.values.resize(static_cast<std::size_t>(mb) * zeta);
    S.row_indices.resize(static_cast<std::size_t>(mb) * zeta);
    const double val = 1.0 / std::sqrt(static_cast<double>(zeta));
    for (index_t j = 0; j < mb; ++j) {
        const std::uint64_t gj = static_cast<std::uint64_t>(col_begin + j);
        Rng idx_rng(seed, 2 * gj);
        Rng val_rng(seed, 2 * gj + 1);
        index_t* rows = S.row_indices.data() + static_cast<std::size_t>(j) * zeta;
        index_t rounds = 0;
        bool resampled = rejection_sample_one(d, zeta, idx_rng, rows, stats ? &rounds : nullptr);
        if (stats) {
            stats->columns_resampled += resampled ? 1 : 0;
            stats->resample_rounds += rounds;
        }
        double* vals = S.values.data() + static_cast<std::size_t>(j) * zeta;
        for (index_t i = 0; i < zeta; ++i) vals[i] = val_rng.sign() * val;
        S.col_pointers[static_cast<std::size_t>(j) + 1] = (j + 1) * zeta;
    }
    return S;
}

}  // namespace detail

/// Generates the full d x m sparse sign sketch. Deterministic per seed.
inline SparseSignSketch generate_sparse_sign(index_t d, index_t m, index_t zeta,
                                             std::uint64_t seed,
                                             RejectionStats* stats = nullptr) {
    if (zeta > d || zeta < 1) {
        throw InvalidSparsity("generate_sparse_sign: need 1 <= zeta <= d");
    }
    SparseSignSketch out;
    out.matrix = detail::sparse_sign_block(d, zeta, seed, 0, m, stats);
    out.zeta = zeta;
    out.seed = seed;
    return out;
}

inline SparseSignSketch generate_sparse_sign(const SketchParams& p, index_t m,
                                             RejectionStats* stats = nullptr) {
    return generate_sparse_sign(p.d, m, p.zeta, p.seed, stats);
}

/// Dense Gaussian sketch with N(0, 1/d) entries, column substreams.
/// Refuses to allocate more than max_entries values; dense sketches are the
/// one distribution here whose footprint grows with d.
inline GaussianSketch generate_gaussian(index_t d, index_t m, std::uint64_t seed,
                                        std::size_t max_entries = std::size_t{1} << 28) {
    if (static_cast<std::size_t>(d) * static_cast<std::size_t>(m) > max_entries) {
        throw AllocationTooLarge("generate_gaussian: " + std::to_string(d) + "x" +
                                 std::to_string(m) + " exceeds the configured cap of " +
                                 std::to_string(max_entries) + " entries");
    }
    GaussianSketch out;
    out.matrix = DenseMatrix(d, m);
    out.seed = seed;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (index_t j = 0; j < m; ++j) {
        Rng rng(seed, static_cast<std::uint64_t>(j));
        double* col = out.matrix.col(j);
        for (index_t i = 0; i < d; ++i) col[i] = rng.normal() * scale;
    }
    return out;
}

inline index_t next_pow2(index_t m) {
    index_t p = 1;
    while (p < m) p <<= 1;
    return p;
}

inline TrigSketch generate_trig(index_t d, index_t m, std::uint64_t seed) {
    if (d > next_pow2(m)) throw InvalidDims("generate_trig: d exceeds padded length");
    TrigSketch t;
    t.d = d;
    t.m = m;
    t.padded_len = next_pow2(m);
    t.seed = seed;

    Rng sign_rng(seed, 0);
    t.signs.resize(static_cast<std::size_t>(t.padded_len));
    for (auto& s : t.signs) s = sign_rng.sign();

    Rng perm_rng(seed, 1);
    t.permutation = fisher_yates_sample(m, m, perm_rng);  // full shuffle

    Rng rows_rng(seed, 2);
    t.selected_rows = fisher_yates_sample(t.padded_len, d, rows_rng);
    return t;
}

namespace detail {

/// In-place orthonormal fast Walsh-Hadamard transform; len a power of two.
inline void fwht(double* x, index_t len) {
    for (index_t h = 1; h < len; h <<= 1) {
        for (index_t i = 0; i < len; i += h << 1) {
            for (index_t k = i; k < i + h; ++k) {
                const double a = x[k];
                const double b = x[k + h];
                x[k] = a + b;
                x[k + h] = a - b;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(len));
    for (index_t k = 0; k < len; ++k) x[k] *= scale;
}

}  // namespace detail

/// Applies the trig sketch to each column of A in O(m log m) per column.
/// The sqrt(padded_len/d) factor makes the restriction unbiased:
/// E||S x||^2 = ||x||^2 for any fixed x.
inline DenseMatrix apply_trig(const TrigSketch& t, const DenseMatrix& A) {
    if (A.rows() != t.m) throw DimensionMismatch("apply_trig: row count mismatch");
    DenseMatrix Y(t.d, A.cols());
    std::vector<double> buf(static_cast<std::size_t>(t.padded_len));
    const double scale = std::sqrt(static_cast<double>(t.padded_len) / static_cast<double>(t.d));
    for (index_t j = 0; j < A.cols(); ++j) {
        const double* aj = A.col(j);
        std::fill(buf.begin(), buf.end(), 0.0);
        for (index_t i = 0; i < t.m; ++i)
            buf[static_cast<std::size_t>(i)] = aj[t.permutation[static_cast<std::size_t>(i)]];
        for (index_t i = 0; i < t.padded_len; ++i) buf[static_cast<std::size_t>(i)] *= t.signs[static_cast<std::size_t>(i)];
        detail::fwht(buf.data(), t.padded_len);
        double* yj = Y.col(j);
        for (index_t i = 0; i < t.d; ++i)
            yj[i] = scale * buf[static_cast<std::size_t>(t.selected_rows[static_cast<std::size_t>(i)])];
    }
    return Y;
}

inline Vector apply_trig(const TrigSketch& t, const Vector& x) {
    DenseMatrix X(t.m, 1);
    std::copy(x.begin(), x.end(), X.col(0));
    DenseMatrix Y = apply_trig(t, X);
    return Vector(Y.col(0), Y.col(0) + t.d);
}

// ---------------------------------------------------------------------------
// Uniform apply interface: sketch * matrix and sketch * vector.
// ---------------------------------------------------------------------------

inline DenseMatrix apply(const SparseSignSketch& s, const DenseMatrix& A) { return spmm(s.matrix, A); }
inline DenseMatrix apply(const SparseSignSketch& s, const CscMatrix& A) { return spmm(s.matrix, A); }
inline DenseMatrix apply(const GaussianSketch& s, const DenseMatrix& A) { return matmul(s.matrix, A); }
inline DenseMatrix apply(const GaussianSketch& s, const CscMatrix& A) { return matmul(s.matrix, densify(A)); }
inline DenseMatrix apply(const TrigSketch& s, const DenseMatrix& A) { return apply_trig(s, A); }
inline DenseMatrix apply(const TrigSketch& s, const CscMatrix& A) { return apply_trig(s, densify(A)); }

inline Vector sketch_vector(const SparseSignSketch& s, const Vector& b) { return matvec(s.matrix, b); }
inline Vector sketch_vector(const GaussianSketch& s, const Vector& b) { return matvec(s.matrix, b); }
inline Vector sketch_vector(const TrigSketch& s, const Vector& b) { return apply_trig(s, b); }

}  // namespace sketchlsq
