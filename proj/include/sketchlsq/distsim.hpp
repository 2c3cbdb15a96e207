#pragma once

#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "sketchlsq/csc_matrix.hpp"
#include "sketchlsq/dense_matrix.hpp"
#include "sketchlsq/sketch.hpp"
#include "sketchlsq/vector_ops.hpp"

namespace sketchlsq {

/// Row partition of [0, m) into p contiguous blocks: block k covers
/// [k*stride, (k+1)*stride) with stride = m / p, and the last block takes
/// the remainder.
struct RowPartition {
    index_t m = 0;
    std::vector<index_t> boundaries;  // p + 1 nondecreasing indices

    int blocks() const { return static_cast<int>(boundaries.size()) - 1; }
    index_t begin(int k) const { return boundaries[static_cast<std::size_t>(k)]; }
    index_t end(int k) const { return boundaries[static_cast<std::size_t>(k) + 1]; }
    index_t size(int k) const { return end(k) - begin(k); }
};

inline RowPartition partition_rows(index_t m, int p) {
    if (p < 1 || static_cast<index_t>(p) > m) {
        throw InvalidDims("partition_rows: need 1 <= p <= m");
    }
    RowPartition part;
    part.m = m;
    part.boundaries.resize(static_cast<std::size_t>(p) + 1);
    const index_t stride = m / p;
    for (int k = 0; k < p; ++k) part.boundaries[static_cast<std::size_t>(k)] = stride * k;
    part.boundaries[static_cast<std::size_t>(p)] = m;
    return part;
}

/// Synchronization tally: one reduction per blocking cross-worker combine,
/// one broadcast per replicated short vector shipped to all workers. The
/// pause guard lets instrumentation (error tracking) run without inflating
/// the counts the experiments measure.
class SyncCounter {
public:
    long reductions() const { return reductions_; }
    long broadcasts() const { return broadcasts_; }

    void count_reduction() { if (!paused_) ++reductions_; }
    void count_broadcast() { if (!paused_) ++broadcasts_; }

    class PauseGuard {
    public:
        explicit PauseGuard(SyncCounter& c) : c_(c) { c_.paused_ = true; }
        ~PauseGuard() { c_.paused_ = false; }
        PauseGuard(const PauseGuard&) = delete;
        PauseGuard& operator=(const PauseGuard&) = delete;

    private:
        SyncCounter& c_;
    };

private:
    long reductions_ = 0;
    long broadcasts_ = 0;
    bool paused_ = false;
};

/// Fixed pool of OS threads standing in for the paper's device set. Each
/// worker owns the chunks living at its rank; cross-chunk data only ever
/// moves through the reduce/broadcast entry points below, which is what
/// makes the synchronization counts meaningful.
class WorkerPool {
public:
    explicit WorkerPool(int p) : size_(p) {
        if (p < 1) throw InvalidDims("WorkerPool: need at least one worker");
        workers_.reserve(static_cast<std::size_t>(p));
        for (int rank = 0; rank < p; ++rank) {
            workers_.emplace_back([this, rank] { worker_loop(rank); });
        }
    }

    ~WorkerPool() {
        {
            std::unique_lock<std::mutex> lk(mu_);
            stop_ = true;
            ++generation_;
        }
        cv_task_.notify_all();
        for (auto& t : workers_) t.join();
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const { return size_; }
    SyncCounter& counter() { return counter_; }
    const SyncCounter& counter() const { return counter_; }

    /// Runs task(rank) on every worker and blocks until all complete.
    void run(const std::function<void(int)>& task) {
        std::unique_lock<std::mutex> lk(mu_);
        task_ = &task;
        pending_ = size_;
        ++generation_;
        cv_task_.notify_all();
        cv_done_.wait(lk, [this] { return pending_ == 0; });
        task_ = nullptr;
    }

private:
    void worker_loop(int rank) {
        long seen = 0;
        while (true) {
            const std::function<void(int)>* task = nullptr;
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_task_.wait(lk, [&] { return generation_ != seen; });
                seen = generation_;
                if (stop_) return;
                task = task_;
            }
            (*task)(rank);
            {
                std::unique_lock<std::mutex> lk(mu_);
                if (--pending_ == 0) cv_done_.notify_one();
            }
        }
    }

    int size_;
    std::vector<std::thread> workers_;
    SyncCounter counter_;

    std::mutex mu_;
    std::condition_variable cv_task_;
    std::condition_variable cv_done_;
    const std::function<void(int)>* task_ = nullptr;
    int pending_ = 0;
    long generation_ = 0;
    bool stop_ = false;
};

namespace detail {

/// Reduces per-worker payloads in a fixed pairwise tree: partial i absorbs
/// partial i + stride for stride = 1, 2, 4, ... The order depends only on
/// p, so results are reproducible for a fixed worker count.
template <class T, class Combine>
T& tree_reduce(std::vector<T>& partials, Combine&& combine) {
    const auto p = partials.size();
    for (std::size_t stride = 1; stride < p; stride <<= 1) {
        for (std::size_t i = 0; i + stride < p; i += 2 * stride) {
            combine(partials[i], partials[i + stride]);
        }
    }
    return partials[0];
}

}  // namespace detail

/// Row-block-distributed vector bound to a worker pool.
struct DistributedVector {
    RowPartition partition;
    std::vector<Vector> chunks;
    WorkerPool* pool = nullptr;
};

/// Row-block-distributed matrix (dense or CSC chunks).
template <class MatT>
struct DistributedMatrix {
    RowPartition partition;
    std::vector<MatT> chunks;
    index_t cols = 0;
    WorkerPool* pool = nullptr;

    index_t rows() const { return partition.m; }
};

inline DistributedVector distribute(const Vector& v, WorkerPool& pool) {
    DistributedVector dv;
    dv.partition = partition_rows(static_cast<index_t>(v.size()), pool.size());
    dv.chunks.resize(static_cast<std::size_t>(pool.size()));
    dv.pool = &pool;
    pool.run([&](int k) {
        dv.chunks[static_cast<std::size_t>(k)].assign(v.begin() + dv.partition.begin(k),
                                                      v.begin() + dv.partition.end(k));
    });
    return dv;
}

/// An all-zero distributed vector with the given partition.
inline DistributedVector dist_zeros(const RowPartition& part, WorkerPool& pool) {
    DistributedVector dv;
    dv.partition = part;
    dv.chunks.resize(static_cast<std::size_t>(pool.size()));
    dv.pool = &pool;
    pool.run([&](int k) {
        dv.chunks[static_cast<std::size_t>(k)].assign(static_cast<std::size_t>(part.size(k)), 0.0);
    });
    return dv;
}

inline Vector gather(const DistributedVector& dv) {
    Vector out;
    out.reserve(static_cast<std::size_t>(dv.partition.m));
    for (const auto& c : dv.chunks) out.insert(out.end(), c.begin(), c.end());
    return out;
}

inline DistributedMatrix<DenseMatrix> distribute(const DenseMatrix& A, WorkerPool& pool) {
    DistributedMatrix<DenseMatrix> dm;
    dm.partition = partition_rows(A.rows(), pool.size());
    dm.chunks.resize(static_cast<std::size_t>(pool.size()));
    dm.cols = A.cols();
    dm.pool = &pool;
    pool.run([&](int k) {
        const index_t r0 = dm.partition.begin(k);
        const index_t rows = dm.partition.size(k);
        DenseMatrix blk(rows, A.cols());
        for (index_t j = 0; j < A.cols(); ++j) {
            const double* aj = A.col(j);
            double* bj = blk.col(j);
            for (index_t i = 0; i < rows; ++i) bj[i] = aj[r0 + i];
        }
        dm.chunks[static_cast<std::size_t>(k)] = std::move(blk);
    });
    return dm;
}

inline DistributedMatrix<CscMatrix> distribute(const CscMatrix& A, WorkerPool& pool) {
    DistributedMatrix<CscMatrix> dm;
    dm.partition = partition_rows(A.rows, pool.size());
    dm.chunks.resize(static_cast<std::size_t>(pool.size()));
    dm.cols = A.cols;
    dm.pool = &pool;
    pool.run([&](int k) {
        dm.chunks[static_cast<std::size_t>(k)] =
            csc_row_block(A, dm.partition.begin(k), dm.partition.end(k));
    });
    return dm;
}

// ---------------------------------------------------------------------------
// Counted operations. Chunk-local work never touches the counter; every
// cross-worker combine is exactly one reduction, every replicated short
// vector exactly one broadcast.
// ---------------------------------------------------------------------------

/// y += alpha z, chunk-local, no communication.
inline void dist_axpy(DistributedVector& y, double alpha, const DistributedVector& z) {
    if (y.partition.m != z.partition.m) throw DimensionMismatch("dist_axpy: length mismatch");
    y.pool->run([&](int k) {
        axpy(alpha, z.chunks[static_cast<std::size_t>(k)], y.chunks[static_cast<std::size_t>(k)]);
    });
}

/// y *= alpha, chunk-local.
inline void dist_scal(DistributedVector& y, double alpha) {
    y.pool->run([&](int k) { scal(alpha, y.chunks[static_cast<std::size_t>(k)]); });
}

/// ||y||: local sums of squares combined in one reduction.
inline double dist_norm(const DistributedVector& y) {
    const int p = y.pool->size();
    std::vector<double> partials(static_cast<std::size_t>(p), 0.0);
    y.pool->run([&](int k) {
        double s = 0.0;
        for (double v : y.chunks[static_cast<std::size_t>(k)]) s += v * v;
        partials[static_cast<std::size_t>(k)] = s;
    });
    y.pool->counter().count_reduction();
    double total = detail::tree_reduce(partials, [](double& a, const double& b) { a += b; });
    return std::sqrt(total);
}

/// A x for replicated x: one broadcast of x, then local block products.
template <class MatT>
DistributedVector dist_matvec(const DistributedMatrix<MatT>& A, const Vector& x) {
    A.pool->counter().count_broadcast();
    DistributedVector y;
    y.partition = A.partition;
    y.chunks.resize(A.chunks.size());
    y.pool = A.pool;
    A.pool->run([&](int k) {
        y.chunks[static_cast<std::size_t>(k)] = matvec(A.chunks[static_cast<std::size_t>(k)], x);
    });
    return y;
}

/// A^T y: local block transpose-products, one reduction of n-vectors.
template <class MatT>
Vector dist_rmatvec(const DistributedMatrix<MatT>& A, const DistributedVector& y) {
    const int p = A.pool->size();
    std::vector<Vector> partials(static_cast<std::size_t>(p));
    A.pool->run([&](int k) {
        partials[static_cast<std::size_t>(k)] =
            rmatvec(A.chunks[static_cast<std::size_t>(k)], y.chunks[static_cast<std::size_t>(k)]);
    });
    A.pool->counter().count_reduction();
    return detail::tree_reduce(partials, [](Vector& a, const Vector& b) { axpy(1.0, b, a); });
}

/// Fused A^T y and ||y||, sharing a single reduction: each worker
/// contributes its n-vector partial and its local sum of squares, and both
/// are combined in the same synchronization.
template <class MatT>
std::pair<Vector, double> dist_rmatvec_and_norm(const DistributedMatrix<MatT>& A,
                                                const DistributedVector& y) {
    const int p = A.pool->size();
    struct Payload {
        Vector vec;
        double ssq = 0.0;
    };
    std::vector<Payload> partials(static_cast<std::size_t>(p));
    A.pool->run([&](int k) {
        auto& pl = partials[static_cast<std::size_t>(k)];
        pl.vec = rmatvec(A.chunks[static_cast<std::size_t>(k)], y.chunks[static_cast<std::size_t>(k)]);
        for (double v : y.chunks[static_cast<std::size_t>(k)]) pl.ssq += v * v;
    });
    A.pool->counter().count_reduction();
    Payload& total = detail::tree_reduce(partials, [](Payload& a, const Payload& b) {
        axpy(1.0, b.vec, a.vec);
        a.ssq += b.ssq;
    });
    return {std::move(total.vec), std::sqrt(total.ssq)};
}

/// Sparse sign sketch held as per-worker column blocks. Worker k generates
/// only the columns matching its row block I_k, from substreams keyed by
/// global column index, so the assembled sketch is bit-identical to the
/// serial one for any worker count.
struct DistSparseSketch {
    RowPartition partition;  // over the m columns of S = rows of A
    std::vector<CscMatrix> blocks;
    index_t d = 0;
    index_t zeta = 0;
    std::uint64_t seed = 0;
    WorkerPool* pool = nullptr;
};

inline DistSparseSketch dist_generate_sparse_sign(index_t d, index_t zeta, std::uint64_t seed,
                                                  const RowPartition& part, WorkerPool& pool) {
    if (zeta > d || zeta < 1) throw InvalidSparsity("dist_generate_sparse_sign: need 1 <= zeta <= d");
    DistSparseSketch s;
    s.partition = part;
    s.blocks.resize(static_cast<std::size_t>(pool.size()));
    s.d = d;
    s.zeta = zeta;
    s.seed = seed;
    s.pool = &pool;
    pool.run([&](int k) {
        s.blocks[static_cast<std::size_t>(k)] =
            detail::sparse_sign_block(d, zeta, seed, part.begin(k), part.end(k));
    });
    return s;
}

/// Concatenates the column blocks back into one CSC matrix.
inline CscMatrix assemble(const DistSparseSketch& s) {
    CscMatrix S(s.d, s.partition.m);
    index_t col = 0;
    index_t nnz = 0;
    for (const auto& blk : s.blocks) {
        S.values.insert(S.values.end(), blk.values.begin(), blk.values.end());
        S.row_indices.insert(S.row_indices.end(), blk.row_indices.begin(), blk.row_indices.end());
        for (index_t j = 0; j < blk.cols; ++j) {
            nnz += blk.col_pointers[static_cast<std::size_t>(j) + 1] -
                   blk.col_pointers[static_cast<std::size_t>(j)];
            S.col_pointers[static_cast<std::size_t>(++col)] = nnz;
        }
    }
    return S;
}

/// S A = sum_k S[:, I_k] A[I_k, :]: local block products, one reduction of
/// the d x n partial results.
template <class MatT>
DenseMatrix dist_sketch_apply(const DistSparseSketch& S, const DistributedMatrix<MatT>& A) {
    if (S.partition.m != A.partition.m) throw DimensionMismatch("dist_sketch_apply: partitions differ");
    const int p = S.pool->size();
    std::vector<DenseMatrix> partials(static_cast<std::size_t>(p));
    S.pool->run([&](int k) {
        partials[static_cast<std::size_t>(k)] =
            spmm(S.blocks[static_cast<std::size_t>(k)], A.chunks[static_cast<std::size_t>(k)]);
    });
    S.pool->counter().count_reduction();
    DenseMatrix& total = detail::tree_reduce(partials, [](DenseMatrix& a, const DenseMatrix& b) {
        for (std::size_t i = 0; i < a.data().size(); ++i) a.data()[i] += b.data()[i];
    });
    return std::move(total);
}

/// S b for a distributed b: same partial-sum pattern, one reduction.
inline Vector dist_sketch_apply(const DistSparseSketch& S, const DistributedVector& b) {
    if (S.partition.m != b.partition.m) throw DimensionMismatch("dist_sketch_apply: partitions differ");
    const int p = S.pool->size();
    std::vector<Vector> partials(static_cast<std::size_t>(p));
    S.pool->run([&](int k) {
        partials[static_cast<std::size_t>(k)] =
            matvec(S.blocks[static_cast<std::size_t>(k)], b.chunks[static_cast<std::size_t>(k)]);
    });
    S.pool->counter().count_reduction();
    return detail::tree_reduce(partials, [](Vector& a, const Vector& b2) { axpy(1.0, b2, a); });
}

/// Execution backend over a distributed matrix; mirrors SerialOperator.
template <class MatT>
struct DistOperator {
    DistributedMatrix<MatT>& A;

    using VecM = DistributedVector;

    index_t rows() const { return A.partition.m; }
    index_t cols() const { return A.cols; }

    VecM matvec(const Vector& x) const { return dist_matvec(A, x); }
    Vector rmatvec(const VecM& y) const { return dist_rmatvec(A, y); }
    std::pair<Vector, double> rmatvec_and_norm(const VecM& y) const {
        return dist_rmatvec_and_norm(A, y);
    }
    double norm(const VecM& y) const { return dist_norm(y); }
    void axpy(double a, const VecM& x, VecM& y) const { dist_axpy(y, a, x); }
    void scal(double a, VecM& y) const { dist_scal(y, a); }

    double error_norm(const Vector& xdiff) const {
        SyncCounter::PauseGuard pause(A.pool->counter());
        return dist_norm(dist_matvec(A, xdiff));
    }
    double residual_norm(const VecM& b, const Vector& x) const {
        SyncCounter::PauseGuard pause(A.pool->counter());
        VecM r = b;
        r.pool = A.pool;
        VecM ax = dist_matvec(A, x);
        dist_axpy(r, -1.0, ax);
        return dist_norm(r);
    }
    double norm_uncounted(const VecM& y) const {
        SyncCounter::PauseGuard pause(A.pool->counter());
        return dist_norm(y);
    }

    std::pair<long, long> sync_snapshot() const {
        return {A.pool->counter().reductions(), A.pool->counter().broadcasts()};
    }
};

template <class MatT>
DistOperator<MatT> dist_operator(DistributedMatrix<MatT>& A) {
    return DistOperator<MatT>{A};
}

}  // namespace sketchlsq
