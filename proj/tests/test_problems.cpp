#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "helpers.hpp"
#include "sketchlsq/metrics.hpp"
#include "sketchlsq/problems.hpp"

using namespace sketchlsq;

TEST_CASE("gen_dense hits the requested spectrum") {
    const index_t m = 500, n = 12;
    DenseMatrix A = gen_dense(m, n, 1000.0, 3);
    auto sv = singular_values(A);
    CHECK(sv.front() == Catch::Approx(1.0).epsilon(1e-6));
    CHECK(sv.back() == Catch::Approx(1e-3).epsilon(1e-4));
    CHECK(sv.front() / sv.back() == Catch::Approx(1000.0).epsilon(0.01));

    // The requested log-spaced spectrum is reproduced nearly exactly.
    for (index_t j = 0; j < n; ++j) {
        const double expect = std::pow(10.0, -3.0 * static_cast<double>(j) / (n - 1));
        CHECK(sv[static_cast<std::size_t>(j)] == Catch::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("gen_dense degenerate cases") {
    DenseMatrix A1 = gen_dense(300, 8, 1.0, 5);
    auto sv = singular_values(A1);
    for (double s : sv) CHECK(s == Catch::Approx(1.0).epsilon(1e-10));

    DenseMatrix A2 = gen_dense(100, 1, 1.0, 6);
    CHECK(A2.cols() == 1);
    CHECK(norm2(Vector(A2.col(0), A2.col(0) + 100)) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("gen_sparse_sign_matrix density and values") {
    const index_t m = 2000, n = 500;
    const double density = 0.01;
    CscMatrix A = gen_sparse_sign_matrix(m, n, density, 11);
    A.validate();
    for (double v : A.values) CHECK(std::abs(v) == 1.0);

    const double N = static_cast<double>(m) * static_cast<double>(n);
    const double rate = static_cast<double>(A.nnz()) / N;
    const double sigma = std::sqrt(density * (1.0 - density) / N);
    CHECK(std::abs(rate - density) <= 3.0 * sigma);

    CHECK(gen_sparse_sign_matrix(50, 10, 0.0, 1).nnz() == 0);
    CscMatrix full = gen_sparse_sign_matrix(20, 5, 1.0, 2);
    CHECK(full.nnz() == 100);
}

TEST_CASE("gen_identity_columns structure") {
    CscMatrix A = gen_identity_columns(30, 7);
    A.validate();
    CHECK(A.nnz() == 7);
    DenseMatrix G = detail::gram(A);
    for (index_t i = 0; i < 7; ++i)
        for (index_t j = 0; j < 7; ++j) CHECK(G(i, j) == (i == j ? 1.0 : 0.0));

    CoherenceStats st = coherence_stats(A);
    CHECK(st.max == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(st.sum == Catch::Approx(7.0).epsilon(1e-8));
}

TEST_CASE("gen_rhs satisfies its norm and orthogonality contract") {
    for (int trial = 0; trial < 20; ++trial) {
        const auto seed = static_cast<std::uint64_t>(100 + trial);
        const index_t m = 400, n = 15;
        DenseMatrix A = gen_dense(m, n, 100.0, seed);
        const double rho = (trial % 2 == 0) ? 0.5 : 0.25;
        RhsResult r = gen_rhs(A, rho, seed + 1);

        CHECK(norm2(r.b) == Catch::Approx(1.0).margin(1e-12));
        Vector resid = r.b;
        axpy(-1.0, matvec(A, r.x_star), resid);
        CHECK(norm2(resid) == Catch::Approx(rho).margin(1e-10));

        // Residual orthogonal to range(A).
        auto sv = singular_values(A);
        CHECK(norm2(rmatvec(A, resid)) <= 1e-10 * sv.front() * norm2(r.b));

        // The optimality condition ||A^T (b - A x_star)|| <= 1e-8 ||A|| ||b||.
        CHECK(norm2(rmatvec(A, resid)) <= 1e-8 * sv.front() * norm2(r.b));
    }
}

TEST_CASE("gen_rhs consistent case and error path") {
    DenseMatrix A = gen_dense(200, 10, 10.0, 7);
    RhsResult r = gen_rhs(A, 0.0, 8);
    Vector resid = r.b;
    axpy(-1.0, matvec(A, r.x_star), resid);
    CHECK(norm2(resid) <= 1e-13);
    CHECK(norm2(r.b) == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(gen_rhs(A, 1.0, 9), InvalidResidual);
    CHECK_THROWS_AS(gen_rhs(A, -0.1, 9), InvalidResidual);
}

TEST_CASE("gen_rhs works for sparse matrices too") {
    CscMatrix A = gen_sparse_sign_matrix(600, 20, 0.05, 21);
    RhsResult r = gen_rhs(A, 0.5, 22);
    CHECK(norm2(r.b) == Catch::Approx(1.0).margin(1e-12));
    Vector resid = r.b;
    axpy(-1.0, matvec(A, r.x_star), resid);
    CHECK(norm2(resid) == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("build_krylov_basis columns") {
    CscMatrix B(2, 2);
    B.values = {1.0, 2.0};
    B.row_indices = {0, 1};
    B.col_pointers = {0, 1, 2};  // diag(1, 2)
    Vector v{1.0, 1.0};
    DenseMatrix K = build_krylov_basis(B, v, 2);

    const double s2 = 1.0 / std::sqrt(2.0);
    CHECK(K(0, 0) == Catch::Approx(s2).epsilon(1e-14));
    CHECK(K(1, 0) == Catch::Approx(s2).epsilon(1e-14));
    // second column proportional to (1, 2)/sqrt(5)
    CHECK(K(0, 1) == Catch::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));
    CHECK(K(1, 1) == Catch::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-13));

    for (index_t j = 0; j < 2; ++j) {
        Vector col(K.col(j), K.col(j) + 2);
        CHECK(norm2(col) == Catch::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("build_krylov_basis flags vanishing columns") {
    CscMatrix Z(3, 3);  // zero matrix
    Vector v{1.0, 0.0, 0.0};
    CHECK_THROWS_AS(build_krylov_basis(Z, v, 3), BreakdownIfZero);
}

TEST_CASE("krylov basis from identity is rank deficient downstream") {
    CscMatrix I = CscMatrix::identity(4);
    Vector v{1.0, 2.0, 3.0, 4.0};
    DenseMatrix K = build_krylov_basis(I, v, 3);  // all columns parallel
    CHECK_THROWS_AS(orthonormal_basis(K), RankDeficient);
}

TEST_CASE("krylov gram condition grows with n") {
    CscMatrix B = gen_sparse_sign_matrix(80, 80, 0.1, 31);
    Rng rng(33);
    Vector v = oracle::rand_vector(80, rng);
    DenseMatrix K3 = build_krylov_basis(B, v, 3);
    DenseMatrix K8 = build_krylov_basis(B, v, 8);
    auto sv3 = singular_values(K3);
    auto sv8 = singular_values(K8);
    CHECK(sv8.front() / sv8.back() >= sv3.front() / sv3.back());
}

TEST_CASE("load_matrix_market round trips through the problems facade") {
    auto dir = std::filesystem::temp_directory_path() / "sketchlsq_problems";
    std::filesystem::create_directories(dir);
    CscMatrix A = gen_sparse_sign_matrix(40, 8, 0.2, 41);
    const std::string path = (dir / "a.mtx").string();
    mm::write_csc(path, A);
    AnyMatrix loaded = load_matrix_market(path);
    REQUIRE(std::holds_alternative<CscMatrix>(loaded));
    CHECK(std::get<CscMatrix>(loaded).values == A.values);
    CHECK(matrix_rows(loaded) == 40);
    CHECK(matrix_cols(loaded) == 8);
}
