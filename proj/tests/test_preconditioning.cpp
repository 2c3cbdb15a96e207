#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "sketchlsq/metrics.hpp"
#include "sketchlsq/preconditioner.hpp"
#include "sketchlsq/problems.hpp"
#include "sketchlsq/sketch.hpp"

using namespace sketchlsq;

TEST_CASE("build_preconditioner on the identity") {
    Preconditioner P = build_preconditioner(DenseMatrix::identity(4));
    for (index_t i = 0; i < 4; ++i)
        for (index_t j = 0; j < 4; ++j) {
            CHECK(P.M(i, j) == (i == j ? 1.0 : 0.0));
            CHECK(P.Q(i, j) == (i == j ? 1.0 : 0.0));
        }
}

TEST_CASE("build_preconditioner on a diagonal sketch") {
    DenseMatrix Y(2, 2);
    Y(0, 0) = 2.0;
    Y(1, 1) = 4.0;
    Preconditioner P = build_preconditioner(Y);
    CHECK(P.M(0, 0) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(P.M(1, 1) == Catch::Approx(0.25).epsilon(1e-14));
    CHECK(P.M(0, 1) == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("Y M has orthonormal columns and equals Q") {
    Rng rng(77);
    DenseMatrix Y = oracle::rand_dense(80, 10, rng);
    Preconditioner P = build_preconditioner(Y);

    DenseMatrix YM = matmul(Y, P.M);
    DenseMatrix G = matmul_at_b(YM, YM);
    for (index_t i = 0; i < 10; ++i) G(i, i) -= 1.0;
    CHECK(max_abs(G) <= 1e-10);

    double rel = 0.0;
    for (std::size_t i = 0; i < YM.data().size(); ++i)
        rel = std::max(rel, std::abs(YM.data()[i] - P.Q.data()[i]));
    CHECK(rel <= 1e-10 * frobenius_norm(P.Q));
    CHECK(P.build_time >= 0.0);
    CHECK(P.d == 80);
}

TEST_CASE("build_preconditioner surfaces rank deficiency") {
    DenseMatrix Y(6, 2);
    for (index_t i = 0; i < 6; ++i) {
        Y(i, 0) = static_cast<double>(i);
        Y(i, 1) = 3.0 * static_cast<double>(i);
    }
    CHECK_THROWS_AS(build_preconditioner(Y), RankDeficient);
}

TEST_CASE("initial_guess: zero sketch gives zero guess") {
    Rng rng(3);
    Preconditioner P = build_preconditioner(oracle::rand_dense(12, 4, rng));
    Vector x0 = initial_guess(P, Vector(12, 0.0));
    for (double v : x0) CHECK(v == 0.0);
}

TEST_CASE("initial_guess solves the sketched system exactly when consistent") {
    Rng rng(5);
    DenseMatrix Y = oracle::rand_dense(6, 2, rng);
    Preconditioner P = build_preconditioner(Y);
    Vector z = oracle::rand_vector(2, rng);
    Vector Sb = matvec(Y, z);  // Sb in range(Y)
    Vector x0 = initial_guess(P, Sb);
    Vector resid = Sb;
    axpy(-1.0, matvec(Y, x0), resid);
    CHECK(norm2(resid) <= 1e-12 * norm2(Sb));
}

TEST_CASE("initial_guess matches the normal-equations oracle") {
    Rng rng(8);
    DenseMatrix Y = oracle::rand_dense(30, 6, rng);
    Vector Sb = oracle::rand_vector(30, rng);
    Preconditioner P = build_preconditioner(Y);
    Vector x0 = initial_guess(P, Sb);
    Vector x_o = oracle::normal_equations_oracle(Y, Sb);
    for (std::size_t i = 0; i < x0.size(); ++i) {
        CHECK(x0[i] == Catch::Approx(x_o[i]).epsilon(1e-9).margin(1e-12));
    }
}

TEST_CASE("apply_M and apply_Mt match the back-substitution oracle") {
    Rng rng(13);
    const index_t n = 15;
    DenseMatrix R(n, n);
    for (index_t j = 0; j < n; ++j) {
        R(j, j) = 1.0 + rng.uniform01();
        for (index_t i = 0; i < j; ++i) R(i, j) = 0.4 * rng.uniform_sym();
    }
    Preconditioner P;
    P.M = tri_inverse(R);
    P.Q = DenseMatrix::identity(n);
    P.d = n;

    Vector v = oracle::rand_vector(n, rng);
    // M v solves R x = v; M^T v solves R^T x = v.
    Vector mv = apply_M(P, v);
    Vector mv_o = tri_upper_solve(R, v);
    Vector mtv = apply_Mt(P, v);
    Vector mtv_o = tri_upper_solve_transposed(R, v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(mv[i] == Catch::Approx(mv_o[i]).epsilon(1e-12).margin(1e-13));
        CHECK(mtv[i] == Catch::Approx(mtv_o[i]).epsilon(1e-12).margin(1e-13));
    }

    Preconditioner I = Preconditioner::identity(3);
    Vector w{1.0, 2.0, 3.0};
    CHECK(apply_M(I, w) == w);
    CHECK(apply_Mt(I, w) == w);
}

TEST_CASE("sketch-and-solve and condition bounds hold with measured distortion") {
    const index_t m = 1500, n = 30;
    DenseMatrix A = gen_dense(m, n, 100.0, /*seed=*/21);
    RhsResult rhs = gen_rhs(A, 0.5, /*seed=*/22);

    SparseSignSketch S = generate_sparse_sign(8 * n, m, 8, /*seed=*/23);
    DenseMatrix U = orthonormal_basis(A);

    Preconditioner P = build_preconditioner(apply(S, A));
    Vector x0 = initial_guess(P, sketch_vector(S, rhs.b));

    // eta on (A, b): extended basis.
    DistortionReport rep_ab = distortion(S, U, &rhs.b);
    const double eta_ab = rep_ab.eta;
    REQUIRE(eta_ab < 1.0);

    Vector r0 = rhs.b;
    axpy(-1.0, matvec(A, x0), r0);
    const double res0 = norm2(r0);

    // Sketch-and-solve residual bound, plain and sharpened.
    CHECK(res0 <= (1.0 + eta_ab) / (1.0 - eta_ab) * rhs.res_star * (1.0 + 1e-10));
    const double e = eta_ab;
    const double sharper = std::sqrt(1.0 + std::pow(2.0 * e + e * e, 2) / std::pow(1.0 - e, 4));
    CHECK(res0 <= sharper * rhs.res_star * (1.0 + 1e-10));

    // Initial-error bound.
    Vector diff = rhs.x_star;
    axpy(-1.0, x0, diff);
    CHECK(norm2(matvec(A, diff)) <=
          std::sqrt(2.0 * e / (1.0 - e)) * rhs.res_star * (1.0 + 1e-10));

    // Condition bound with eta measured on A alone.
    DistortionReport rep_a = distortion(S, U);
    auto sv = singular_values(matmul(A, P.M));
    const double kappa = sv.front() / sv.back();
    CHECK(kappa <= (1.0 + rep_a.eta) / (1.0 - rep_a.eta) * (1.0 + 1e-8));
}
