#include "l1tucker/error.hpp"
#include "l1tucker/linalg.hpp"
#include "l1tucker/rng.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

using namespace l1tucker;

namespace {

// Eigenvalues of the smaller Gram matrix in descending order: squared
// singular values computed without going through thin_svd.
Vector squared_spectrum(const Matrix& a) {
    const Matrix g = a.rows() <= a.cols() ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    Vector ev = es.eigenvalues().reverse();
    return ev.cwiseMax(0.0);
}

}  // namespace

TEST_CASE("StiefelBasis validates orthonormality") {
    CHECK_NOTHROW(StiefelBasis(Matrix::Identity(3, 2)));
    CHECK_THROWS_AS(StiefelBasis(Matrix::Ones(3, 2)), ArgumentError);
    CHECK_THROWS_AS(StiefelBasis(Matrix::Identity(2, 3)), ArgumentError);
    Rng rng(1);
    const StiefelBasis u = random_stiefel(7, 3, rng);
    CHECK(orthonormality_error(u.matrix()) <= StiefelBasis::kTolerance);
}

TEST_CASE("thin SVD of simple matrices") {
    const ThinSvd id = thin_svd(Matrix::Identity(3, 3));
    CHECK(id.singular_values == Vector::Ones(3));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 2;
    const ThinSvd s = thin_svd(d);
    CHECK(s.singular_values(0) == doctest::Approx(3.0));
    CHECK(s.singular_values(1) == doctest::Approx(2.0));
    CHECK((s.left - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((s.right - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

    Matrix bad = Matrix::Ones(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((void)thin_svd(bad), ArgumentError);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS((void)thin_svd(bad), ArgumentError);
}

TEST_CASE("thin SVD invariants on random matrices") {
    Rng rng(2);
    for (int rep = 0; rep < 100; ++rep) {
        const auto rows = static_cast<Index>(2 + rng.below(19));
        const auto cols = static_cast<Index>(2 + rng.below(19));
        const Matrix a = gaussian_matrix(rows, cols, rng);
        const ThinSvd s = thin_svd(a);
        const Index r = std::min(rows, cols);
        REQUIRE(s.left.rows() == rows);
        REQUIRE(s.left.cols() == r);
        REQUIRE(s.right.rows() == cols);
        REQUIRE(s.right.cols() == r);
        const Matrix rec = s.left * s.singular_values.asDiagonal() * s.right.transpose();
        CHECK((rec - a).norm() <= 1e-9 * a.norm());
        CHECK(orthonormality_error(s.left) <= 1e-10);
        CHECK(orthonormality_error(s.right) <= 1e-10);
        for (Index i = 1; i < r; ++i) CHECK(s.singular_values(i) <= s.singular_values(i - 1));
        CHECK(s.singular_values.minCoeff() >= 0.0);
        CHECK(std::abs(s.singular_values.squaredNorm() - a.squaredNorm()) <= 1e-9 * a.squaredNorm());
        for (Index k = 0; k < r; ++k) {
            Index arg = 0;
            s.left.col(k).cwiseAbs().maxCoeff(&arg);
            CHECK(s.left(arg, k) >= 0.0);
        }
    }
}

TEST_CASE("thin SVD is deterministic") {
    Rng rng(3);
    const Matrix a = gaussian_matrix(6, 4, rng);
    const ThinSvd s1 = thin_svd(a);
    const ThinSvd s2 = thin_svd(a);
    CHECK(s1.left == s2.left);
    CHECK(s1.right == s2.right);
    CHECK(s1.singular_values == s2.singular_values);
}

TEST_CASE("numerical rank uses a relative cutoff") {
    Vector s(3);
    s << 1.0, 1e-11, 1e-13;
    CHECK(numerical_rank(s) == 2);
    CHECK(numerical_rank(Vector::Zero(3)) == 0);
}

TEST_CASE("top-d left basis") {
    Matrix a = Matrix::Zero(3, 3);
    a.diagonal() << 3, 2, 1;
    const StiefelBasis u = top_d_left_basis(a, 2);
    CHECK((u.matrix() - Matrix::Identity(3, 2)).cwiseAbs().maxCoeff() <= 1e-15);

    Matrix one_row = Matrix::Zero(4, 5);
    one_row.row(2) << 1, -2, 3, 0, 5;
    const StiefelBasis e = top_d_left_basis(one_row, 1);
    Vector axis = Vector::Zero(4);
    axis(2) = 1;
    CHECK((e.matrix().col(0) - axis).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK_THROWS_AS((void)top_d_left_basis(a, 4), ArgumentError);
    CHECK_THROWS_AS((void)top_d_left_basis(a, 0), ArgumentError);
}

TEST_CASE("top-d left basis captures the top spectrum") {
    Rng rng(4);
    for (int rep = 0; rep < 50; ++rep) {
        const auto rows = static_cast<Index>(2 + rng.below(8));
        const auto cols = static_cast<Index>(2 + rng.below(8));
        const auto d = static_cast<Index>(1 + rng.below(static_cast<std::uint64_t>(rows)));
        const Matrix a = gaussian_matrix(rows, cols, rng);
        const StiefelBasis u = top_d_left_basis(a, d);
        const Vector ev = squared_spectrum(a);
        CHECK((u.matrix().transpose() * a).squaredNorm() == doctest::Approx(ev.head(std::min(d, ev.size())).sum()).epsilon(1e-9));
    }
}

TEST_CASE("top-d left basis completes rank-deficient input") {
    Matrix a = Matrix::Zero(4, 3);
    a(0, 0) = 1;
    a(0, 1) = 2;
    const StiefelBasis u = top_d_left_basis(a, 3);
    CHECK(orthonormality_error(u.matrix()) <= 1e-12);
    CHECK(std::abs(u.matrix()(0, 0)) == doctest::Approx(1.0));
    const StiefelBasis z = top_d_left_basis(Matrix::Zero(3, 2), 2);
    CHECK(orthonormality_error(z.matrix()) <= 1e-12);
    CHECK(z == top_d_left_basis(Matrix::Zero(3, 2), 2));
}

TEST_CASE("orthonormal completion extends a partial basis") {
    Matrix p(3, 1);
    p << 1, 0, 0;
    const Matrix c = orthonormal_completion(p, 3, 3);
    CHECK(c.cols() == 3);
    CHECK(orthonormality_error(c) <= 1e-12);
    CHECK(c.col(0) == p.col(0));
    const Matrix e = orthonormal_completion(Matrix(3, 0), 3, 2);
    CHECK(orthonormality_error(e) <= 1e-12);
}

TEST_CASE("Procrustes map examples") {
    Rng rng(5);
    const StiefelBasis q = random_stiefel(5, 3, rng);
    CHECK((procrustes_phi(q.matrix()).matrix() - q.matrix()).cwiseAbs().maxCoeff() <= 1e-12);

    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 2, 3;
    CHECK((procrustes_phi(d).matrix() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-15);

    CHECK_THROWS_AS((void)procrustes_phi(Matrix::Ones(2, 3)), ArgumentError);
}

TEST_CASE("Procrustes map maximizes the trace") {
    Rng rng(6);
    for (int rep = 0; rep < 10; ++rep) {
        const Matrix a = gaussian_matrix(6, 3, rng);
        const ProcrustesResult phi = procrustes(a);
        CHECK_FALSE(phi.rank_deficient);
        CHECK(orthonormality_error(phi.basis.matrix()) <= StiefelBasis::kTolerance);
        const double best = (phi.basis.matrix().transpose() * a).trace();
        CHECK(best == doctest::Approx(nuclear_norm(a)).epsilon(1e-10));
        for (int k = 0; k < 100; ++k) {
            const StiefelBasis u = random_stiefel(6, 3, rng);
            CHECK((u.matrix().transpose() * a).trace() <= best + 1e-12);
        }
    }
}

TEST_CASE("Procrustes map flags rank deficiency") {
    Matrix a = Matrix::Zero(4, 2);
    a(0, 0) = 1;
    a(1, 0) = 1;
    const ProcrustesResult r = procrustes(a);
    CHECK(r.rank_deficient);
    CHECK(orthonormality_error(r.basis.matrix()) <= StiefelBasis::kTolerance);
    CHECK((r.basis.matrix().transpose() * a).trace() == doctest::Approx(nuclear_norm(a)));
    CHECK(procrustes(Matrix::Zero(3, 2)).rank_deficient);
}

TEST_CASE("sign matrix") {
    CHECK(sign_matrix(Matrix::Zero(1, 1))(0, 0) == 1.0);
    Matrix a(1, 2);
    a << -2, 5;
    Matrix expected(1, 2);
    expected << -1, 1;
    CHECK(sign_matrix(a) == expected);
    Rng rng(7);
    const Matrix r = gaussian_matrix(4, 5, rng);
    CHECK(sign_matrix(sign_matrix(r)) == sign_matrix(r));
    Matrix neg_zero(1, 1);
    neg_zero << -0.0;
    CHECK(sign_matrix(neg_zero)(0, 0) == 1.0);
}

TEST_CASE("nuclear norm") {
    CHECK(nuclear_norm(Matrix::Identity(4, 4)) == doctest::Approx(4.0));
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 3, 2;
    CHECK(nuclear_norm(d) == doctest::Approx(5.0));
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        const Matrix a = gaussian_matrix(static_cast<Index>(2 + rng.below(6)), static_cast<Index>(2 + rng.below(6)), rng);
        CHECK(nuclear_norm(a) >= a.norm() * (1 - 1e-12));
        CHECK(nuclear_norm(a) == doctest::Approx(squared_spectrum(a).cwiseSqrt().sum()).epsilon(1e-9));
    }
}

TEST_CASE("random Stiefel draws are seeded and orthonormal") {
    Rng a(9), b(9);
    const StiefelBasis u = random_stiefel(6, 2, a);
    CHECK(u == random_stiefel(6, 2, b));
    CHECK(orthonormality_error(u.matrix()) <= 1e-12);
}
