// Copyright 2026 The qtsvd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtsvd/qmatrix.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qtsvd;
using qtsvd::oracle::random_matrix;

TEST(QMatrix, StorageLayoutIsPlanarColumnMajor) {
    QMatrix m(2, 3);
    m.set(1, 2, {1.0, 2.0, 3.0, 4.0});
    const auto raw = m.raw();
    const std::size_t off = 2 * 2 + 1;
    EXPECT_EQ(raw[off], 1.0);
    EXPECT_EQ(raw[6 + off], 2.0);
    EXPECT_EQ(raw[12 + off], 3.0);
    EXPECT_EQ(raw[18 + off], 4.0);
}

TEST(QMatrix, IdentityTimesB) {
    std::mt19937_64 rng(1);
    const QMatrix b = random_matrix(4, 3, rng);
    EXPECT_EQ(QMatrix::identity(4) * b, b);
}

TEST(QMatrix, ScalarUnits) {
    QMatrix a(1, 1);
    QMatrix b(1, 1);
    a.set(0, 0, Quaternion::i());
    b.set(0, 0, Quaternion::j());
    EXPECT_EQ((a * b)(0, 0), Quaternion::k());
    EXPECT_EQ((b * a)(0, 0), -Quaternion::k());
}

TEST(QMatrix, ProductMatchesScalarLoops) {
    std::mt19937_64 rng(2);
    const QMatrix a = random_matrix(5, 4, rng);
    const QMatrix b = random_matrix(4, 6, rng);
    EXPECT_LT(oracle::rel_diff(a * b, oracle::naive_mul(a, b)), 1e-13);
}

TEST(QMatrix, AdjointIsHomomorphism) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const QMatrix a = random_matrix(1 + rng() % 6, 1 + rng() % 6, rng);
        const QMatrix b = random_matrix(a.cols(), 1 + rng() % 6, rng);
        const ComplexMatrix lhs = complex_adjoint(a * b);
        const ComplexMatrix rhs = complex_adjoint(a) * complex_adjoint(b);
        EXPECT_LT((lhs - rhs).norm() / rhs.norm(), 1e-12);
        EXPECT_LT((complex_adjoint(hermitian_transpose(a)) - complex_adjoint(a).adjoint()).norm(), 1e-15);
    }
}

TEST(QMatrix, AdjointNormRelation) {
    std::mt19937_64 rng(4);
    const QMatrix a = random_matrix(7, 3, rng);
    EXPECT_NEAR(a.frobenius_norm(), complex_adjoint(a).norm() / std::sqrt(2.0), 1e-12 * a.frobenius_norm());
    EXPECT_EQ(from_complex_adjoint(complex_adjoint(a)), a);
}

TEST(QMatrix, ProductAssociativityAndTransposeReversal) {
    std::mt19937_64 rng(5);
    const QMatrix a = random_matrix(3, 4, rng);
    const QMatrix b = random_matrix(4, 2, rng);
    const QMatrix c = random_matrix(2, 5, rng);
    EXPECT_LT(oracle::rel_diff((a * b) * c, a * (b * c)), 1e-13);
    EXPECT_LT(oracle::rel_diff(hermitian_transpose(a * b), hermitian_transpose(b) * hermitian_transpose(a)), 1e-13);
    EXPECT_EQ(hermitian_transpose(hermitian_transpose(a)), a);
}

TEST(QMatrix, ShapeMismatchThrows) {
    EXPECT_THROW(QMatrix(2, 3) * QMatrix(2, 3), ShapeError);
}

TEST(QMatrixInverse, Identity) {
    EXPECT_LT((qmat_inverse(QMatrix::identity(3)) - QMatrix::identity(3)).frobenius_norm(), 1e-15);
}

TEST(QMatrixInverse, PureImaginaryScalar) {
    QMatrix a(1, 1);
    a.set(0, 0, {0.0, 2.0, 0.0, 0.0});
    const Quaternion inv = qmat_inverse(a)(0, 0);
    EXPECT_NEAR(inv.w, 0.0, 1e-15);
    EXPECT_NEAR(inv.x, -0.5, 1e-15);
    EXPECT_NEAR(inv.y, 0.0, 1e-15);
    EXPECT_NEAR(inv.z, 0.0, 1e-15);
}

TEST(QMatrixInverse, RandomResidualAndInvolution) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const QMatrix a = random_matrix(4, 4, rng);
        const QMatrix inv = qmat_inverse(a);
        EXPECT_LT((a * inv - QMatrix::identity(4)).frobenius_norm(), 1e-10);
        EXPECT_LT((inv * a - QMatrix::identity(4)).frobenius_norm(), 1e-10);
        EXPECT_LT(oracle::rel_diff(qmat_inverse(inv), a), 1e-8);
    }
}

TEST(QMatrixInverse, SingularThrows) {
    std::mt19937_64 rng(7);
    QMatrix a = random_matrix(3, 3, rng);
    for (std::size_t r = 0; r < 3; ++r) a.set(r, 1, Quaternion{});
    EXPECT_THROW(qmat_inverse(a), SingularMatrixError);
    // quaternion-dependent columns: c2 = c0 * q (right scalar)
    QMatrix b = random_matrix(3, 3, rng);
    const Quaternion q{0.3, -1.0, 2.0, 0.5};
    for (std::size_t r = 0; r < 3; ++r) b.set(r, 2, b(r, 0) * q);
    EXPECT_THROW(qmat_inverse(b), SingularMatrixError);
    EXPECT_THROW(qmat_inverse(QMatrix(2, 3)), ShapeError);
}

TEST(QMatrixQr, Identity) {
    const auto [q, r] = qmat_qr(QMatrix::identity(4));
    EXPECT_EQ(q, QMatrix::identity(4));
    EXPECT_EQ(r, QMatrix::identity(4));
}

TEST(QMatrixQr, SingleColumn) {
    QMatrix v(3, 1);
    v.set(0, 0, {1.0, 2.0, 0.0, 0.0});
    v.set(2, 0, {0.0, 0.0, 0.0, 2.0});
    const auto [q, r] = qmat_qr(v);
    EXPECT_DOUBLE_EQ(r(0, 0).w, 3.0);
    EXPECT_EQ(r(0, 0).x, 0.0);
    EXPECT_LT((q - v * (1.0 / 3.0)).frobenius_norm(), 1e-15);
}

TEST(QMatrixQr, RandomSquareAndTall) {
    std::mt19937_64 rng(8);
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{5, 5}, {7, 3}, {12, 12}}) {
        const QMatrix a = random_matrix(m, n, rng);
        const auto [q, r] = qmat_qr(a);
        EXPECT_LT((hermitian_transpose(q) * q - QMatrix::identity(n)).frobenius_norm(), 1e-10);
        EXPECT_LT((a - q * r).frobenius_norm() / a.frobenius_norm(), 1e-10);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_GT(r(i, i).w, 0.0);
            EXPECT_EQ(r(i, i).x, 0.0);
            for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(r(i, j), Quaternion{});
        }
    }
}

TEST(QMatrixQr, DegenerateColumnThrows) {
    std::mt19937_64 rng(9);
    QMatrix a = random_matrix(4, 3, rng);
    const Quaternion q{0.0, 1.0, -1.0, 0.5};
    for (std::size_t r = 0; r < 4; ++r) a.set(r, 2, a(r, 1) * q);
    EXPECT_THROW(qmat_qr(a), DegenerateInputError);
    EXPECT_THROW(qmat_qr(QMatrix(2, 3)), ShapeError);
}

TEST(IsUnitary, Cases) {
    EXPECT_TRUE(is_unitary(QMatrix::identity(5)));
    EXPECT_FALSE(is_unitary(QMatrix::identity(5) * 2.0));
    std::mt19937_64 rng(10);
    EXPECT_TRUE(is_unitary(qmat_qr(random_matrix(6, 6, rng)).q, 1e-9));
}
