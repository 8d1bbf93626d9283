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

#include "qtsvd/tqt.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qtsvd;
using qtsvd::oracle::random_matrix;
using qtsvd::oracle::random_tensor;
using qtsvd::oracle::rel_diff;

namespace {

std::vector<TransformSet> transform_families(const QTensor& a, std::uint64_t seed) {
    std::vector<TransformSet> out;
    for (auto kind : {TransformKind::identity, TransformKind::random, TransformKind::qdft, TransformKind::qdct, TransformKind::data_driven})
        out.push_back(make_transforms(kind, a, seed));
    return out;
}

TransformSet scaled(const TransformSet& ts, double c) {
    std::vector<QMatrix> mats;
    for (const auto& m : ts.matrices()) mats.push_back(m * c);
    return TransformSet::validate(std::move(mats), ts.trailing_dims());
}

} // namespace

TEST(Hat, IdentityTransformsAndZero) {
    std::mt19937_64 rng(61);
    const QTensor a = random_tensor({3, 2, 4}, rng);
    const auto id = TransformSet::identity({4});
    EXPECT_EQ(to_hat(a, id), a);
    EXPECT_EQ(from_hat(a, id), a);
    const auto ts = make_transforms(TransformKind::qdft, a);
    const QTensor zero({3, 2, 4});
    EXPECT_EQ(to_hat(zero, ts).frobenius_norm(), 0.0);
    EXPECT_THROW(to_hat(random_tensor({3, 2, 5}, rng), ts), ShapeError);
}

TEST(Hat, RoundTripsForInvertibleTransforms) {
    std::mt19937_64 rng(62);
    const QTensor a = random_tensor({3, 2, 4, 3}, rng);
    auto sets = transform_families(a, 5);
    sets.push_back(TransformSet::validate({random_matrix(4, 4, rng), random_matrix(3, 3, rng)}, {4, 3}));
    for (const auto& ts : sets) {
        EXPECT_LT(rel_diff(from_hat(to_hat(a, ts), ts), a), 1e-10);
        EXPECT_LT(rel_diff(to_hat(from_hat(a, ts), ts), a), 1e-10);
    }
}

TEST(Hat, NormScalesWithTransformFactors) {
    std::mt19937_64 rng(63);
    const QTensor a = random_tensor({2, 3, 4, 3}, rng);
    const auto ts = make_transforms(TransformKind::random, a, 9);
    EXPECT_NEAR(from_hat(a, ts).frobenius_norm(), a.frobenius_norm(), 1e-10 * a.frobenius_norm());
    const auto ts2 = TransformSet::validate({ts.matrices()[0] * 2.0, ts.matrices()[1] * -0.5}, {4, 3});
    ASSERT_TRUE(ts2.scaled_orthogonal());
    double prod = 1.0;
    for (double c : ts2.scales()) prod *= c;
    EXPECT_NEAR(prod, 1.0, 1e-14);
    const auto ts3 = scaled(ts, 3.0);
    EXPECT_NEAR(to_hat(a, ts3).frobenius_norm(), 9.0 * a.frobenius_norm(), 1e-10 * 9.0 * a.frobenius_norm());
}

TEST(QtProduct, IdentityTransformsReduceToFacewise) {
    std::mt19937_64 rng(64);
    const QTensor a = random_tensor({3, 4, 2, 2}, rng);
    const QTensor b = random_tensor({4, 2, 2, 2}, rng);
    const auto id = TransformSet::identity({2, 2});
    EXPECT_LT(rel_diff(qt_product(a, b, id), facewise_product(a, b)), 1e-12);
}

TEST(QtProduct, TrailingDimsOne) {
    std::mt19937_64 rng(65);
    const QTensor a = random_tensor({3, 4, 1}, rng);
    const QTensor b = random_tensor({4, 2, 1}, rng);
    const QMatrix ab = a.frontal_slice(0) * b.frontal_slice(0);

    QMatrix c(1, 1);
    c.set(0, 0, Quaternion{-2.5});
    const auto real_ts = TransformSet::validate({c}, {1});
    EXPECT_LT(rel_diff(qt_product(a, b, real_ts).frontal_slice(0), ab * -2.5), 1e-12);

    // quaternion scalar t: entrywise t^-1 * ((t A)(t B))
    const Quaternion t{0.5, -1.0, 0.25, 2.0};
    QMatrix tm(1, 1);
    tm.set(0, 0, t);
    const auto quat_ts = TransformSet::validate({tm}, {1});
    const QMatrix ta = a.frontal_slice(0);
    const QMatrix tb = b.frontal_slice(0);
    QMatrix expect(3, 2);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            Quaternion acc;
            for (std::size_t p = 0; p < 4; ++p) acc += (t * ta(i, p)) * (t * tb(p, j));
            expect.set(i, j, t.inverse() * acc);
        }
    EXPECT_LT(rel_diff(qt_product(a, b, quat_ts).frontal_slice(0), expect), 1e-12);
}

TEST(ConjugateTranspose, InvolutionAndReversal) {
    std::mt19937_64 rng(66);
    const QTensor a = random_tensor({3, 4, 3, 2}, rng);
    const QTensor b = random_tensor({4, 2, 3, 2}, rng);
    for (const auto& ts : transform_families(a, 1)) {
        const QTensor ah = conjugate_transpose(a, ts);
        EXPECT_EQ(ah.dims(), (Dims{4, 3, 3, 2}));
        EXPECT_LT(rel_diff(conjugate_transpose(ah, ts), a), 1e-10);
        const QTensor lhs = conjugate_transpose(qt_product(a, b, ts), ts);
        const QTensor rhs = qt_product(conjugate_transpose(b, ts), ah, ts);
        EXPECT_LT(rel_diff(lhs, rhs), 1e-10);
    }
    const auto id = TransformSet::identity({3, 2});
    const QTensor ah = conjugate_transpose(a, id);
    for (std::size_t t = 0; t < a.num_slices(); ++t) EXPECT_EQ(ah.frontal_slice(t), hermitian_transpose(a.frontal_slice(t)));
}

TEST(IdentityTensor, IdentityTransformsGiveIdentitySlices) {
    const auto id = TransformSet::identity({3, 2});
    const QTensor eye = identity_tensor(4, id);
    EXPECT_EQ(eye.dims(), (Dims{4, 4, 3, 2}));
    for (std::size_t t = 0; t < eye.num_slices(); ++t) EXPECT_EQ(eye.frontal_slice(t), QMatrix::identity(4));
}

TEST(IdentityTensor, TwoSidedIdentityForAllFamilies) {
    std::mt19937_64 rng(67);
    const QTensor a = random_tensor({3, 5, 4, 2}, rng);
    const QTensor b = random_tensor({5, 3, 4, 2}, rng);
    for (const auto& ts : transform_families(a, 2)) {
        EXPECT_LT((qt_product(identity_tensor(3, ts), a, ts) - a).frobenius_norm(), 1e-10 * a.frobenius_norm());
        EXPECT_LT((qt_product(b, identity_tensor(3, ts), ts) - b).frobenius_norm(), 1e-10 * b.frobenius_norm());
    }
}

TEST(IdentityTensor, SpatialSlicesAreNotIdentityUnderQdft) {
    const auto ts = make_transforms(TransformKind::qdft, Dims{4});
    const QTensor eye = identity_tensor(3, ts);
    // the inverse unitary DFT of a constant tube is sqrt(N) at index 0
    EXPECT_LT((eye.frontal_slice(0) - QMatrix::identity(3) * 2.0).frobenius_norm(), 1e-12);
    for (std::size_t t = 1; t < 4; ++t) EXPECT_LT(eye.frontal_slice(t).frobenius_norm(), 1e-12);
    // memoized copies are equal
    EXPECT_EQ(identity_tensor(3, ts), eye);
}

TEST(UnitaryTensor, Cases) {
    std::mt19937_64 rng(68);
    const auto ts = make_transforms(TransformKind::qdct, Dims{3});
    EXPECT_TRUE(is_unitary_tensor(identity_tensor(4, ts), ts));
    QTensor hat({4, 4, 3});
    for (std::size_t t = 0; t < 3; ++t) hat.set_frontal_slice(t, QMatrix::identity(4) * (t == 1 ? 2.0 : 1.0));
    EXPECT_FALSE(is_unitary_tensor(from_hat(hat, ts), ts));
    const QTensor a = random_tensor({4, 3, 3}, rng);
    const TqtSvd svd = tqt_svd(a, ts);
    EXPECT_TRUE(is_unitary_tensor(svd.u, ts, 1e-8));
    EXPECT_TRUE(is_unitary_tensor(svd.v, ts, 1e-8));
}

TEST(TqtSvd, ZeroTensor) {
    const QTensor a({3, 4, 2});
    const auto ts = make_transforms(TransformKind::qdft, a);
    const TqtSvd svd = tqt_svd(a, ts);
    EXPECT_EQ(svd.d.frobenius_norm(), 0.0);
    EXPECT_EQ(svd.rank, 0u);
    EXPECT_EQ(tqt_rank(svd), 0u);
    for (double s : svd.sigma) EXPECT_EQ(s, 0.0);
}

TEST(TqtSvd, SingleSliceReducesToMatrixSvd) {
    std::mt19937_64 rng(69);
    const QTensor a = random_tensor({5, 3, 1, 1}, rng);
    const TqtSvd svd = tqt_svd(a, TransformSet::identity({1, 1}));
    const QSvd ref = qmat_svd(a.frontal_slice(0));
    ASSERT_EQ(svd.sigma.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(svd.sigma[k], ref.s[k], 1e-12 * ref.s[0]);
}

TEST(TqtSvd, Postconditions) {
    std::mt19937_64 rng(70);
    for (const Dims& dims : {Dims{4, 3, 2}, Dims{3, 5, 2, 3}, Dims{2, 3, 2, 2, 2}}) {
        const QTensor a = random_tensor(dims, rng);
        for (const auto& ts : transform_families(a, 4)) {
            const TqtSvd svd = tqt_svd(a, ts);
            EXPECT_LT((a - reconstruct(svd)).frobenius_norm() / std::max(1.0, a.frobenius_norm()), 1e-9);
            EXPECT_TRUE(is_unitary_tensor(svd.u, ts, 1e-8));
            EXPECT_TRUE(is_unitary_tensor(svd.v, ts, 1e-8));
            EXPECT_TRUE(is_f_diagonal(svd.d, 1e-9 * svd.d.frobenius_norm()));
            for (std::size_t k = 0; k < svd.k_max(); ++k) EXPECT_NEAR(svd.sigma[k], tube_norm(svd.d, k, k), 1e-12 * svd.sigma[0]);
            EXPECT_EQ(svd.rank, svd.k_max());
        }
    }
}

TEST(TqtSvd, ThreadCountDoesNotChangeResult) {
    std::mt19937_64 rng(71);
    const QTensor a = random_tensor({5, 4, 6}, rng);
    const auto ts = make_transforms(TransformKind::qdft, a);
    TqtOptions one;
    one.threads = 1;
    TqtOptions many;
    many.threads = 4;
    const TqtSvd s1 = tqt_svd(a, ts, one);
    const TqtSvd s4 = tqt_svd(a, ts, many);
    EXPECT_EQ(s1.sigma, s4.sigma);
    EXPECT_EQ(s1.u, s4.u);
    EXPECT_EQ(s1.v, s4.v);
}

TEST(TqtRank, IdentityAndPlanted) {
    const auto ts = make_transforms(TransformKind::qdft, Dims{3, 2});
    EXPECT_EQ(tqt_svd(identity_tensor(4, ts), ts).rank, 4u);
    std::mt19937_64 rng(72);
    const QTensor planted = oracle::planted_rank_tensor(5, 4, {3, 2}, 2, ts, rng);
    const TqtSvd svd = tqt_svd(planted, ts);
    EXPECT_EQ(tqt_rank(svd), 2u);
    EXPECT_LT((planted - truncate(svd, 2).approx).frobenius_norm(), 1e-9 * planted.frobenius_norm());
}

TEST(Truncate, FullRankIsExact) {
    std::mt19937_64 rng(73);
    const QTensor a = random_tensor({4, 5, 3}, rng);
    const auto ts = make_transforms(TransformKind::random, a, 3);
    const TqtSvd svd = tqt_svd(a, ts);
    const Truncation tr = truncate(svd, 4);
    EXPECT_TRUE(tr.optimal);
    EXPECT_LT(rel_diff(tr.approx, a), 1e-9);
    EXPECT_THROW(truncate(svd, 0), ShapeError);
    EXPECT_THROW(truncate(svd, 5), ShapeError);
}

TEST(Truncate, ErrorIdentityAndMonotonicity) {
    std::mt19937_64 rng(74);
    const QTensor a = random_tensor({6, 5, 4, 2}, rng);
    for (const auto& base : transform_families(a, 6)) {
        for (double c : {1.0, 2.0, -0.3}) {
            const auto ts = scaled(base, c);
            ASSERT_TRUE(ts.scaled_orthogonal());
            const TqtSvd svd = tqt_svd(a, ts);
            double previous = std::numeric_limits<double>::infinity();
            for (std::size_t s = 1; s <= svd.k_max(); ++s) {
                const double err = (a - truncate(svd, s).approx).frobenius_norm();
                const double tail = tail_energy(svd, s);
                const double denom = s == svd.k_max() ? a.frobenius_norm() * a.frobenius_norm() : tail;
                EXPECT_LE(std::abs(err * err - tail), 1e-7 * denom) << "s=" << s << " c=" << c;
                EXPECT_LE(err, previous * (1 + 1e-12));
                previous = err;
            }
        }
    }
}

TEST(Truncate, ScaleInvariance) {
    std::mt19937_64 rng(75);
    const QTensor a = random_tensor({5, 5, 4}, rng);
    const auto ts = make_transforms(TransformKind::qdft, a);
    const QTensor one = truncate(tqt_svd(a, ts), 2).approx;
    const QTensor two = truncate(tqt_svd(a, scaled(ts, 2.0)), 2).approx;
    EXPECT_LT(rel_diff(two, one), 1e-9);
}

TEST(Truncate, BeatsNearbyRankCompetitors) {
    std::mt19937_64 rng(76);
    const QTensor a = random_tensor({6, 6, 4}, rng);
    const auto ts = make_transforms(TransformKind::qdct, a);
    const TqtSvd svd = tqt_svd(a, ts);
    const double best = (a - truncate(svd, 3).approx).frobenius_norm();
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 30; ++trial) {
        QTensor hat(a.dims());
        for (std::size_t t = 0; t < hat.num_slices(); ++t) {
            QMatrix x = svd.u_hat.frontal_slice(t).left_cols(3);
            QMatrix y = svd.v_hat.frontal_slice(t).left_cols(3);
            for (std::size_t k = 0; k < 3; ++k)
                for (int p = 0; p < 4; ++p) x.plane_map(p).col(static_cast<Eigen::Index>(k)) *= svd.slice_values[t][k];
            for (double& v : x.raw()) v += 0.05 * normal(rng);
            for (double& v : y.raw()) v += 0.05 * normal(rng);
            hat.set_frontal_slice(t, x * hermitian_transpose(y));
        }
        const QTensor g = from_hat(hat, ts);
        EXPECT_LE(tqt_rank(tqt_svd(g, ts)), 3u);
        EXPECT_LE(best, (a - g).frobenius_norm());
    }
}

TEST(Truncate, FlagsNonOrthogonalTransforms) {
    std::mt19937_64 rng(77);
    const QTensor a = random_tensor({3, 3, 3}, rng);
    const auto ts = TransformSet::validate({random_matrix(3, 3, rng)}, {3});
    const TqtSvd svd = tqt_svd(a, ts);
    const Truncation tr = truncate(svd, 3);
    EXPECT_FALSE(tr.optimal);
    EXPECT_LT(rel_diff(tr.approx, a), 1e-9);
}
