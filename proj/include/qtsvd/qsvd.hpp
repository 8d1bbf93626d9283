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

#pragma once

#include "qtsvd/error.hpp"
#include "qtsvd/qmatrix.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qtsvd {

struct SvdOptions {
    /// Two consecutive adjoint singular values form a pair when they differ by
    /// less than pair_tolerance * sigma_max.
    double pair_tolerance = 1e-8;
    /// Bound on ||A - U diag(S) V^H||_F / max(1, ||A||_F).
    double residual_tolerance = 1e-9;
};

/// Full quaternion SVD A = U diag(S) V^H.
///
/// U is rows x rows, V is cols x cols, both unitary. S holds the
/// min(rows, cols) singular values, real, nonnegative and sorted descending.
struct QSvd {
    QMatrix u;
    std::vector<double> s;
    QMatrix v;
};

namespace detail {

using ComplexVector = Eigen::VectorXcd;

/// A block of quaternion column vectors q = a + b j, held as the complex
/// matrices a and b (one column per vector).
struct QuatColumns {
    ComplexMatrix a;
    ComplexMatrix b;

    [[nodiscard]] Eigen::Index count() const { return a.cols(); }
    [[nodiscard]] Eigen::Index length() const { return a.rows(); }
};

/// Quaternion vectors whose adjoint first columns [a; -conj(b)] are the given
/// complex columns.
inline QuatColumns from_adjoint_columns(const ComplexMatrix& c) {
    const Eigen::Index n = c.rows() / 2;
    return {c.topRows(n), -c.bottomRows(n).conjugate()};
}

/// Adjoint first columns [a; -conj(b)] of a block of quaternion vectors.
inline ComplexMatrix to_adjoint_columns(const QuatColumns& q) {
    ComplexMatrix c(2 * q.length(), q.count());
    c.topRows(q.length()) = q.a;
    c.bottomRows(q.length()) = -q.b.conjugate();
    return c;
}

/// Removes from `cand` its components along the orthonormal quaternion
/// vectors in `basis`: cand -= basis * (basis^H cand), coefficients applied
/// from the right.
inline void project_out(const QuatColumns& basis, QuatColumns& cand) {
    if (basis.count() == 0 || cand.count() == 0) return;
    // basis^H cand = alpha + beta j
    const ComplexMatrix alpha = basis.a.adjoint() * cand.a + (basis.b.adjoint() * cand.b).conjugate();
    const ComplexMatrix beta = basis.a.adjoint() * cand.b - (basis.b.adjoint() * cand.a).conjugate();
    cand.a.noalias() -= basis.a * alpha - basis.b * beta.conjugate();
    cand.b.noalias() -= basis.a * beta + basis.b * alpha.conjugate();
}

/// Appends one quaternion vector to `dst`.
inline void append_column(QuatColumns& dst, const ComplexVector& a, const ComplexVector& b) {
    const Eigen::Index k = dst.count();
    dst.a.conservativeResize(a.size(), k + 1);
    dst.b.conservativeResize(b.size(), k + 1);
    dst.a.col(k) = a;
    dst.b.col(k) = b;
}

/// Picks `count` quaternion-orthonormal vectors from the span of the
/// candidates, orthogonal to `basis`, and appends them to `basis`.
///
/// Candidate residuals are updated after every pick and the largest one is
/// taken next. Two complex candidates from the same symplectic pair span a
/// single quaternion direction, so a pair cluster of 2p candidates yields p
/// vectors.
inline void pivoted_select(QuatColumns& basis, QuatColumns cand, Eigen::Index count, double min_residual) {
    project_out(basis, cand);
    project_out(basis, cand);
    std::vector<bool> used(static_cast<std::size_t>(cand.count()), false);
    for (Eigen::Index picked = 0; picked < count; ++picked) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        for (Eigen::Index c = 0; c < cand.count(); ++c) {
            if (used[static_cast<std::size_t>(c)]) continue;
            const double nrm = cand.a.col(c).squaredNorm() + cand.b.col(c).squaredNorm();
            if (nrm > best_norm) {
                best_norm = nrm;
                best = c;
            }
        }
        if (best < 0 || std::sqrt(best_norm) < min_residual) {
            throw NumericalError("quaternion SVD: could not extract an orthonormal basis from the adjoint singular vectors");
        }
        used[static_cast<std::size_t>(best)] = true;
        const double nrm = std::sqrt(best_norm);
        QuatColumns picked_vec{cand.a.col(best) / nrm, cand.b.col(best) / nrm};
        // second pass against the full basis keeps round-off from accumulating
        project_out(basis, picked_vec);
        const double renorm = std::sqrt(picked_vec.a.squaredNorm() + picked_vec.b.squaredNorm());
        picked_vec.a /= renorm;
        picked_vec.b /= renorm;
        append_column(basis, picked_vec.a.col(0), picked_vec.b.col(0));
        project_out(picked_vec, cand);
    }
}

/// Classical Gram-Schmidt with reorthogonalization, in column order.
inline void orthonormalize(QuatColumns& q) {
    QuatColumns done{ComplexMatrix(q.length(), 0), ComplexMatrix(q.length(), 0)};
    for (Eigen::Index c = 0; c < q.count(); ++c) {
        QuatColumns v{q.a.col(c), q.b.col(c)};
        project_out(done, v);
        project_out(done, v);
        const double nrm = std::sqrt(v.a.squaredNorm() + v.b.squaredNorm());
        if (!(nrm > 0.0)) throw NumericalError("quaternion SVD: lost orthogonality in singular vectors");
        append_column(done, v.a.col(0) / nrm, v.b.col(0) / nrm);
    }
    q = std::move(done);
}

inline QMatrix to_qmatrix(const QuatColumns& q) {
    return QMatrix::from_planes(q.a.real(), q.a.imag(), q.b.real(), q.b.imag());
}


/// Quaternion SVD assembled from a full complex SVD of chi = complex_adjoint(a).
template <typename ComplexSvd>
QSvd svd_from_adjoint(const QMatrix& a, const ComplexMatrix& chi, const ComplexSvd& svd, const SvdOptions& opts) {
    const auto m = static_cast<Eigen::Index>(a.rows());
    const auto n = static_cast<Eigen::Index>(a.cols());
    const Eigen::Index k = std::min(m, n);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (!sv.allFinite()) throw NumericalError("quaternion SVD: non-finite singular values");

    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    const double pair_gap = opts.pair_tolerance * smax;

    // pair values, zero-extended to n entries for the right null space
    std::vector<double> pairs(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index p = 0; p < k; ++p) {
        const double s1 = sv(2 * p);
        const double s2 = sv(2 * p + 1);
        if (std::abs(s1 - s2) > pair_gap) {
            throw NumericalError("quaternion SVD: adjoint singular values " + std::to_string(s1) + " and " + std::to_string(s2) +
                                 " are not paired");
        }
        pairs[static_cast<std::size_t>(p)] = 0.5 * (s1 + s2);
    }

    // right singular vectors, one cluster of (nearly) equal pair values at a time
    const ComplexMatrix& z = svd.matrixV();
    QuatColumns vcols{ComplexMatrix(n, 0), ComplexMatrix(n, 0)};
    for (Eigen::Index begin = 0; begin < n;) {
        Eigen::Index end = begin + 1;
        while (end < n && std::abs(pairs[static_cast<std::size_t>(end)] - pairs[static_cast<std::size_t>(end - 1)]) <= pair_gap) ++end;
        QuatColumns cluster{ComplexMatrix(n, 0), ComplexMatrix(n, 0)};
        QuatColumns cand = detail::from_adjoint_columns(z.middleCols(2 * begin, 2 * (end - begin)));
        detail::pivoted_select(cluster, std::move(cand), end - begin, 1e-6);
        vcols.a.conservativeResize(n, vcols.count() + cluster.count());
        vcols.b.conservativeResize(n, vcols.a.cols());
        vcols.a.rightCols(cluster.count()) = cluster.a;
        vcols.b.rightCols(cluster.count()) = cluster.b;
        begin = end;
    }
    detail::orthonormalize(vcols);

    // left singular vectors for nonzero values: u = A v / sigma
    const double zero_tol = 1e-12 * smax;
    Eigen::Index rank = 0;
    while (rank < k && pairs[static_cast<std::size_t>(rank)] > zero_tol) ++rank;
    QuatColumns ucols{ComplexMatrix(m, 0), ComplexMatrix(m, 0)};
    if (rank > 0) {
        const ComplexMatrix vfirst = detail::to_adjoint_columns({vcols.a.leftCols(rank), vcols.b.leftCols(rank)});
        ComplexMatrix av = chi * vfirst;
        for (Eigen::Index c = 0; c < rank; ++c) av.col(c) /= pairs[static_cast<std::size_t>(c)];
        ucols = detail::from_adjoint_columns(av);
        detail::orthonormalize(ucols);
    }
    if (rank < m) {
        QuatColumns cand = detail::from_adjoint_columns(svd.matrixU().rightCols(2 * (m - rank)));
        detail::pivoted_select(ucols, std::move(cand), m - rank, 1e-6);
    }

    QSvd out{detail::to_qmatrix(ucols), std::vector<double>(pairs.begin(), pairs.begin() + k), detail::to_qmatrix(vcols)};

    // A = U_k diag(S) V_k^H
    QMatrix us = out.u.left_cols(static_cast<std::size_t>(k));
    for (int p = 0; p < 4; ++p)
        for (Eigen::Index c = 0; c < k; ++c) us.plane_map(p).col(c) *= out.s[static_cast<std::size_t>(c)];
    const QMatrix recon = us * hermitian_transpose(out.v.left_cols(static_cast<std::size_t>(k)));
    const double anorm = a.frobenius_norm();
    const double resid = (a - recon).frobenius_norm() / std::max(1.0, anorm);
    if (!(resid < opts.residual_tolerance)) {
        throw NumericalError("quaternion SVD: reconstruction residual " + std::to_string(resid) + " exceeds tolerance");
    }
    return out;
}

} // namespace detail

/// Quaternion matrix SVD through the complex adjoint.
///
/// The 2m x 2n adjoint chi(A) has every singular value twice; its singular
/// vectors come in symplectic pairs [u1; u2], [-conj(u2); conj(u1)] that
/// describe one quaternion singular vector. One representative per pair is
/// extracted (pivoted Gram-Schmidt inside clusters of equal values), the
/// left factors are rebuilt as A v / sigma, and both factors are completed
/// to square unitary matrices. The reconstruction residual is checked
/// before returning. Eigen's divide-and-conquer SVD is tried first; if its
/// result fails those checks the one-sided Jacobi SVD is used instead.
inline QSvd qmat_svd(const QMatrix& a, const SvdOptions& opts = {}) {
    if (a.rows() == 0 || a.cols() == 0) return {QMatrix::identity(a.rows()), {}, QMatrix::identity(a.cols())};

    const ComplexMatrix chi = complex_adjoint(a);
    Eigen::BDCSVD<ComplexMatrix> bdc(chi, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (bdc.info() == Eigen::Success) {
        try {
            return detail::svd_from_adjoint(a, chi, bdc, opts);
        } catch (const NumericalError&) {
            // Eigen 3.4's BDCSVD loses accuracy on some clustered spectra
        }
    }
    Eigen::JacobiSVD<ComplexMatrix> jacobi(chi, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (jacobi.info() != Eigen::Success) throw NumericalError("quaternion SVD: complex SVD of the adjoint failed");
    return detail::svd_from_adjoint(a, chi, jacobi, opts);
}

} // namespace qtsvd
