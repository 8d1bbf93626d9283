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
#include "qtsvd/parallel.hpp"
#include "qtsvd/qmatrix.hpp"
#include "qtsvd/qsvd.hpp"
#include "qtsvd/qtensor.hpp"
#include "qtsvd/transforms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace qtsvd {

namespace detail {

inline void check_transforms(const QTensor& a, const TransformSet& ts, const char* what) {
    if (a.trailing_dims() != ts.trailing_dims()) {
        throw ShapeError(std::string(what) + ": tensor " + dims_string(a.dims()) + " does not match transforms for trailing dims " +
                         dims_string(ts.trailing_dims()));
    }
}

} // namespace detail

/// Transform-domain image A x_3 T_3 x_4 ... x_L T_L.
inline QTensor to_hat(const QTensor& a, const TransformSet& ts) {
    detail::check_transforms(a, ts, "to_hat");
    QTensor out = a;
    for (std::size_t k = 0; k < ts.size(); ++k) out = mode_k_product(out, ts.matrices()[k], k + 2);
    return out;
}

/// Inverse of to_hat: applies T_L^-1, ..., T_3^-1 in descending mode order.
/// Quaternion mode products along distinct modes do not commute, so the
/// order matters once two transforms have non-real entries.
inline QTensor from_hat(const QTensor& ahat, const TransformSet& ts) {
    detail::check_transforms(ahat, ts, "from_hat");
    QTensor out = ahat;
    for (std::size_t k = ts.size(); k-- > 0;) out = mode_k_product(out, ts.inverses()[k], k + 2);
    return out;
}

/// Transform-based product: facewise product in the hat domain, mapped back.
inline QTensor qt_product(const QTensor& a, const QTensor& b, const TransformSet& ts) {
    detail::check_transforms(a, ts, "qt_product");
    detail::check_transforms(b, ts, "qt_product");
    return from_hat(facewise_product(to_hat(a, ts), to_hat(b, ts)), ts);
}

/// A^H: the tensor whose hat-domain slices are the Hermitian transposes of
/// the hat-domain slices of A.
inline QTensor conjugate_transpose(const QTensor& a, const TransformSet& ts) {
    return from_hat(facewise_hermitian(to_hat(a, ts)), ts);
}

/// Identity under the product: every hat-domain slice is the P x P identity.
/// Results are memoized inside the transform set.
inline QTensor identity_tensor(std::size_t p, const TransformSet& ts) {
    auto& cache = ts.identity_cache();
    {
        std::lock_guard lock(cache.mutex);
        if (auto it = cache.by_size.find(p); it != cache.by_size.end()) return *it->second;
    }
    Dims dims{p, p};
    const auto& trailing = ts.trailing_dims();
    dims.insert(dims.end(), trailing.begin(), trailing.end());
    QTensor hat(dims);
    const QMatrix eye = QMatrix::identity(p);
    for (std::size_t t = 0; t < hat.num_slices(); ++t) hat.set_frontal_slice(t, eye);
    auto built = std::make_shared<const QTensor>(from_hat(hat, ts));
    std::lock_guard lock(cache.mutex);
    return *cache.by_size.emplace(p, std::move(built)).first->second;
}

/// True when U^H * U and U * U^H are both within `tol` of the identity tensor,
/// measured relative to its Frobenius norm.
inline bool is_unitary_tensor(const QTensor& u, const TransformSet& ts, double tol = 1e-8) {
    if (u.dim(0) != u.dim(1)) throw ShapeError("is_unitary_tensor: frontal slices are not square");
    const QTensor eye = identity_tensor(u.dim(0), ts);
    const QTensor uh = conjugate_transpose(u, ts);
    const double ref = eye.frobenius_norm();
    return (qt_product(uh, u, ts) - eye).frobenius_norm() <= tol * ref && (qt_product(u, uh, ts) - eye).frobenius_norm() <= tol * ref;
}

struct TqtOptions {
    SvdOptions svd{};
    /// sigma_k counts toward the rank when sigma_k > rank_tolerance * max(max_k sigma_k, 1).
    double rank_tolerance = 1e-10;
    /// Workers for the per-slice SVDs; 0 = hardware concurrency.
    unsigned threads = 0;
    /// Materialize the spatial-domain factors U, D, V. Truncation only needs
    /// the hat-domain factors, so large pipelines can skip this.
    bool spatial_factors = true;
};

/// Decomposition A = U * D * V^H under the transform-based product.
struct TqtSvd {
    /// Spatial-domain factors; empty when TqtOptions::spatial_factors is off.
    QTensor u;  // N1 x N1 x N3 x ... x NL
    QTensor d;  // N1 x N2 x N3 x ... x NL, f-diagonal
    QTensor v;  // N2 x N2 x N3 x ... x NL

    /// Hat-domain factors: slice t of u_hat / v_hat and slice_values[t] form
    /// the quaternion matrix SVD of slice t of to_hat(A).
    QTensor u_hat;
    QTensor v_hat;
    std::vector<std::vector<double>> slice_values;

    TransformSet transforms;
    Dims dims;
    /// sigma_k = ||D(k, k, :, ..., :)||_F for k < min(N1, N2), in the order
    /// induced by the descending per-slice values.
    std::vector<double> sigma;
    std::size_t rank = 0;
    double rank_tolerance = 1e-10;

    [[nodiscard]] std::size_t k_max() const { return sigma.size(); }
};

namespace detail {

/// Tensor of shape K x 1 x N3 x ... x NL whose tube k holds the hat-domain
/// diagonal D_hat(k, k, :, ..., :).
inline QTensor diagonal_tubes_hat(const TqtSvd& svd, std::size_t kmax) {
    Dims dims{kmax, 1};
    const auto& trailing = svd.transforms.trailing_dims();
    dims.insert(dims.end(), trailing.begin(), trailing.end());
    QTensor tubes(dims);
    for (std::size_t t = 0; t < svd.slice_values.size(); ++t)
        for (std::size_t k = 0; k < kmax; ++k) tubes.slice_plane(t, 0)(static_cast<Eigen::Index>(k), 0) = svd.slice_values[t][k];
    return tubes;
}

inline std::size_t count_rank(const std::vector<double>& sigma, double tol) {
    const double top = sigma.empty() ? 0.0 : *std::max_element(sigma.begin(), sigma.end());
    const double cut = tol * std::max(top, 1.0);
    return static_cast<std::size_t>(std::count_if(sigma.begin(), sigma.end(), [cut](double s) { return s > cut; }));
}

} // namespace detail

/// Decomposes A by a quaternion matrix SVD of every hat-domain frontal slice.
inline TqtSvd tqt_svd(const QTensor& a, const TransformSet& ts, const TqtOptions& opts = {}) {
    detail::check_transforms(a, ts, "tqt_svd");
    const std::size_t n1 = a.dim(0);
    const std::size_t n2 = a.dim(1);
    const std::size_t kmax = std::min(n1, n2);
    const auto& trailing = ts.trailing_dims();

    TqtSvd out;
    out.transforms = ts;
    out.dims = a.dims();
    out.rank_tolerance = opts.rank_tolerance;

    const QTensor ahat = to_hat(a, ts);
    Dims udims{n1, n1};
    Dims vdims{n2, n2};
    udims.insert(udims.end(), trailing.begin(), trailing.end());
    vdims.insert(vdims.end(), trailing.begin(), trailing.end());
    out.u_hat = QTensor(udims);
    out.v_hat = QTensor(vdims);
    out.slice_values.assign(ahat.num_slices(), {});

    std::vector<std::exception_ptr> failures(ahat.num_slices());
    parallel_for(ahat.num_slices(), opts.threads, [&](std::size_t t) {
        try {
            QSvd s = qmat_svd(ahat.frontal_slice(t), opts.svd);
            out.u_hat.set_frontal_slice(t, s.u);
            out.v_hat.set_frontal_slice(t, s.v);
            out.slice_values[t] = std::move(s.s);
        } catch (...) {
            failures[t] = std::current_exception();
        }
    });
    for (std::size_t t = 0; t < failures.size(); ++t) {
        if (!failures[t]) continue;
        try {
            std::rethrow_exception(failures[t]);
        } catch (const std::exception& e) {
            throw NumericalError("tqt_svd: frontal slice " + std::to_string(t) + ": " + e.what());
        }
    }

    const QTensor tubes = from_hat(detail::diagonal_tubes_hat(out, kmax), ts);
    out.sigma.resize(kmax);
    for (std::size_t k = 0; k < kmax; ++k) out.sigma[k] = tube_norm(tubes, k, 0);
    out.rank = detail::count_rank(out.sigma, opts.rank_tolerance);

    if (opts.spatial_factors) {
        QTensor dhat(a.dims());
        for (std::size_t t = 0; t < dhat.num_slices(); ++t)
            for (std::size_t k = 0; k < kmax; ++k)
                dhat.slice_plane(t, 0)(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = out.slice_values[t][k];
        out.u = from_hat(out.u_hat, ts);
        out.d = from_hat(dhat, ts);
        out.v = from_hat(out.v_hat, ts);
    }
    return out;
}

/// Number of tubes of D with norm above the rank tolerance.
inline std::size_t tqt_rank(const TqtSvd& svd) { return detail::count_rank(svd.sigma, svd.rank_tolerance); }

/// Sum of sigma_k^2 over k >= s (zero-based), i.e. the squared error that
/// the best rank-s approximation leaves under scaled-orthogonal transforms.
inline double tail_energy(const TqtSvd& svd, std::size_t s) {
    double acc = 0.0;
    for (std::size_t k = s; k < svd.sigma.size(); ++k) acc += svd.sigma[k] * svd.sigma[k];
    return acc;
}

struct Truncation {
    QTensor approx;
    /// False when the transforms are not scaled-orthogonal: the result is
    /// still the rank-s truncation, but it is not guaranteed to be optimal.
    bool optimal = false;
};

/// Rank-s approximation sum_{k<s} U(:,k,...) * D(k,k,...) * V(:,k,...)^H,
/// formed slice by slice in the hat domain and mapped back.
inline Truncation truncate(const TqtSvd& svd, std::size_t s) {
    const std::size_t kmax = svd.k_max();
    if (s < 1 || s > kmax) throw ShapeError("truncate: rank " + std::to_string(s) + " outside [1, " + std::to_string(kmax) + "]");
    QTensor hat(svd.dims);
    const auto rank = static_cast<Eigen::Index>(s);
    for (std::size_t t = 0; t < hat.num_slices(); ++t) {
        // scale the kept columns of U by the singular values, then multiply by V^H
        std::array<RealMatrix, 4> us;
        std::array<RealMatrix, 4> vh;
        for (int p = 0; p < 4; ++p) {
            us[p] = svd.u_hat.slice_plane(t, p).leftCols(rank);
            for (Eigen::Index c = 0; c < rank; ++c) us[p].col(c) *= svd.slice_values[t][static_cast<std::size_t>(c)];
            vh[p] = svd.v_hat.slice_plane(t, p).leftCols(rank).transpose();
            if (p > 0) vh[p] = -vh[p];
        }
        for (const auto& term : detail::kHamiltonTerms) {
            auto dst = hat.slice_plane(t, term.out);
            if (term.sign > 0) dst.noalias() += us[term.p] * vh[term.q];
            else dst.noalias() -= us[term.p] * vh[term.q];
        }
    }
    return {from_hat(hat, svd.transforms), svd.transforms.scaled_orthogonal()};
}

/// U * D * V^H from the spatial factors.
inline QTensor reconstruct(const TqtSvd& svd) {
    if (svd.u.size() == 0) throw ShapeError("reconstruct: spatial factors were not computed");
    return qt_product(qt_product(svd.u, svd.d, svd.transforms), conjugate_transpose(svd.v, svd.transforms), svd.transforms);
}

} // namespace qtsvd
