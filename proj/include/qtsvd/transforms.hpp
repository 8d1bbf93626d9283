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
#include "qtsvd/qsvd.hpp"
#include "qtsvd/qtensor.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace qtsvd {

/// Unit pure quaternion (i + j + k) / sqrt(3), the default QDFT axis.
inline Quaternion default_qdft_axis() {
    const double c = 1.0 / std::sqrt(3.0);
    return {0.0, c, c, c};
}

/// Unitary quaternion DFT matrix with entries
/// (1/sqrt(N)) exp(-mu 2 pi m n / N), m, n = 0..N-1.
///
/// `axis` must be a unit pure quaternion.
inline QMatrix qdft_matrix(std::size_t n, const Quaternion& axis = default_qdft_axis()) {
    if (n == 0) throw ShapeError("qdft_matrix: size must be positive");
    if (axis.w != 0.0 || std::abs(axis.norm2() - 1.0) > 1e-12) throw ShapeError("qdft_matrix: axis must be a unit pure quaternion");
    QMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            // reduce m*n mod N first so large products keep full angle accuracy
            const auto phase = static_cast<double>((r * c) % n);
            f.set(r, c, exp_axis(axis, -2.0 * std::numbers::pi * phase / static_cast<double>(n)) * scale);
        }
    }
    return f;
}

/// Orthonormal DCT-II matrix in the real part:
/// alpha_m cos(pi m (2n + 1) / (2N)), alpha_0 = sqrt(1/N), alpha_m = sqrt(2/N).
inline QMatrix qdct_matrix(std::size_t n) {
    if (n == 0) throw ShapeError("qdct_matrix: size must be positive");
    QMatrix c(n, n);
    const double nn = static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        const double alpha = r == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
        for (std::size_t col = 0; col < n; ++col) {
            const double v = alpha * std::cos(std::numbers::pi * static_cast<double>(r) * static_cast<double>(2 * col + 1) / (2.0 * nn));
            c.set(r, col, Quaternion{v});
        }
    }
    return c;
}

/// Unitary Q factor of an N x N matrix with independent standard normal
/// components drawn from mt19937_64(seed).
inline QMatrix random_unitary(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ShapeError("random_unitary: size must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    QMatrix g(n, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) {
            const double w = normal(rng);
            const double x = normal(rng);
            const double y = normal(rng);
            const double z = normal(rng);
            g.set(r, c, {w, x, y, z});
        }
    return qmat_qr(g).q;
}

/// U^H, where U is the full left singular factor of the mode-k unfolding of A.
///
/// U is taken from the SVD of the Hermitian Gram matrix M M^H (N_k x N_k),
/// whose left singular vectors coincide with those of M. This keeps the cost
/// independent of the number of unfolding columns.
inline QMatrix data_driven_transform(const QTensor& a, std::size_t mode) {
    const QMatrix m = unfold(a, mode);
    const QMatrix gram = m * hermitian_transpose(m);
    return hermitian_transpose(qmat_svd(gram).u);
}

enum class TransformKind { identity, random, qdft, qdct, data_driven };

inline std::string_view to_string(TransformKind k) {
    switch (k) {
    case TransformKind::identity: return "identity";
    case TransformKind::random: return "random";
    case TransformKind::qdft: return "qdft";
    case TransformKind::qdct: return "qdct";
    case TransformKind::data_driven: return "data-driven";
    }
    return "?";
}

inline std::optional<TransformKind> parse_transform_kind(std::string_view s) {
    for (auto k : {TransformKind::identity, TransformKind::random, TransformKind::qdft, TransformKind::qdct, TransformKind::data_driven})
        if (s == to_string(k)) return k;
    return std::nullopt;
}

namespace detail {

/// Identity tensors memoized per leading size P.
struct IdentityCache {
    std::mutex mutex;
    std::map<std::size_t, std::shared_ptr<const QTensor>> by_size;
};

} // namespace detail

/// Validated transforms T_3, ..., T_L with cached inverses.
///
/// When every T_k equals c_k U_k for a real c_k > 0 and a unitary U_k, the
/// set is flagged scaled-orthogonal and the factors c_k are recorded.
class TransformSet {
  public:
    TransformSet() = default;

    /// Checks sizes against `trailing` = (N3, ..., NL), inverts every matrix
    /// and detects scaled orthogonality with tolerance `tol`.
    static TransformSet validate(std::vector<QMatrix> matrices, const Dims& trailing, double tol = 1e-8) {
        if (matrices.size() != trailing.size()) {
            throw ShapeError("TransformSet: expected " + std::to_string(trailing.size()) + " transforms, got " + std::to_string(matrices.size()));
        }
        TransformSet ts;
        ts.dims_ = trailing;
        ts.scaled_orthogonal_ = true;
        for (std::size_t k = 0; k < matrices.size(); ++k) {
            const QMatrix& t = matrices[k];
            if (t.rows() != trailing[k] || t.cols() != trailing[k]) {
                throw ShapeError("TransformSet: transform for mode " + std::to_string(k + 3) + " is " + std::to_string(t.rows()) + "x" +
                                 std::to_string(t.cols()) + ", mode length is " + std::to_string(trailing[k]));
            }
            QMatrix inv = qmat_inverse(t);
            const double resid = (t * inv - QMatrix::identity(t.rows())).frobenius_norm();
            if (!(resid < tol)) {
                throw SingularMatrixError("TransformSet: transform for mode " + std::to_string(k + 3) + " is numerically singular (residual " +
                                          std::to_string(resid) + ")");
            }
            double c = 0.0;
            for (int p = 0; p < 4; ++p) c += t.plane_map(p).col(0).squaredNorm();
            c = std::sqrt(c);
            if (c > 0.0 && is_unitary(t * (1.0 / c), tol)) {
                ts.scales_.push_back(c);
            } else {
                ts.scaled_orthogonal_ = false;
                ts.scales_.push_back(0.0);
            }
            ts.inverses_.push_back(std::move(inv));
        }
        ts.matrices_ = std::move(matrices);
        if (!ts.scaled_orthogonal_) ts.scales_.clear();
        return ts;
    }

    static TransformSet identity(const Dims& trailing) {
        std::vector<QMatrix> mats;
        for (auto n : trailing) mats.push_back(QMatrix::identity(n));
        return validate(std::move(mats), trailing);
    }

    [[nodiscard]] const std::vector<QMatrix>& matrices() const { return matrices_; }
    [[nodiscard]] const std::vector<QMatrix>& inverses() const { return inverses_; }
    [[nodiscard]] const Dims& trailing_dims() const { return dims_; }
    [[nodiscard]] std::size_t size() const { return matrices_.size(); }
    [[nodiscard]] bool scaled_orthogonal() const { return scaled_orthogonal_; }
    /// Factors c_k; empty unless scaled_orthogonal().
    [[nodiscard]] const std::vector<double>& scales() const { return scales_; }

    [[nodiscard]] detail::IdentityCache& identity_cache() const { return *cache_; }

  private:
    std::vector<QMatrix> matrices_;
    std::vector<QMatrix> inverses_;
    Dims dims_;
    bool scaled_orthogonal_ = false;
    std::vector<double> scales_;
    std::shared_ptr<detail::IdentityCache> cache_ = std::make_shared<detail::IdentityCache>();
};

/// Same family for every trailing mode (N3, ..., NL). Random transforms use
/// seed + (mode - 3) for mode 3, 4, ...
inline TransformSet make_transforms(TransformKind kind, const Dims& trailing, std::uint64_t seed = 0) {
    std::vector<QMatrix> mats;
    for (std::size_t k = 0; k < trailing.size(); ++k) {
        const std::size_t n = trailing[k];
        switch (kind) {
        case TransformKind::identity: mats.push_back(QMatrix::identity(n)); break;
        case TransformKind::random: mats.push_back(random_unitary(n, seed + k)); break;
        case TransformKind::qdft: mats.push_back(qdft_matrix(n)); break;
        case TransformKind::qdct: mats.push_back(qdct_matrix(n)); break;
        case TransformKind::data_driven: throw ShapeError("make_transforms: data-driven transforms need the data tensor");
        }
    }
    return TransformSet::validate(std::move(mats), trailing);
}

/// As above, with data-driven transforms computed from the unfolding of `a`
/// along each trailing mode.
inline TransformSet make_transforms(TransformKind kind, const QTensor& a, std::uint64_t seed = 0) {
    if (kind != TransformKind::data_driven) return make_transforms(kind, a.trailing_dims(), seed);
    std::vector<QMatrix> mats;
    for (std::size_t mode = 2; mode < a.order(); ++mode) mats.push_back(data_driven_transform(a, mode));
    return TransformSet::validate(std::move(mats), a.trailing_dims());
}

} // namespace qtsvd
