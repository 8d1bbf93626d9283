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
#include "qtsvd/quaternion.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace qtsvd {

using Dims = std::vector<std::size_t>;

inline std::size_t dims_product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string dims_string(std::span<const std::size_t> dims) {
    std::string s;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += "x";
        s += std::to_string(dims[i]);
    }
    return s;
}

/// Dense quaternion tensor of order L >= 3 with dimensions (N1, ..., NL).
///
/// Entries are stored in four real planes (w, x, y, z), each in generalized
/// column-major order: the first index varies fastest. The element at the
/// zero-based multi-index (i1, ..., iL) has linear offset
/// i1 + N1 * (i2 + N2 * (i3 + ...)) within its plane. Frontal slice t (the
/// linear index over modes 3..L, in the same order) is the contiguous
/// N1 x N2 column-major block at offset t * N1 * N2.
///
/// All indices in this API are zero-based.
class QTensor {
  public:
    QTensor() = default;
    explicit QTensor(Dims dims) : dims_(std::move(dims)) {
        if (dims_.size() < 3) throw ShapeError("QTensor: order must be at least 3, got " + std::to_string(dims_.size()));
        for (auto d : dims_)
            if (d == 0) throw ShapeError("QTensor: zero-length mode in " + dims_string(dims_));
        size_ = dims_product(dims_);
        data_.assign(4 * size_, 0.0);
    }

    [[nodiscard]] const Dims& dims() const { return dims_; }
    [[nodiscard]] std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
    [[nodiscard]] std::size_t order() const { return dims_.size(); }
    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] std::size_t slice_rows() const { return dims_[0]; }
    [[nodiscard]] std::size_t slice_cols() const { return dims_[1]; }
    [[nodiscard]] std::size_t slice_size() const { return dims_[0] * dims_[1]; }
    /// Number of frontal slices, prod_{k>=3} N_k.
    [[nodiscard]] std::size_t num_slices() const { return size_ / slice_size(); }
    /// Trailing dimensions (N3, ..., NL).
    [[nodiscard]] Dims trailing_dims() const { return {dims_.begin() + 2, dims_.end()}; }

    [[nodiscard]] std::size_t offset(std::span<const std::size_t> idx) const {
        if (idx.size() != dims_.size()) throw ShapeError("QTensor: index has wrong order");
        std::size_t off = 0;
        for (std::size_t m = dims_.size(); m-- > 0;) {
            if (idx[m] >= dims_[m]) throw ShapeError("QTensor: index out of range in mode " + std::to_string(m + 1));
            off = off * dims_[m] + idx[m];
        }
        return off;
    }

    /// Linear slice number of the trailing multi-index (n3, ..., nL).
    [[nodiscard]] std::size_t slice_index(std::span<const std::size_t> trailing) const {
        if (trailing.size() != dims_.size() - 2) throw ShapeError("QTensor: slice index has wrong length");
        std::size_t t = 0;
        for (std::size_t m = trailing.size(); m-- > 0;) {
            if (trailing[m] >= dims_[m + 2]) throw ShapeError("QTensor: slice index out of range in mode " + std::to_string(m + 3));
            t = t * dims_[m + 2] + trailing[m];
        }
        return t;
    }

    [[nodiscard]] Quaternion at(std::size_t linear) const {
        return {data_[linear], data_[size_ + linear], data_[2 * size_ + linear], data_[3 * size_ + linear]};
    }
    void set_at(std::size_t linear, const Quaternion& q) {
        data_[linear] = q.w;
        data_[size_ + linear] = q.x;
        data_[2 * size_ + linear] = q.y;
        data_[3 * size_ + linear] = q.z;
    }
    [[nodiscard]] Quaternion operator()(std::span<const std::size_t> idx) const { return at(offset(idx)); }
    [[nodiscard]] Quaternion operator()(std::initializer_list<std::size_t> idx) const {
        return at(offset(std::span<const std::size_t>(idx.begin(), idx.size())));
    }
    void set(std::span<const std::size_t> idx, const Quaternion& q) { set_at(offset(idx), q); }
    void set(std::initializer_list<std::size_t> idx, const Quaternion& q) {
        set_at(offset(std::span<const std::size_t>(idx.begin(), idx.size())), q);
    }

    [[nodiscard]] std::span<double> plane(int p) { return {data_.data() + static_cast<std::size_t>(p) * size_, size_}; }
    [[nodiscard]] std::span<const double> plane(int p) const {
        return {data_.data() + static_cast<std::size_t>(p) * size_, size_};
    }
    [[nodiscard]] std::span<double> raw() { return data_; }
    [[nodiscard]] std::span<const double> raw() const { return data_; }

    /// Plane p of frontal slice t as an N1 x N2 column-major map.
    [[nodiscard]] RealMap slice_plane(std::size_t t, int p) {
        return {data_.data() + static_cast<std::size_t>(p) * size_ + t * slice_size(), static_cast<Eigen::Index>(dims_[0]),
                static_cast<Eigen::Index>(dims_[1])};
    }
    [[nodiscard]] ConstRealMap slice_plane(std::size_t t, int p) const {
        return {data_.data() + static_cast<std::size_t>(p) * size_ + t * slice_size(), static_cast<Eigen::Index>(dims_[0]),
                static_cast<Eigen::Index>(dims_[1])};
    }

    [[nodiscard]] QMatrix frontal_slice(std::size_t t) const {
        check_slice(t);
        QMatrix m(dims_[0], dims_[1]);
        for (int p = 0; p < 4; ++p) m.plane_map(p) = slice_plane(t, p);
        return m;
    }
    [[nodiscard]] QMatrix frontal_slice(std::span<const std::size_t> trailing) const { return frontal_slice(slice_index(trailing)); }

    void set_frontal_slice(std::size_t t, const QMatrix& m) {
        check_slice(t);
        if (m.rows() != dims_[0] || m.cols() != dims_[1]) throw ShapeError("QTensor::set_frontal_slice: slice shape mismatch");
        for (int p = 0; p < 4; ++p) slice_plane(t, p) = m.plane_map(p);
    }
    void set_frontal_slice(std::span<const std::size_t> trailing, const QMatrix& m) { set_frontal_slice(slice_index(trailing), m); }

    [[nodiscard]] double frobenius_norm() const {
        double acc = 0.0;
        for (double v : data_) acc += v * v;
        return std::sqrt(acc);
    }

    QTensor& operator+=(const QTensor& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    QTensor& operator-=(const QTensor& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    QTensor& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend bool operator==(const QTensor&, const QTensor&) = default;

  private:
    void check_slice(std::size_t t) const {
        if (t >= num_slices()) throw ShapeError("QTensor: frontal slice " + std::to_string(t) + " out of range");
    }
    void check_same(const QTensor& o) const {
        if (o.dims_ != dims_) throw ShapeError("QTensor: shape mismatch " + dims_string(dims_) + " vs " + dims_string(o.dims_));
    }

    Dims dims_;
    std::size_t size_ = 0;
    std::vector<double> data_;
};

inline QTensor operator+(QTensor a, const QTensor& b) { return a += b; }
inline QTensor operator-(QTensor a, const QTensor& b) { return a -= b; }
inline QTensor operator*(QTensor a, double s) { return a *= s; }
inline QTensor operator*(double s, QTensor a) { return a *= s; }

inline double frobenius_norm(const QTensor& a) { return a.frobenius_norm(); }

namespace detail {

/// Splits the tensor around `mode` as (left, N_mode, right) so that the
/// linear offset is l + left * (i_mode + N_mode * r).
struct ModeSplit {
    std::size_t left = 1;
    std::size_t extent = 1;
    std::size_t right = 1;
};

inline ModeSplit split_at(const Dims& dims, std::size_t mode) {
    if (mode >= dims.size()) throw ShapeError("invalid mode " + std::to_string(mode + 1) + " for order-" + std::to_string(dims.size()) + " tensor");
    ModeSplit s;
    for (std::size_t m = 0; m < mode; ++m) s.left *= dims[m];
    s.extent = dims[mode];
    for (std::size_t m = mode + 1; m < dims.size(); ++m) s.right *= dims[m];
    return s;
}

} // namespace detail

/// Mode-k unfolding (k zero-based): an N_k x (prod_{m != k} N_m) matrix whose
/// columns run over the remaining modes in ascending order, lowest mode fastest.
inline QMatrix unfold(const QTensor& a, std::size_t mode) {
    const auto s = detail::split_at(a.dims(), mode);
    QMatrix m(s.extent, s.left * s.right);
    for (int p = 0; p < 4; ++p) {
        const auto src = a.plane(p);
        auto dst = m.plane_map(p);
        for (std::size_t r = 0; r < s.right; ++r)
            for (std::size_t i = 0; i < s.extent; ++i)
                for (std::size_t l = 0; l < s.left; ++l)
                    dst(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + s.left * r)) = src[l + s.left * (i + s.extent * r)];
    }
    return m;
}

/// Inverse of unfold for a tensor of shape `dims`.
inline QTensor fold(const QMatrix& m, std::size_t mode, const Dims& dims) {
    QTensor a(dims);
    const auto s = detail::split_at(dims, mode);
    if (m.rows() != s.extent || m.cols() != s.left * s.right) {
        throw ShapeError("fold: matrix shape does not match mode-" + std::to_string(mode + 1) + " unfolding of " + dims_string(dims));
    }
    for (int p = 0; p < 4; ++p) {
        auto dst = a.plane(p);
        const auto src = m.plane_map(p);
        for (std::size_t r = 0; r < s.right; ++r)
            for (std::size_t i = 0; i < s.extent; ++i)
                for (std::size_t l = 0; l < s.left; ++l)
                    dst[l + s.left * (i + s.extent * r)] = src(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l + s.left * r));
    }
    return a;
}

/// Mode-k product A x_k T = fold(T * unfold(A, k)), with T multiplying from
/// the left. T.cols must equal N_k; the result has N_k replaced by T.rows.
inline QTensor mode_k_product(const QTensor& a, const QMatrix& t, std::size_t mode) {
    const auto s = detail::split_at(a.dims(), mode);
    if (t.cols() != s.extent) {
        throw ShapeError("mode_k_product: transform has " + std::to_string(t.cols()) + " columns, mode " + std::to_string(mode + 1) +
                         " has length " + std::to_string(s.extent));
    }
    Dims out_dims = a.dims();
    out_dims[mode] = t.rows();
    QTensor out(out_dims);
    const auto nk = static_cast<Eigen::Index>(s.extent);
    const auto nout = static_cast<Eigen::Index>(t.rows());

    if (s.left == 1) {
        // every plane is an N_k x right column-major matrix: C = T A
        const auto right = static_cast<Eigen::Index>(s.right);
        for (const auto& term : detail::kHamiltonTerms) {
            ConstRealMap src(a.plane(term.q).data(), nk, right);
            RealMap dst(out.plane(term.out).data(), nout, right);
            if (term.sign > 0) dst.noalias() += t.plane_map(term.p) * src;
            else dst.noalias() -= t.plane_map(term.p) * src;
        }
        return out;
    }

    // block r is a left x N_k column-major matrix: C_r = A_r T^T entrywise as T(i,j) * A(l,j)
    const auto left = static_cast<Eigen::Index>(s.left);
    for (std::size_t r = 0; r < s.right; ++r) {
        for (const auto& term : detail::kHamiltonTerms) {
            ConstRealMap src(a.plane(term.q).data() + r * s.left * s.extent, left, nk);
            RealMap dst(out.plane(term.out).data() + r * s.left * t.rows(), left, nout);
            if (term.sign > 0) dst.noalias() += src * t.plane_map(term.p).transpose();
            else dst.noalias() -= src * t.plane_map(term.p).transpose();
        }
    }
    return out;
}

/// Facewise product: every frontal slice of the result is the matrix product
/// of the corresponding slices of A (N1 x P) and B (P x N2).
inline QTensor facewise_product(const QTensor& a, const QTensor& b) {
    if (a.order() != b.order() || a.trailing_dims() != b.trailing_dims()) {
        throw ShapeError("facewise_product: trailing modes differ (" + dims_string(a.dims()) + " vs " + dims_string(b.dims()) + ")");
    }
    if (a.dim(1) != b.dim(0)) throw ShapeError("facewise_product: inner dimensions differ (" + dims_string(a.dims()) + " vs " + dims_string(b.dims()) + ")");
    Dims out_dims = a.dims();
    out_dims[1] = b.dim(1);
    QTensor out(out_dims);
    for (std::size_t t = 0; t < a.num_slices(); ++t) {
        for (const auto& term : detail::kHamiltonTerms) {
            auto dst = out.slice_plane(t, term.out);
            if (term.sign > 0) dst.noalias() += a.slice_plane(t, term.p) * b.slice_plane(t, term.q);
            else dst.noalias() -= a.slice_plane(t, term.p) * b.slice_plane(t, term.q);
        }
    }
    return out;
}

/// Slice-by-slice Hermitian transpose (N2 x N1 x N3 x ... result).
inline QTensor facewise_hermitian(const QTensor& a) {
    Dims out_dims = a.dims();
    std::swap(out_dims[0], out_dims[1]);
    QTensor out(out_dims);
    for (std::size_t t = 0; t < a.num_slices(); ++t) {
        out.slice_plane(t, 0) = a.slice_plane(t, 0).transpose();
        for (int p = 1; p < 4; ++p) out.slice_plane(t, p) = -a.slice_plane(t, p).transpose();
    }
    return out;
}

/// True when every off-diagonal entry of every frontal slice has modulus <= tol.
inline bool is_f_diagonal(const QTensor& a, double tol = 0.0) {
    const double tol2 = tol * tol;
    for (std::size_t t = 0; t < a.num_slices(); ++t) {
        for (std::size_t c = 0; c < a.slice_cols(); ++c) {
            for (std::size_t r = 0; r < a.slice_rows(); ++r) {
                if (r == c) continue;
                double m2 = 0.0;
                for (int p = 0; p < 4; ++p) {
                    const double v = a.slice_plane(t, p)(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                    m2 += v * v;
                }
                if (m2 > tol2) return false;
            }
        }
    }
    return true;
}

/// The tube A(n1, n2, :, ..., :), indexed by frontal slice number.
inline std::vector<Quaternion> tube(const QTensor& a, std::size_t n1, std::size_t n2) {
    if (n1 >= a.dim(0) || n2 >= a.dim(1)) throw ShapeError("tube: index out of range");
    std::vector<Quaternion> out(a.num_slices());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = a.at(t * a.slice_size() + n2 * a.dim(0) + n1);
    return out;
}

inline double tube_norm(const QTensor& a, std::size_t n1, std::size_t n2) {
    double acc = 0.0;
    for (const auto& q : tube(a, n1, n2)) acc += q.norm2();
    return std::sqrt(acc);
}

} // namespace qtsvd
