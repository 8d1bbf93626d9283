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
#include "qtsvd/quaternion.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qtsvd {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMap = Eigen::Map<RealMatrix>;
using ConstRealMap = Eigen::Map<const RealMatrix>;

/// Dense quaternion matrix.
///
/// Storage is four parallel real planes (w, x, y, z), each rows x cols in
/// column-major order, held back to back in one buffer: plane p starts at
/// offset p * rows * cols. Entry (r, c) of plane p lives at
/// p * rows * cols + c * rows + r.
class QMatrix {
  public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(4 * rows * cols, 0.0) {}

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.set(i, i, Quaternion{1.0});
        return m;
    }

    /// Builds a matrix from its four real planes. Each plane must be rows x cols.
    static QMatrix from_planes(const RealMatrix& w, const RealMatrix& x, const RealMatrix& y, const RealMatrix& z) {
        QMatrix m(static_cast<std::size_t>(w.rows()), static_cast<std::size_t>(w.cols()));
        const std::array<const RealMatrix*, 4> src{&w, &x, &y, &z};
        for (int p = 0; p < 4; ++p) {
            if (src[p]->rows() != w.rows() || src[p]->cols() != w.cols()) throw ShapeError("QMatrix::from_planes: plane shape mismatch");
            m.plane_map(p) = *src[p];
        }
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] std::size_t size() const { return rows_ * cols_; }
    [[nodiscard]] bool empty() const { return size() == 0; }

    [[nodiscard]] Quaternion operator()(std::size_t r, std::size_t c) const {
        const std::size_t o = c * rows_ + r;
        const std::size_t n = size();
        return {data_[o], data_[n + o], data_[2 * n + o], data_[3 * n + o]};
    }

    void set(std::size_t r, std::size_t c, const Quaternion& q) {
        const std::size_t o = c * rows_ + r;
        const std::size_t n = size();
        data_[o] = q.w;
        data_[n + o] = q.x;
        data_[2 * n + o] = q.y;
        data_[3 * n + o] = q.z;
    }

    [[nodiscard]] std::span<double> plane(int p) { return {data_.data() + static_cast<std::size_t>(p) * size(), size()}; }
    [[nodiscard]] std::span<const double> plane(int p) const {
        return {data_.data() + static_cast<std::size_t>(p) * size(), size()};
    }
    [[nodiscard]] RealMap plane_map(int p) {
        return {data_.data() + static_cast<std::size_t>(p) * size(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }
    [[nodiscard]] ConstRealMap plane_map(int p) const {
        return {data_.data() + static_cast<std::size_t>(p) * size(), static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_)};
    }

    [[nodiscard]] std::span<const double> raw() const { return data_; }
    [[nodiscard]] std::span<double> raw() { return data_; }

    [[nodiscard]] double frobenius_norm() const {
        double acc = 0.0;
        for (double v : data_) acc += v * v;
        return std::sqrt(acc);
    }

    /// Sub-matrix of the first `ncols` columns.
    [[nodiscard]] QMatrix left_cols(std::size_t ncols) const {
        if (ncols > cols_) throw ShapeError("QMatrix::left_cols: too many columns");
        QMatrix m(rows_, ncols);
        for (int p = 0; p < 4; ++p) m.plane_map(p) = plane_map(p).leftCols(static_cast<Eigen::Index>(ncols));
        return m;
    }

    QMatrix& operator+=(const QMatrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    QMatrix& operator-=(const QMatrix& o) {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    QMatrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }

    friend bool operator==(const QMatrix&, const QMatrix&) = default;

  private:
    void check_same(const QMatrix& o) const {
        if (o.rows_ != rows_ || o.cols_ != cols_) throw ShapeError("QMatrix: shape mismatch in elementwise operation");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
inline QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
inline QMatrix operator*(QMatrix a, double s) { return a *= s; }
inline QMatrix operator*(double s, QMatrix a) { return a *= s; }

namespace detail {

/// One term of the Hamilton product expanded over real components:
/// out[plane] += sign * first[p] * second[q].
struct HamiltonTerm {
    int out;
    int p;
    int q;
    double sign;
};

inline constexpr std::array<HamiltonTerm, 16> kHamiltonTerms{{
    {0, 0, 0, 1.0}, {0, 1, 1, -1.0}, {0, 2, 2, -1.0}, {0, 3, 3, -1.0},
    {1, 0, 1, 1.0}, {1, 1, 0, 1.0},  {1, 2, 3, 1.0},  {1, 3, 2, -1.0},
    {2, 0, 2, 1.0}, {2, 1, 3, -1.0}, {2, 2, 0, 1.0},  {2, 3, 1, 1.0},
    {3, 0, 3, 1.0}, {3, 1, 2, 1.0},  {3, 2, 1, -1.0}, {3, 3, 0, 1.0},
}};

} // namespace detail

/// Matrix product with left-to-right Hamilton products in every entry.
inline QMatrix qmat_mul(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("qmat_mul: inner dimensions differ (" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + ")");
    }
    QMatrix c(a.rows(), b.cols());
    if (c.empty() || a.cols() == 0) return c;
    for (const auto& t : detail::kHamiltonTerms) {
        auto out = c.plane_map(t.out);
        if (t.sign > 0) out.noalias() += a.plane_map(t.p) * b.plane_map(t.q);
        else out.noalias() -= a.plane_map(t.p) * b.plane_map(t.q);
    }
    return c;
}

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) { return qmat_mul(a, b); }

/// Hermitian (conjugate) transpose.
inline QMatrix hermitian_transpose(const QMatrix& a) {
    QMatrix h(a.cols(), a.rows());
    h.plane_map(0) = a.plane_map(0).transpose();
    for (int p = 1; p < 4; ++p) h.plane_map(p) = -a.plane_map(p).transpose();
    return h;
}

/// Complex adjoint chi(Q) of Q = A + B j (A = w + x i, B = y + z i):
///
///     chi(Q) = [[ A,        B       ],
///               [ -conj(B), conj(A) ]]
///
/// chi is an injective algebra homomorphism, so chi(PQ) = chi(P) chi(Q) and
/// chi(Q^H) = chi(Q)^H.
inline ComplexMatrix complex_adjoint(const QMatrix& q) {
    const auto m = static_cast<Eigen::Index>(q.rows());
    const auto n = static_cast<Eigen::Index>(q.cols());
    ComplexMatrix a(m, n);
    ComplexMatrix b(m, n);
    a.real() = q.plane_map(0);
    a.imag() = q.plane_map(1);
    b.real() = q.plane_map(2);
    b.imag() = q.plane_map(3);
    ComplexMatrix chi(2 * m, 2 * n);
    chi.topLeftCorner(m, n) = a;
    chi.topRightCorner(m, n) = b;
    chi.bottomLeftCorner(m, n) = -b.conjugate();
    chi.bottomRightCorner(m, n) = a.conjugate();
    return chi;
}

/// Inverse of complex_adjoint. The four blocks are averaged, which projects a
/// slightly perturbed adjoint back onto the quaternion structure.
inline QMatrix from_complex_adjoint(const ComplexMatrix& chi) {
    if (chi.rows() % 2 != 0 || chi.cols() % 2 != 0) throw ShapeError("from_complex_adjoint: odd dimensions");
    const Eigen::Index m = chi.rows() / 2;
    const Eigen::Index n = chi.cols() / 2;
    const ComplexMatrix a = 0.5 * (chi.topLeftCorner(m, n) + chi.bottomRightCorner(m, n).conjugate());
    const ComplexMatrix b = 0.5 * (chi.topRightCorner(m, n) - chi.bottomLeftCorner(m, n).conjugate());
    return QMatrix::from_planes(a.real(), a.imag(), b.real(), b.imag());
}

/// Inverse through the complex adjoint: chi(A)^-1 = chi(A^-1).
inline QMatrix qmat_inverse(const QMatrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("qmat_inverse: matrix is not square");
    if (a.empty()) return a;
    const ComplexMatrix chi = complex_adjoint(a);
    Eigen::FullPivLU<ComplexMatrix> lu(chi);
    if (!lu.isInvertible()) {
        throw SingularMatrixError("qmat_inverse: matrix is singular (adjoint rank " + std::to_string(lu.rank()) + " of " +
                                  std::to_string(chi.rows()) + ")");
    }
    const ComplexMatrix inv = lu.inverse();
    if (!inv.allFinite()) throw SingularMatrixError("qmat_inverse: inverse is not finite");
    return from_complex_adjoint(inv);
}

/// True when A^H A and A A^H are both within `tol` of I in Frobenius norm.
inline bool is_unitary(const QMatrix& a, double tol = 1e-9) {
    if (a.rows() != a.cols()) throw ShapeError("is_unitary: matrix is not square");
    const QMatrix eye = QMatrix::identity(a.rows());
    const QMatrix ah = hermitian_transpose(a);
    return (ah * a - eye).frobenius_norm() <= tol && (a * ah - eye).frobenius_norm() <= tol;
}

struct QrResult {
    QMatrix q;
    QMatrix r;
};

/// Thin QR by modified Gram-Schmidt under <u, v> = u^H v.
///
/// Projection coefficients r_ij = q_i^H a_j multiply the basis column from
/// the right (a_j -= q_i r_ij), which is what makes Q^H Q = I hold for a
/// non-commutative scalar field. One reorthogonalization pass is applied.
/// R has a real nonnegative diagonal.
inline QrResult qmat_qr(const QMatrix& a, double tol = 1e-12) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (m < n) throw ShapeError("qmat_qr: needs rows >= cols");

    std::vector<std::vector<Quaternion>> cols(n, std::vector<Quaternion>(m));
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < m; ++r) cols[c][r] = a(r, c);

    QMatrix rmat(n, n);
    std::vector<Quaternion> coeff(n);
    for (std::size_t j = 0; j < n; ++j) {
        auto& v = cols[j];
        double original = 0.0;
        for (const auto& e : v) original += e.norm2();
        original = std::sqrt(original);
        std::fill(coeff.begin(), coeff.end(), Quaternion{});
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const auto& qi = cols[i];
                Quaternion rij;
                for (std::size_t r = 0; r < m; ++r) rij += qi[r].conj() * v[r];
                for (std::size_t r = 0; r < m; ++r) v[r] -= qi[r] * rij;
                coeff[i] += rij;
            }
        }
        double nrm = 0.0;
        for (const auto& e : v) nrm += e.norm2();
        nrm = std::sqrt(nrm);
        if (!(nrm > tol * original) || nrm == 0.0) {
            throw DegenerateInputError("qmat_qr: column " + std::to_string(j) + " is linearly dependent on the previous columns");
        }
        for (auto& e : v) e = e / nrm;
        for (std::size_t i = 0; i < j; ++i) rmat.set(i, j, coeff[i]);
        rmat.set(j, j, Quaternion{nrm});
    }

    QMatrix q(m, n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < m; ++r) q.set(r, c, cols[c][r]);
    return {std::move(q), std::move(rmat)};
}

} // namespace qtsvd
