#pragma once

#include <stdexcept>
#include <vector>

#include "poly.hpp"

namespace unitcf {

/// Small dense matrix over an exact field-like type K (row-major).
template <class K>
struct Mat {
    size_t n = 0, m = 0;
    std::vector<K> a;

    Mat() = default;
    Mat(size_t rows, size_t cols, const K& fill) : n(rows), m(cols), a(rows * cols, fill) {}

    static Mat identity(size_t k, const K& zero, const K& one) {
        Mat r(k, k, zero);
        for (size_t i = 0; i < k; ++i) r(i, i) = one;
        return r;
    }
    static Mat identity(size_t k) { return identity(k, K(0), K(1)); }

    K& operator()(size_t i, size_t j) { return a[i * m + j]; }
    const K& operator()(size_t i, size_t j) const { return a[i * m + j]; }

    bool operator==(const Mat& o) const {
        if (n != o.n || m != o.m) return false;
        for (size_t i = 0; i < a.size(); ++i)
            if (!coeff_traits<K>::is_zero(a[i] - o.a[i])) return false;
        return true;
    }

    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.a) x = -x;
        return r;
    }

    Mat operator+(const Mat& o) const {
        Mat r = *this;
        for (size_t i = 0; i < a.size(); ++i) r.a[i] = r.a[i] + o.a[i];
        return r;
    }

    Mat operator-(const Mat& o) const { return *this + (-o); }

    Mat operator*(const Mat& o) const {
        if (m != o.n) throw std::invalid_argument("Mat: dimension mismatch");
        Mat r(n, o.m, a[0] - a[0]);
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < m; ++k)
                for (size_t j = 0; j < o.m; ++j) r(i, j) = r(i, j) + (*this)(i, k) * o(k, j);
        return r;
    }

    Mat operator*(const K& s) const {
        Mat r = *this;
        for (auto& x : r.a) x = x * s;
        return r;
    }

    std::vector<K> operator*(const std::vector<K>& v) const {
        if (m != v.size()) throw std::invalid_argument("Mat: vector dimension mismatch");
        std::vector<K> r(n, a[0] - a[0]);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < m; ++j) r[i] = r[i] + (*this)(i, j) * v[j];
        return r;
    }

    Mat transpose() const {
        Mat r(m, n, a[0]);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < m; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    /// Determinant by fraction-producing Gaussian elimination (K a field).
    K det() const {
        if (n != m) throw std::invalid_argument("Mat::det: not square");
        Mat w = *this;
        K d = w.a[0] - w.a[0] + K(1);
        for (size_t col = 0; col < n; ++col) {
            size_t piv = col;
            while (piv < n && coeff_traits<K>::is_zero(w(piv, col))) ++piv;
            if (piv == n) return w.a[0] - w.a[0];
            if (piv != col) {
                for (size_t j = 0; j < n; ++j) std::swap(w(piv, j), w(col, j));
                d = -d;
            }
            d = d * w(col, col);
            K inv = coeff_traits<K>::inverse(w(col, col));
            for (size_t i = col + 1; i < n; ++i) {
                K f = w(i, col) * inv;
                for (size_t j = col; j < n; ++j) w(i, j) = w(i, j) - f * w(col, j);
            }
        }
        return d;
    }

    /// Inverse via Gauss-Jordan (K a field); throws if singular.
    Mat inverse() const {
        if (n != m) throw std::invalid_argument("Mat::inverse: not square");
        Mat w = *this;
        Mat r = identity(n, a[0] - a[0], a[0] - a[0] + K(1));
        for (size_t col = 0; col < n; ++col) {
            size_t piv = col;
            while (piv < n && coeff_traits<K>::is_zero(w(piv, col))) ++piv;
            if (piv == n) throw std::domain_error("Mat::inverse: singular matrix");
            if (piv != col)
                for (size_t j = 0; j < n; ++j) {
                    std::swap(w(piv, j), w(col, j));
                    std::swap(r(piv, j), r(col, j));
                }
            K inv = coeff_traits<K>::inverse(w(col, col));
            for (size_t j = 0; j < n; ++j) {
                w(col, j) = w(col, j) * inv;
                r(col, j) = r(col, j) * inv;
            }
            for (size_t i = 0; i < n; ++i) {
                if (i == col || coeff_traits<K>::is_zero(w(i, col))) continue;
                K f = w(i, col);
                for (size_t j = 0; j < n; ++j) {
                    w(i, j) = w(i, j) - f * w(col, j);
                    r(i, j) = r(i, j) - f * r(col, j);
                }
            }
        }
        return r;
    }

    /// Minor: keep the given rows and columns (in order).
    Mat submatrix(const std::vector<size_t>& rows, const std::vector<size_t>& cols) const {
        Mat r(rows.size(), cols.size(), a[0]);
        for (size_t i = 0; i < rows.size(); ++i)
            for (size_t j = 0; j < cols.size(); ++j) r(i, j) = (*this)(rows[i], cols[j]);
        return r;
    }
};

using MatZ = Mat<Z>;
using MatQ = Mat<Q>;

/// Integer matrix determinant (exact, via rational elimination).
inline Z mat_det_z(const MatZ& m) {
    MatQ q(m.n, m.m, Q(0));
    for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Q(m.a[i]);
    Q d = q.det();
    if (d.get_den() != 1) throw std::logic_error("mat_det_z: non-integral determinant");
    return d.get_num();
}

/// Inverse of a unimodular-ish integer matrix as a rational matrix.
inline MatQ mat_inv_z(const MatZ& m) {
    MatQ q(m.n, m.m, Q(0));
    for (size_t i = 0; i < m.a.size(); ++i) q.a[i] = Q(m.a[i]);
    return q.inverse();
}

}  // namespace unitcf
