#pragma once

#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "realalg.hpp"

namespace unitcf {

using MatR = Mat<RElem>;

/// Point of h^n = GL_n(R) / R^x O(n), represented by the Gram matrix
/// Q = g g^t of a class representative g, modulo positive scaling.
class GramPoint {
  public:
    GramPoint() = default;

    /// Wrap a symmetric matrix; certifies positive definiteness via the signs
    /// of all leading principal minors unless check is disabled.
    static GramPoint make(MatR q, bool check = true) {
        if (q.n != q.m) throw std::invalid_argument("GramPoint: not square");
        if (check) {
            for (size_t i = 0; i < q.n; ++i)
                for (size_t j = i + 1; j < q.m; ++j)
                    if (!(q(i, j) - q(j, i)).is_zero())
                        throw std::invalid_argument("GramPoint: not symmetric");
            std::vector<size_t> idx;
            for (size_t k = 0; k < q.n; ++k) {
                idx.push_back(k);
                if (q.submatrix(idx, idx).det().sign() <= 0)
                    throw std::invalid_argument("GramPoint: not positive definite");
            }
        }
        GramPoint p;
        p.q_ = std::move(q);
        return p;
    }

    const MatR& gram() const { return q_; }
    size_t dim() const { return q_.n; }

  private:
    MatR q_;
};

namespace hsdetail {

/// Trailing-minor determinant B_{ij} (1-based, i <= j <= n+1): determinant of
/// the submatrix with rows {i, j+1, ..., n} and columns {j, ..., n}.
/// B_{n+1,n+1} = 1 by convention.
inline RElem minor_B(const MatR& q, size_t i, size_t j) {
    size_t n = q.n;
    if (j == n + 1) return RElem(1);
    std::vector<size_t> rows{i - 1}, cols;
    for (size_t k = j + 1; k <= n; ++k) rows.push_back(k - 1);
    for (size_t k = j; k <= n; ++k) cols.push_back(k - 1);
    return q.submatrix(rows, cols).det();
}

/// C_i (1-based, 2 <= i <= n): determinant of the submatrix of B~_{i-1,i-1}
/// with its second row and column (those through q_{ii}) removed, i.e. rows
/// and columns {i-1, i+1, ..., n}.
inline RElem minor_C(const MatR& q, size_t i) {
    size_t n = q.n;
    std::vector<size_t> idx{i - 2};
    for (size_t k = i + 1; k <= n; ++k) idx.push_back(k - 1);
    return q.submatrix(idx, idx).det();
}

}  // namespace hsdetail

/// Iwasawa coordinates of a point z = [X(x_ij) Y_1(r_i)]: x strictly upper
/// triangular, r_i > 0 normalized so that r_n = 1. r_sq carries the r_i^2
/// in field form; r carries the certified square roots.
struct IwasawaCoords {
    MatR x;                    // x(i,j) for i < j; zero elsewhere, ones on the diagonal
    std::vector<RElem> r_sq;   // r_i^2, with r_sq[n-1] = 1
    std::vector<CertReal> r;   // r_i = sqrt(r_sq[i])
};

/// Iwasawa coordinates via the trailing-minor formulas
/// r_i^2 = B_ii / B_{i+1,i+1}, x_ij = B_ij / B_jj (then normalized r_n = 1).
inline IwasawaCoords iwasawa(const GramPoint& P) {
    const MatR& q = P.gram();
    size_t n = q.n;
    std::vector<RElem> Bdiag(n + 2);
    for (size_t j = 1; j <= n; ++j) Bdiag[j] = hsdetail::minor_B(q, j, j);
    Bdiag[n + 1] = RElem(1);

    IwasawaCoords out;
    out.x = MatR::identity(n, RElem(0), RElem(1));
    for (size_t j = 2; j <= n; ++j)
        for (size_t i = 1; i < j; ++i)
            out.x(i - 1, j - 1) = hsdetail::minor_B(q, i, j) / Bdiag[j];
    out.r_sq.resize(n);
    // Unnormalized r_n^2 = B_nn; divide all r_i^2 by it so that r_n = 1.
    for (size_t i = 1; i <= n; ++i) out.r_sq[i - 1] = Bdiag[i] / (Bdiag[i + 1] * Bdiag[n]);
    out.r.reserve(n);
    for (size_t i = 0; i < n; ++i) out.r.push_back(CertReal::sqrt_of(out.r_sq[i]));
    return out;
}

/// Membership in the LLL-reduced set L_omega:
/// |x_ij| <= 1/2 and omega r_{i+1}^2 <= r_i^2 + x_{i,i+1}^2 r_{i+1}^2,
/// decided exactly on the denominator-cleared forms.
inline bool membership_lll(const GramPoint& P, const Q& omega = Q(3, 4)) {
    if (omega < Q(3, 4) || omega > 1) throw std::invalid_argument("membership_lll: omega outside [3/4, 1]");
    const MatR& q = P.gram();
    size_t n = q.n;
    std::vector<RElem> Bdiag(n + 3, RElem(1));
    for (size_t j = 1; j <= n; ++j) Bdiag[j] = hsdetail::minor_B(q, j, j);
    // |x_ij| <= 1/2  <=>  B_jj -/+ 2 B_ij >= 0 (B_jj > 0).
    for (size_t j = 2; j <= n; ++j)
        for (size_t i = 1; i < j; ++i) {
            RElem bij = hsdetail::minor_B(q, i, j);
            if ((Bdiag[j] - RElem(2) * bij).sign() < 0) return false;
            if ((Bdiag[j] + RElem(2) * bij).sign() < 0) return false;
        }
    // Lovasz: B_ii B_{i+2,i+2} + B_{i,i+1}^2 - omega B_{i+1,i+1}^2 >= 0.
    for (size_t i = 1; i < n; ++i) {
        RElem bii1 = hsdetail::minor_B(q, i, i + 1);
        RElem lhs = Bdiag[i] * Bdiag[i + 2] + bii1 * bii1 - RElem(omega) * Bdiag[i + 1] * Bdiag[i + 1];
        if (lhs.sign() < 0) return false;
    }
    return true;
}

/// Membership in the Siegel set Sigma_{a,b}: |x_ij| <= b, r_i / r_{i+1} >= a.
/// a may be rational or a symbolic square root (e.g. sqrt(3)/2 passed as
/// CertReal::sqrt_of(3/4)); both are handled exactly via a^2.
inline bool membership_siegel(const GramPoint& P, const CertReal& a, const Q& b) {
    if (a.sign() <= 0 || b <= 0) throw std::invalid_argument("membership_siegel: parameters must be positive");
    RElem a_sq;
    if (a.is_rational())
        a_sq = RElem(a.rational_value() * a.rational_value());
    else if (a.is_sqrt())
        a_sq = a.sqrt_argument();
    else
        throw std::invalid_argument("membership_siegel: a must be rational or a square root");
    const MatR& q = P.gram();
    size_t n = q.n;
    std::vector<RElem> Bdiag(n + 3, RElem(1));
    for (size_t j = 1; j <= n; ++j) Bdiag[j] = hsdetail::minor_B(q, j, j);
    for (size_t j = 2; j <= n; ++j)
        for (size_t i = 1; i < j; ++i) {
            RElem bij = hsdetail::minor_B(q, i, j);
            if ((RElem(b) * Bdiag[j] - bij).sign() < 0) return false;
            if ((RElem(b) * Bdiag[j] + bij).sign() < 0) return false;
        }
    // r_i / r_{i+1} >= a  <=>  B_ii B_{i+2,i+2} - a^2 B_{i+1,i+1}^2 >= 0.
    for (size_t i = 1; i < n; ++i) {
        RElem lhs = Bdiag[i] * Bdiag[i + 2] - a_sq * Bdiag[i + 1] * Bdiag[i + 1];
        if (lhs.sign() < 0) return false;
    }
    return true;
}

/// Left action gamma . [Q] = [gamma Q gamma^t] of an integer matrix.
inline GramPoint act(const MatZ& gamma, const GramPoint& P) {
    size_t n = P.dim();
    if (gamma.n != n || gamma.m != n) throw std::invalid_argument("act: dimension mismatch");
    MatR g(n, n, RElem(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) g(i, j) = RElem(Q(gamma(i, j)));
    return GramPoint::make(g * P.gram() * g.transpose(), /*check=*/false);
}

/// LLL reduction of a point: returns U in SL_n(Z) such that
/// act(U^{-1}, P) lies in L_omega. Gram-based LLL with all comparisons
/// decided by the exact sign oracle; det U is normalized to +1 by a column
/// negation (which leaves |x_ij| and r_i, hence membership, unchanged).
inline MatZ lll_reduce(const GramPoint& P, const Q& omega = Q(3, 4)) {
    size_t n = P.dim();
    // The set L_omega is phrased for the *reversed* Gram-Schmidt order
    // (X upper-triangular): run textbook LLL on the index-reversed Gram.
    MatR M(n, n, RElem(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) M(i, j) = P.gram()(n - 1 - i, n - 1 - j);
    MatZ T = MatZ::identity(n);  // current basis rows = T * (reversed original)

    std::vector<RElem> Bv(n);
    MatR mu(n, n, RElem(0));
    auto gram_schmidt = [&]() {
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < i; ++j) {
                RElem s = M(i, j);
                for (size_t l = 0; l < j; ++l) s = s - mu(j, l) * mu(i, l) * Bv[l];
                mu(i, j) = s / Bv[j];
            }
            RElem bi = M(i, i);
            for (size_t l = 0; l < i; ++l) bi = bi - mu(i, l) * mu(i, l) * Bv[l];
            Bv[i] = bi;
        }
    };
    auto row_op = [&](size_t i, size_t j, const Z& qz) {
        // rows: b_i <- b_i - q b_j; Gram: M <- E M E^t.
        Q qq(qz);
        for (size_t c = 0; c < n; ++c) M(i, c) = M(i, c) - RElem(qq) * M(j, c);
        for (size_t r = 0; r < n; ++r) M(r, i) = M(r, i) - RElem(qq) * M(r, j);
        for (size_t c = 0; c < n; ++c) T(i, c) -= qz * T(j, c);
    };
    auto row_swap = [&](size_t i, size_t j) {
        for (size_t c = 0; c < n; ++c) {
            std::swap(M(i, c), M(j, c));
            std::swap(T(i, c), T(j, c));
        }
        for (size_t r = 0; r < n; ++r) std::swap(M(r, i), M(r, j));
    };

    size_t k = 1;
    while (k < n) {
        gram_schmidt();
        for (size_t jj = k; jj-- > 0;) {
            Z qz = (mu(k, jj) + RElem(Q(1, 2))).floor();
            if (qz != 0) {
                row_op(k, jj, qz);
                gram_schmidt();
            }
        }
        RElem lhs = Bv[k] + mu(k, k - 1) * mu(k, k - 1) * Bv[k - 1] - RElem(omega) * Bv[k - 1];
        if (lhs.sign() >= 0) {
            ++k;
        } else {
            row_swap(k - 1, k);
            k = k > 1 ? k - 1 : 1;
        }
    }

    // T (J Q J) T^t is reduced; in the original order U^{-1} = J T J.
    MatZ Uinv(n, n, Z(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) Uinv(i, j) = T(n - 1 - i, n - 1 - j);
    MatQ UinvQ = mat_inv_z(Uinv);
    MatZ U(n, n, Z(0));
    for (size_t i = 0; i < n * n; ++i) {
        if (UinvQ.a[i].get_den() != 1) throw std::logic_error("lll_reduce: non-integral inverse");
        U.a[i] = UinvQ.a[i].get_num();
    }
    if (mat_det_z(U) == -1) {
        // Restore det +1 by a sign change that leaves membership invariant:
        // negate everything when the dimension is odd, else the last column.
        if (n % 2 == 1)
            for (auto& v : U.a) v = -v;
        else
            for (size_t i = 0; i < n; ++i) U(i, n - 1) = -U(i, n - 1);
    }
    return U;
}

}  // namespace unitcf
