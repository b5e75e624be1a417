#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "halfspace.hpp"
#include "numberfield.hpp"

namespace unitcf {

struct WrongSignature : std::runtime_error {
    WrongSignature() : std::runtime_error("field does not have unit rank one") {}
};
struct SplittingPatternMismatch : std::runtime_error {
    SplittingPatternMismatch()
        : std::runtime_error("archimedean places do not match the chi splitting pattern") {}
};

namespace gdetail {

/// Horner evaluation of rational coordinates at a field element.
inline RElem eval_at(const std::vector<Q>& coords, const RElem& x) {
    if (coords.empty()) return RElem(0);
    RElem acc(coords.back());
    for (size_t i = coords.size() - 1; i-- > 0;) acc = acc * x + RElem(coords[i]);
    return acc;
}

/// Reduce a polynomial in theta modulo z^2 - s z + p: value is c0 + c1 z.
inline std::pair<RElem, RElem> reduce_quad(const std::vector<Q>& coords, const RElem& s, const RElem& p) {
    RElem c0(0), c1(0);
    for (size_t i = coords.size(); i-- > 0;) {
        // multiply (c0 + c1 z) by z, then add coords[i]
        RElem n1 = c0 + c1 * s;
        RElem n0 = -(c1 * p);
        c1 = n1;
        c0 = n0 + RElem(coords[i]);
    }
    return {c0, c1};
}

inline MatR outer(const std::vector<RElem>& v) {
    size_t n = v.size();
    MatR m(n, n, RElem(0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) m(i, j) = v[i] * v[j];
    return m;
}

/// Gram contribution Re(sigma(w_i) conj(sigma(w_j))) of a complex place given
/// by the exact quadratic factor z^2 - s z + p of the defining polynomial.
inline MatR hermitian_contribution(const std::vector<std::pair<RElem, RElem>>& vals, const RElem& s,
                                   const RElem& p) {
    size_t n = vals.size();
    MatR m(n, n, RElem(0));
    RElem half(Q(1, 2));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i; j < n; ++j) {
            const auto& [a0, a1] = vals[i];
            const auto& [b0, b1] = vals[j];
            RElem re = a1 * b1 * p + a0 * b0 + (a1 * b0 + a0 * b1) * s * half;
            m(i, j) = m(j, i) = re;
        }
    return m;
}

}  // namespace gdetail

/// A flat geodesic on h^n whose Gram matrix is the matrix polynomial
/// Q(t) = sum_k M_k t^{e_k}; Heegner objects of both variants have this form
/// (with the display variable t, i.e. exponents already doubled).
class FlatGeodesic {
  public:
    struct Term {
        long e;  // exponent of t
        MatR M;  // symmetric PSD contribution
    };
    enum class Variant { generic, rank_one, chi };

    FlatGeodesic() = default;
    FlatGeodesic(std::vector<Term> terms, std::vector<long> lambda, std::vector<long> d,
                 Variant variant = Variant::generic)
        : terms_(std::move(terms)), lambda_(std::move(lambda)), d_(std::move(d)), variant_(variant) {}

    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<long>& lambda() const { return lambda_; }
    const std::vector<long>& d() const { return d_; }
    Variant variant() const { return variant_; }
    size_t dim() const { return terms_.at(0).M.n; }

    const NumberField& provenance_field() const { return field_; }
    const QBasis& provenance_basis() const { return basis_; }
    const FieldElement& chi_subfield_gen() const { return chi_gen_; }
    void set_provenance(NumberField F, QBasis w) {
        field_ = std::move(F);
        basis_ = std::move(w);
    }
    void set_chi_subfield_gen(FieldElement g) { chi_gen_ = std::move(g); }

    /// Gram matrix evaluated at a rational parameter t > 0.
    MatR gram_at(const Q& t) const {
        size_t n = dim();
        MatR m(n, n, RElem(0));
        for (const auto& term : terms_) {
            Q te = q_pow(t, term.e);
            for (size_t i = 0; i < n * n; ++i) m.a[i] = m.a[i] + term.M.a[i] * RElem(te);
        }
        return m;
    }

    GramPoint point_at(const Q& t) const { return GramPoint::make(gram_at(t), /*check=*/false); }

    /// Entries of Q(t) as polynomials in t.
    Mat<PolyR> gram_poly() const {
        size_t n = dim();
        long emax = 0;
        for (const auto& term : terms_) emax = std::max(emax, term.e);
        Mat<PolyR> m(n, n, PolyR{});
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                PolyR p;
                p.c.assign(static_cast<size_t>(emax + 1), RElem(0));
                for (const auto& term : terms_) p.c[static_cast<size_t>(term.e)] = term.M(i, j);
                p.normalize();
                m(i, j) = std::move(p);
            }
        return m;
    }

  private:
    std::vector<Term> terms_;
    std::vector<long> lambda_, d_;
    Variant variant_ = Variant::generic;
    NumberField field_;
    QBasis basis_;
    FieldElement chi_gen_;
};

/// Heegner geodesic of a rank-one unit group field: F real quadratic, complex
/// cubic or totally imaginary quartic. The scaled place sigma_1 carries t
/// (Gram exponent 2); sigma_2 is unscaled (exponent 0).
inline FlatGeodesic heegner_rank_one(const NumberField& F, const QBasis& w) {
    long r1 = F.r1(), r2 = F.r2();
    bool ok = (r1 == 2 && r2 == 0) || (r1 == 1 && r2 == 1) || (r1 == 0 && r2 == 2);
    if (!ok) throw WrongSignature();
    const EmbeddingData& E = F.embedding();
    size_t n = static_cast<size_t>(F.degree());

    auto real_vals = [&](const RElem& root) {
        std::vector<RElem> v;
        for (size_t i = 0; i < n; ++i) v.push_back(gdetail::eval_at(w[i].coords(), root));
        return v;
    };
    auto pair_vals = [&](const EmbeddingData::ComplexPair& pr) {
        std::vector<std::pair<RElem, RElem>> v;
        for (size_t i = 0; i < n; ++i) v.push_back(gdetail::reduce_quad(w[i].coords(), pr.s, pr.p));
        return v;
    };

    MatR M_scaled, M_unscaled;
    std::vector<long> lambda;
    if (r1 == 2) {
        // sigma_1 = the larger real root (+sqrt(d) in the standard family).
        M_scaled = gdetail::outer(real_vals(E.real_roots[1]));
        M_unscaled = gdetail::outer(real_vals(E.real_roots[0]));
        lambda = {1, 1};
    } else if (r1 == 1) {
        // sigma_1 = the real place; the complex place is unscaled.
        M_scaled = gdetail::outer(real_vals(E.real_roots[0]));
        const auto& pr = E.pairs[0];
        M_unscaled = gdetail::hermitian_contribution(pair_vals(pr), pr.s, pr.p);
        lambda = {1, 2};
    } else {
        // sigma_1 = the complex pair with the larger real part.
        const auto& p1 = E.pairs[1];
        const auto& p0 = E.pairs[0];
        M_scaled = gdetail::hermitian_contribution(pair_vals(p1), p1.s, p1.p);
        M_unscaled = gdetail::hermitian_contribution(pair_vals(p0), p0.s, p0.p);
        lambda = {2, 2};
    }
    FlatGeodesic g({{0, std::move(M_unscaled)}, {2, std::move(M_scaled)}}, std::move(lambda), {1, 0},
                   FlatGeodesic::Variant::rank_one);
    g.set_provenance(F, w);
    return g;
}

/// chi-component Heegner geodesic of a quadratic extension F / Q(subfield_gen)
/// in which exactly one (real) place of the subfield splits into the two real
/// places of F and all other places ramify into complex places. The split
/// places carry Gram exponents 4 (larger real root, v_11) and 0 (v_12); the
/// ramified complex places carry exponent 2.
inline FlatGeodesic heegner_chi(const NumberField& F, const FieldElement& subfield_gen, const QBasis& w) {
    long n = F.degree();
    long m = nfdetail::subfield_degree(subfield_gen);
    if (2 * m != n) throw NotQuadraticOver();
    if (F.r1() != 2) throw SplittingPatternMismatch();
    const EmbeddingData& E = F.embedding();
    size_t un = static_cast<size_t>(n);

    // The two real places must restrict to the same place of the subfield.
    RElem g0 = gdetail::eval_at(subfield_gen.coords(), E.real_roots[0]);
    RElem g1 = gdetail::eval_at(subfield_gen.coords(), E.real_roots[1]);
    if (!(g0 - g1).is_zero()) throw SplittingPatternMismatch();
    // Every complex place must restrict to a real place of the subfield.
    for (const auto& pr : E.pairs) {
        auto [c0, c1] = gdetail::reduce_quad(subfield_gen.coords(), pr.s, pr.p);
        (void)c0;
        if (!c1.is_zero()) throw SplittingPatternMismatch();
    }

    auto real_vals = [&](const RElem& root) {
        std::vector<RElem> v;
        for (size_t i = 0; i < un; ++i) v.push_back(gdetail::eval_at(w[i].coords(), root));
        return v;
    };
    MatR M4 = gdetail::outer(real_vals(E.real_roots[1]));  // v_11: larger real root
    MatR M0 = gdetail::outer(real_vals(E.real_roots[0]));  // v_12
    MatR M2(un, un, RElem(0));
    for (const auto& pr : E.pairs) {
        std::vector<std::pair<RElem, RElem>> vals;
        for (size_t i = 0; i < un; ++i) vals.push_back(gdetail::reduce_quad(w[i].coords(), pr.s, pr.p));
        MatR c = gdetail::hermitian_contribution(vals, pr.s, pr.p);
        for (size_t i = 0; i < un * un; ++i) M2.a[i] = M2.a[i] + c.a[i];
    }
    std::vector<long> lambda = {1, 1};
    for (size_t i = 0; i < E.pairs.size(); ++i) lambda.push_back(2);
    std::vector<FlatGeodesic::Term> terms{{0, std::move(M0)}};
    if (!E.pairs.empty()) terms.push_back({2, std::move(M2)});
    terms.push_back({4, std::move(M4)});
    FlatGeodesic g(std::move(terms), std::move(lambda), {2, 0, 1}, FlatGeodesic::Variant::chi);
    g.set_provenance(F, w);
    g.set_chi_subfield_gen(subfield_gen);
    return g;
}

/// Determinant of a small polynomial matrix by cofactor expansion.
inline PolyR poly_mat_det(const Mat<PolyR>& m) {
    size_t n = m.n;
    if (n == 0) return PolyR{std::vector<RElem>{RElem(1)}};
    if (n == 1) return m(0, 0);
    PolyR det;
    for (size_t i = 0; i < n; ++i) {
        std::vector<size_t> rows, cols;
        for (size_t r = 0; r < n; ++r)
            if (r != i) rows.push_back(r);
        for (size_t c = 1; c < n; ++c) cols.push_back(c);
        PolyR term = m(i, 0) * poly_mat_det(m.submatrix(rows, cols));
        det = (i % 2 == 0) ? det + term : det - term;
    }
    return det;
}

/// The window polynomials of a translated geodesic gamma^{-1} Q(t) gamma^{-t}:
/// the trailing-minor polynomials B_ij(t), C_i(t), and the denominator-cleared
/// membership inequalities of L_omega.
struct WindowPolys {
    size_t n = 0;
    Mat<PolyR> B;              // B(i-1, j-1) = B_ij(t), defined for i <= j
    std::vector<PolyR> C;      // C[i-2] = C_i(t), i = 2..n
    std::vector<PolyR> inequalities;  // all >= 0 simultaneously <=> membership
};

inline WindowPolys window_polys(const FlatGeodesic& geod, const MatZ& gamma, const Q& omega = Q(3, 4)) {
    size_t n = geod.dim();
    MatQ giq = mat_inv_z(gamma);
    Mat<PolyR> P(n, n, PolyR{});
    {
        Mat<PolyR> Qp = geod.gram_poly();
        // P = g^{-1} Q g^{-t}
        Mat<PolyR> tmp(n, n, PolyR{});
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) {
                if (giq(i, k) == 0) continue;
                RElem f{giq(i, k)};
                for (size_t j = 0; j < n; ++j) tmp(i, j) = tmp(i, j) + Qp(k, j) * f;
            }
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j)
                for (size_t k = 0; k < n; ++k) {
                    if (giq(j, k) == 0) continue;
                    P(i, j) = P(i, j) + tmp(i, k) * RElem{giq(j, k)};
                }
    }

    WindowPolys out;
    out.n = n;
    out.B = Mat<PolyR>(n, n, PolyR{});
    for (size_t j = 1; j <= n; ++j)
        for (size_t i = 1; i <= j; ++i) {
            std::vector<size_t> rows{i - 1}, cols;
            for (size_t k = j + 1; k <= n; ++k) rows.push_back(k - 1);
            for (size_t k = j; k <= n; ++k) cols.push_back(k - 1);
            out.B(i - 1, j - 1) = poly_mat_det(P.submatrix(rows, cols));
        }
    for (size_t i = 2; i <= n; ++i) {
        std::vector<size_t> idx{i - 2};
        for (size_t k = i + 1; k <= n; ++k) idx.push_back(k - 1);
        out.C.push_back(poly_mat_det(P.submatrix(idx, idx)));
    }

    // |x_ij| <= 1/2  <=>  B_jj +/- 2 B_ij >= 0 (cleared by B_jj > 0).
    for (size_t j = 2; j <= n; ++j)
        for (size_t i = 1; i < j; ++i) {
            const PolyR& bjj = out.B(j - 1, j - 1);
            PolyR two_bij = out.B(i - 1, j - 1) * RElem(2);
            out.inequalities.push_back(bjj - two_bij);
            out.inequalities.push_back(bjj + two_bij);
        }
    // Lovasz:  omega r_{i+1}^2 <= r_i^2 + x_{i,i+1}^2 r_{i+1}^2
    //          <=>  C_{i+1} - omega B_{i+1,i+1} >= 0 (cleared by B_{i+2,i+2}).
    for (size_t i = 1; i < n; ++i)
        out.inequalities.push_back(out.C[i - 1] - out.B(i, i) * RElem(omega));
    return out;
}

/// The connected membership window [s, t] of gamma^{-1} geod in L_omega
/// around the seed t0 (in the display variable t).
inline RealInterval window(const FlatGeodesic& geod, const MatZ& gamma, const Q& omega, const Q& t0) {
    WindowPolys wp = window_polys(geod, gamma, omega);
    return solve_poly_inequalities(wp.inequalities, CertReal(t0));
}

}  // namespace unitcf
