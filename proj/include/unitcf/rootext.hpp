#pragma once

#include <optional>
#include <vector>

#include "numberfield.hpp"
#include "pcf.hpp"

/// Root extraction in a number field: decide whether a given element is a
/// perfect m-th power (up to sign) and produce the root.  Candidates are
/// reconstructed q-adically at a rational prime q where the defining
/// polynomial splits completely, then verified by exact arithmetic, so a
/// returned root is always correct; a miss after the precision schedule is
/// conservative.
namespace unitcf {

namespace rootdetail {

using pcf::val_z;
using pcf::zinvmod;
using pcf::zmod;
using pcf::zpow;

/// Primitive integer polynomial proportional to f.
inline std::vector<Z> int_poly(const PolyQ& f) {
    Z lcm(1);
    for (const Q& c : f.c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Z> out;
    for (const Q& c : f.c) {
        Q v = c * Q(lcm);
        out.push_back(v.get_num());
    }
    return out;
}

inline Z eval_mod(const std::vector<Z>& f, const Z& x, const Z& m) {
    Z acc(0);
    for (size_t i = f.size(); i-- > 0;) acc = zmod(acc * x + f[i], m);
    return acc;
}

inline std::vector<Z> derivative(const std::vector<Z>& f) {
    std::vector<Z> d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(Z(static_cast<long>(i)) * f[i]);
    return d;
}

/// Rational a/b = c mod q^K with |a|, b <= bound, by the extended Euclidean
/// lattice walk; verified before returning.
inline std::optional<Q> rational_reconstruct(const Z& c, const Z& modulus, const Z& bound) {
    Z r0 = modulus, r1 = zmod(c, modulus);
    Z s0(0), s1(1);
    while (r1 >= bound) {
        Z q = r0 / r1;
        Z r2 = r0 - q * r1, s2 = s0 - q * s1;
        r0 = r1;
        r1 = r2;
        s0 = s1;
        s1 = s2;
    }
    if (s1 == 0) return std::nullopt;
    Z num = r1, den = s1;
    if (den < 0) {
        den = -den;
        num = -num;
    }
    if (den > bound) return std::nullopt;
    Z g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1) return std::nullopt;
    if (zmod(num - c * den, modulus) != 0) return std::nullopt;
    Q out(num);
    out /= Q(den);
    return out;
}

/// Solve V x = y mod q^K by Gaussian elimination; V must be invertible mod q.
inline std::optional<std::vector<Z>> solve_mod(std::vector<std::vector<Z>> V, std::vector<Z> y,
                                               const Z& modulus, long q) {
    size_t n = y.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && zmod(V[piv][col], Z(q)) == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(V[piv], V[col]);
        std::swap(y[piv], y[col]);
        Z inv = zinvmod(V[col][col], modulus);
        for (size_t j = 0; j < n; ++j) V[col][j] = zmod(V[col][j] * inv, modulus);
        y[col] = zmod(y[col] * inv, modulus);
        for (size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            Z f = V[i][col];
            if (f == 0) continue;
            for (size_t j = 0; j < n; ++j) V[i][j] = zmod(V[i][j] - f * V[col][j], modulus);
            y[i] = zmod(y[i] - f * y[col], modulus);
        }
    }
    return y;
}

}  // namespace rootdetail

/// An eta in F with eta^m == target, if the search finds one (m >= 1).
inline std::optional<FieldElement> nth_root_in_field(const FieldElement& target, long m) {
    using namespace rootdetail;
    if (m < 1) throw std::invalid_argument("nth_root_in_field: m must be positive");
    if (m == 1) return target;
    const NumberField& F = target.field();
    size_t n = static_cast<size_t>(F.degree());
    std::vector<Z> P = int_poly(F.defining_poly());
    std::vector<Z> dP = derivative(P);

    // A prime q > m where the defining polynomial has n distinct simple roots
    // and the target's coordinates are q-integral.
    long q = 0;
    std::vector<Z> roots;
    for (long cand = std::max<long>(m + 1, 5), tried = 0; tried < 2000 && q == 0; ++cand) {
        if (mpz_probab_prime_p(Z(cand).get_mpz_t(), 30) == 0) continue;
        ++tried;
        bool ok = P.back() % cand != 0;
        for (const Q& c : target.coords())
            if (c.get_den() % cand == 0) ok = false;
        if (!ok) continue;
        std::vector<Z> rs;
        for (long r = 0; r < cand && ok; ++r)
            if (eval_mod(P, Z(r), Z(cand)) == 0) {
                if (eval_mod(dP, Z(r), Z(cand)) == 0) ok = false;
                rs.push_back(Z(r));
            }
        if (ok && rs.size() == n) {
            q = cand;
            roots = std::move(rs);
        }
    }
    if (q == 0) return std::nullopt;

    for (long K = 16; K <= 256; K *= 2) {
        Z modulus = zpow(q, K);
        // Hensel-lift the simple roots of the defining polynomial.
        std::vector<Z> lifted = roots;
        for (Z& r : lifted)
            for (long k = 1; k < K; k *= 2) {
                Z mk = zpow(q, std::min(2 * k, K));
                r = zmod(r - eval_mod(P, r, mk) * zinvmod(eval_mod(dP, r, mk), mk), mk);
            }
        // Images of the target under each embedding, and the m-th roots of
        // each image mod q lifted to mod q^K.
        std::vector<std::vector<Z>> ys(n);
        for (size_t i = 0; i < n; ++i) {
            Z e(0), pw(1);
            for (const Q& c : target.coords()) {
                e = zmod(e + c.get_num() * zinvmod(c.get_den(), modulus) * pw, modulus);
                pw = zmod(pw * lifted[i], modulus);
            }
            if (zmod(e, Z(q)) == 0) return std::nullopt;  // not a q-adic unit
            for (long y0 = 1; y0 < q; ++y0) {
                if (zmod(zpow(y0, m) - e, Z(q)) != 0) continue;
                Z y(y0);
                for (long k = 1; k < K; k *= 2) {
                    Z mk = zpow(q, std::min(2 * k, K));
                    Z ym1(1);
                    for (long j = 0; j < m - 1; ++j) ym1 = zmod(ym1 * y, mk);
                    y = zmod(y - (zmod(ym1 * y, mk) - e) * zinvmod(Z(m) * ym1, mk), mk);
                }
                ys[i].push_back(y);
            }
            if (ys[i].empty()) return std::nullopt;  // image is not an m-th power
        }
        // Vandermonde rows (1, r_i, r_i^2, ...) for coordinate recovery.
        std::vector<std::vector<Z>> V(n, std::vector<Z>(n));
        for (size_t i = 0; i < n; ++i) {
            Z pw(1);
            for (size_t j = 0; j < n; ++j) {
                V[i][j] = pw;
                pw = zmod(pw * lifted[i], modulus);
            }
        }
        Z bound;
        mpz_sqrt(bound.get_mpz_t(), Z(modulus / 2).get_mpz_t());
        // Try every combination of root choices across the embeddings.
        std::vector<size_t> idx(n, 0);
        for (;;) {
            std::vector<Z> rhs(n);
            for (size_t i = 0; i < n; ++i) rhs[i] = ys[i][idx[i]];
            if (auto sol = solve_mod(V, rhs, modulus, q)) {
                std::vector<Q> coords;
                bool good = true;
                for (const Z& c : *sol) {
                    auto rec = rational_reconstruct(c, modulus, bound);
                    if (!rec) {
                        good = false;
                        break;
                    }
                    coords.push_back(*rec);
                }
                if (good) {
                    FieldElement eta = F.element(std::move(coords));
                    if (eta.pow(m) == target) return eta;
                }
            }
            size_t carry = 0;
            while (carry < n && ++idx[carry] == ys[carry].size()) idx[carry++] = 0;
            if (carry == n) break;
        }
    }
    return std::nullopt;
}

/// epsilon = sign * eta^m with the largest exponent 2 <= m <= m_max, if any.
struct RootReduction {
    FieldElement eta;
    long m = 1;
    int sign = 1;
};

inline std::optional<RootReduction> reduce_by_roots(const FieldElement& epsilon, long m_max = 6) {
    for (long m = m_max; m >= 2; --m)
        for (int sign : {1, -1}) {
            FieldElement tgt = sign > 0 ? epsilon : -epsilon;
            if (auto eta = nth_root_in_field(tgt, m)) return RootReduction{*eta, m, sign};
        }
    return std::nullopt;
}

}  // namespace unitcf
