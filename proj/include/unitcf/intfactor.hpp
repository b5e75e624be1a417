#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "poly.hpp"

namespace unitcf {

/// Raised when the recombination search would exceed its budget; callers may
/// fall back to working with a non-minimized squarefree modulus.
struct FactorBudgetExceeded : std::runtime_error {
    FactorBudgetExceeded() : std::runtime_error("polynomial factorization budget exceeded") {}
};

namespace fdetail {

// ---------- arithmetic mod a small prime p ----------

using FpPoly = std::vector<long long>;  // lowest degree first, coeffs in [0,p)

inline void fp_normalize(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline long long fp_inv(long long a, long long p) {
    long long t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        long long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    return ((t % p) + p) % p;
}

inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, long long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    fp_normalize(r);
    return r;
}

inline void fp_divmod(const FpPoly& a, const FpPoly& b, long long p, FpPoly& q, FpPoly& r) {
    r = a;
    q.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, 0);
    long long binv = fp_inv(b.back(), p);
    while (r.size() >= b.size() && !r.empty()) {
        long long f = r.back() * binv % p;
        size_t k = r.size() - b.size();
        q[k] = f;
        for (size_t i = 0; i < b.size(); ++i) {
            r[k + i] = ((r[k + i] - f * b[i]) % p + p) % p;
        }
        fp_normalize(r);
        if (r.size() < b.size()) break;
    }
    fp_normalize(q);
}

inline FpPoly fp_mod(const FpPoly& a, const FpPoly& b, long long p) {
    FpPoly q, r;
    fp_divmod(a, b, p, q, r);
    return r;
}

inline FpPoly fp_gcd(FpPoly a, FpPoly b, long long p) {
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        long long inv = fp_inv(a.back(), p);
        for (auto& c : a) c = c * inv % p;
    }
    return a;
}

inline FpPoly fp_derivative(const FpPoly& f, long long p) {
    FpPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back((long long)(i % p) * f[i] % p);
    fp_normalize(r);
    return r;
}

/// Berlekamp factorization of a squarefree monic polynomial mod p.
inline std::vector<FpPoly> berlekamp(const FpPoly& f, long long p) {
    size_t n = f.size() - 1;
    if (n == 1) return {f};
    // Frobenius matrix: column i holds x^(i*p) mod f.
    std::vector<FpPoly> pows(n);
    // x^p mod f by square-and-multiply.
    FpPoly xp = {0, 1};
    {
        FpPoly acc = {1};
        FpPoly base = fp_mod(FpPoly{0, 1}, f, p);
        long long e = p;
        while (e > 0) {
            if (e & 1) acc = fp_mod(fp_mul(acc, base, p), f, p);
            base = fp_mod(fp_mul(base, base, p), f, p);
            e >>= 1;
        }
        xp = acc;
    }
    pows[0] = {1};
    for (size_t i = 1; i < n; ++i) pows[i] = fp_mod(fp_mul(pows[i - 1], xp, p), f, p);
    // Kernel of (Q - I).
    std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < pows[i].size(); ++j) m[j][i] = pows[i][j];
        m[i][i] = ((m[i][i] - 1) % p + p) % p;
    }
    // Gaussian elimination, track pivot columns.
    std::vector<long long> pivot_col(n, -1);
    size_t rank = 0;
    for (size_t col = 0; col < n && rank < n; ++col) {
        size_t piv = rank;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(m[piv], m[rank]);
        long long inv = fp_inv(m[rank][col], p);
        for (size_t j = 0; j < n; ++j) m[rank][j] = m[rank][j] * inv % p;
        for (size_t i = 0; i < n; ++i) {
            if (i == rank || m[i][col] == 0) continue;
            long long f2 = m[i][col];
            for (size_t j = 0; j < n; ++j) m[i][j] = ((m[i][j] - f2 * m[rank][j]) % p + p) % p;
        }
        pivot_col[rank] = static_cast<long long>(col);
        ++rank;
    }
    std::vector<FpPoly> basis;
    std::vector<bool> is_pivot(n, false);
    for (size_t i = 0; i < rank; ++i) is_pivot[static_cast<size_t>(pivot_col[i])] = true;
    for (size_t col = 0; col < n; ++col) {
        if (is_pivot[col]) continue;
        FpPoly v(n, 0);
        v[col] = 1;
        for (size_t i = 0; i < rank; ++i) {
            size_t pc = static_cast<size_t>(pivot_col[i]);
            v[pc] = ((-m[i][col]) % p + p) % p;
        }
        fp_normalize(v);
        basis.push_back(v);
    }
    // Kernel dimension equals the number of irreducible factors (the
    // constant vector is one of the enumerated basis elements).
    size_t r = basis.size();
    std::vector<FpPoly> factors = {f};
    for (const auto& v : basis) {
        if (factors.size() >= r) break;
        std::vector<FpPoly> next;
        for (const auto& g : factors) {
            if (g.size() <= 2) {
                next.push_back(g);
                continue;
            }
            FpPoly rem = g;
            for (long long s = 0; s < p && rem.size() > 1; ++s) {
                FpPoly vs = fp_mod(v, rem, p);
                if (vs.empty()) vs = {0};
                vs[0] = ((vs[0] - s) % p + p) % p;
                fp_normalize(vs);
                if (vs.empty()) continue;  // v == s mod rem: no split from this s
                FpPoly h = fp_gcd(rem, vs, p);
                if (h.size() > 1 && h.size() < rem.size()) {
                    next.push_back(h);
                    FpPoly q, rr;
                    fp_divmod(rem, h, p, q, rr);
                    rem = q;
                }
            }
            next.push_back(rem);
        }
        factors = std::move(next);
    }
    return factors;
}

// ---------- arithmetic mod p^k with mpz coefficients ----------

using ZPoly = std::vector<Z>;  // lowest degree first

inline void zp_normalize(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ZPoly zp_reduce(const ZPoly& f, const Z& q) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        mpz_mod(r[i].get_mpz_t(), f[i].get_mpz_t(), q.get_mpz_t());
    }
    zp_normalize(r);
    return r;
}

inline ZPoly zp_mul(const ZPoly& a, const ZPoly& b, const Z& q) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Z(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return zp_reduce(r, q);
}

inline ZPoly zp_add(const ZPoly& a, const ZPoly& b, const Z& q) {
    ZPoly r(std::max(a.size(), b.size()), Z(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return zp_reduce(r, q);
}

inline ZPoly zp_sub(const ZPoly& a, const ZPoly& b, const Z& q) {
    ZPoly r(std::max(a.size(), b.size()), Z(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return zp_reduce(r, q);
}

/// divmod by a monic polynomial mod q.
inline void zp_divmod_monic(const ZPoly& a, const ZPoly& b, const Z& q, ZPoly& quo, ZPoly& rem) {
    rem = a;
    quo.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Z(0));
    while (rem.size() >= b.size() && !rem.empty()) {
        Z f = rem.back();
        size_t k = rem.size() - b.size();
        quo[k] = f;
        for (size_t i = 0; i < b.size(); ++i) {
            rem[k + i] -= f * b[i];
            mpz_mod(rem[k + i].get_mpz_t(), rem[k + i].get_mpz_t(), q.get_mpz_t());
        }
        zp_normalize(rem);
        if (rem.size() < b.size()) break;
    }
    zp_normalize(quo);
}

/// Quadratic Hensel lifting of a coprime pair: given f = g*h (mod m) with
/// g, h monic and s*g + t*h = 1 (mod m), produce the lift mod m^2.
struct HenselPair {
    ZPoly g, h, s, t;
};

inline HenselPair hensel_step(const ZPoly& f, const HenselPair& in, const Z& m) {
    Z m2 = m * m;
    ZPoly e = zp_sub(zp_reduce(f, m2), zp_mul(in.g, in.h, m2), m2);
    ZPoly qq, rr;
    zp_divmod_monic(zp_mul(in.s, e, m2), in.h, m2, qq, rr);
    ZPoly g1 = zp_add(in.g, zp_add(zp_mul(in.t, e, m2), zp_mul(qq, in.g, m2), m2), m2);
    ZPoly h1 = zp_add(in.h, rr, m2);
    ZPoly b = zp_sub(zp_add(zp_mul(in.s, g1, m2), zp_mul(in.t, h1, m2), m2), ZPoly{Z(1)}, m2);
    ZPoly cc, dd;
    zp_divmod_monic(zp_mul(in.s, b, m2), h1, m2, cc, dd);
    ZPoly s1 = zp_sub(in.s, dd, m2);
    ZPoly t1 = zp_sub(in.t, zp_add(zp_mul(in.t, b, m2), zp_mul(cc, g1, m2), m2), m2);
    return {g1, h1, s1, t1};
}

/// Extended gcd of coprime polynomials mod p; returns s, t with s*a + t*b = 1.
inline void fp_ext_gcd(const FpPoly& a, const FpPoly& b, long long p, FpPoly& s, FpPoly& t) {
    FpPoly r0 = a, r1 = b;
    FpPoly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
    auto sub_mul = [p](const FpPoly& x, const FpPoly& q, const FpPoly& y) {
        FpPoly prod = fp_mul(q, y, p);
        FpPoly r(std::max(x.size(), prod.size()), 0);
        for (size_t i = 0; i < x.size(); ++i) r[i] = x[i];
        for (size_t i = 0; i < prod.size(); ++i) r[i] = ((r[i] - prod[i]) % p + p) % p;
        fp_normalize(r);
        return r;
    };
    while (!r1.empty()) {
        FpPoly q, rem;
        fp_divmod(r0, r1, p, q, rem);
        FpPoly s2 = sub_mul(s0, q, s1), t2 = sub_mul(t0, q, t1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    // r0 is a nonzero constant; scale.
    long long inv = fp_inv(r0[0], p);
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    s = s0;
    t = t0;
}

inline ZPoly fp_to_zp(const FpPoly& f) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = Z(static_cast<long>(f[i]));
    return r;
}

/// Multifactor Hensel lifting: modular factors of monic f mod p, lifted to
/// mod p^(2^levels) >= target.
inline std::vector<ZPoly> lift_tree(const ZPoly& f, const std::vector<FpPoly>& facs, long long p,
                                    int levels) {
    if (facs.size() == 1) {
        Z q(static_cast<long>(p));
        for (int i = 0; i < levels; ++i) q = q * q;
        return {zp_reduce(f, q)};
    }
    size_t half = facs.size() / 2;
    FpPoly gp = {1}, hp = {1};
    for (size_t i = 0; i < half; ++i) gp = fp_mul(gp, facs[i], p);
    for (size_t i = half; i < facs.size(); ++i) hp = fp_mul(hp, facs[i], p);
    FpPoly sp, tp;
    fp_ext_gcd(gp, hp, p, sp, tp);
    HenselPair pair{fp_to_zp(gp), fp_to_zp(hp), fp_to_zp(sp), fp_to_zp(tp)};
    Z m(static_cast<long>(p));
    for (int i = 0; i < levels; ++i) {
        pair = hensel_step(f, pair, m);
        m = m * m;
    }
    std::vector<FpPoly> left(facs.begin(), facs.begin() + static_cast<long>(half));
    std::vector<FpPoly> right(facs.begin() + static_cast<long>(half), facs.end());
    auto lf = lift_tree(pair.g, left, p, levels);
    auto rf = lift_tree(pair.h, right, p, levels);
    lf.insert(lf.end(), rf.begin(), rf.end());
    return lf;
}

inline Z symmetric_rep(const Z& x, const Z& q) {
    Z r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t());
    if (r * 2 > q) r -= q;
    return r;
}

}  // namespace fdetail

/// Factor a squarefree monic polynomial with integer coefficients into monic
/// irreducible integer factors (Zassenhaus). Throws FactorBudgetExceeded if
/// the recombination search is too large.
inline std::vector<PolyQ> factor_squarefree_monic_z(const PolyQ& f_in) {
    using namespace fdetail;
    long n = f_in.degree();
    if (n <= 0) throw std::invalid_argument("factor: need degree >= 1");
    for (const Q& cq : f_in.c)
        if (cq.get_den() != 1) throw std::invalid_argument("factor: non-integer coefficients");
    if (f_in.lc() != 1) throw std::invalid_argument("factor: not monic");
    if (n == 1) return {f_in};

    ZPoly f(f_in.c.size());
    for (size_t i = 0; i < f_in.c.size(); ++i) f[i] = f_in.c[i].get_num();

    // Choose a prime keeping f squarefree; among a few candidates take the one
    // with the fewest modular factors.
    static const long long primes[] = {3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                       43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    long long best_p = 0;
    std::vector<FpPoly> best_facs;
    int tried = 0;
    for (long long p : primes) {
        FpPoly fp(f.size());
        bool ok = true;
        for (size_t i = 0; i < f.size(); ++i) {
            Z r;
            mpz_mod_ui(r.get_mpz_t(), f[i].get_mpz_t(), static_cast<unsigned long>(p));
            fp[i] = r.get_si();
        }
        if (fp.back() != 1) ok = false;  // cannot happen for monic, kept for safety
        if (ok) {
            FpPoly g = fp_gcd(fp, fp_derivative(fp, p), p);
            if (g.size() > 1) ok = false;
        }
        if (!ok) continue;
        auto facs = berlekamp(fp, p);
        if (best_p == 0 || facs.size() < best_facs.size()) {
            best_p = p;
            best_facs = facs;
        }
        if (++tried >= 4 || best_facs.size() == 1) break;
    }
    if (best_p == 0) throw std::runtime_error("factor: no usable small prime");
    if (best_facs.size() == 1) return {f_in};

    // Coefficient bound for monic factors, then lift past twice the bound.
    Z norm2 = 0;
    for (const Z& a : f) norm2 += a * a;
    Z bound = (z_pow(Z(2), static_cast<unsigned long>(n)) * (sqrt(norm2) + 1)) * 2 + 1;
    int levels = 0;
    {
        Z q(static_cast<long>(best_p));
        while (q < bound) {
            q = q * q;
            ++levels;
        }
    }
    auto lifted = lift_tree(f, best_facs, best_p, levels);
    Z q(static_cast<long>(best_p));
    for (int i = 0; i < levels; ++i) q = q * q;

    // Recombination.
    std::vector<PolyQ> out;
    std::vector<ZPoly> pool = lifted;
    ZPoly rem_f = f;
    long budget = 1 << 22;
    auto try_subset = [&](const std::vector<size_t>& idx) -> bool {
        ZPoly prod = {Z(1)};
        for (size_t i : idx) prod = zp_mul(prod, pool[i], q);
        PolyQ cand;
        cand.c.resize(prod.size());
        for (size_t i = 0; i < prod.size(); ++i) cand.c[i] = Q(symmetric_rep(prod[i], q));
        cand.normalize();
        PolyQ rf;
        rf.c.resize(rem_f.size());
        for (size_t i = 0; i < rem_f.size(); ++i) rf.c[i] = Q(rem_f[i]);
        rf.normalize();
        auto [quo, rr] = rf.divmod(cand);
        if (!rr.is_zero()) return false;
        for (const Q& cc : quo.c)
            if (cc.get_den() != 1) return false;
        out.push_back(cand);
        // Remove used modular factors and update the remaining polynomial.
        std::vector<ZPoly> np;
        for (size_t i = 0; i < pool.size(); ++i)
            if (std::find(idx.begin(), idx.end(), i) == idx.end()) np.push_back(pool[i]);
        pool = std::move(np);
        rem_f.assign(quo.c.size(), Z(0));
        for (size_t i = 0; i < quo.c.size(); ++i) rem_f[i] = quo.c[i].get_num();
        return true;
    };
    size_t subset_size = 1;
    while (2 * subset_size <= pool.size()) {
        // Enumerate size-subset_size subsets of the current pool.
        std::vector<size_t> idx(subset_size);
        for (size_t i = 0; i < subset_size; ++i) idx[i] = i;
        bool advanced = false;
        for (;;) {
            if (--budget < 0) throw FactorBudgetExceeded();
            if (try_subset(idx)) {
                advanced = true;
                break;  // pool changed; restart at this size
            }
            // next combination
            long i = static_cast<long>(subset_size) - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] ==
                                 pool.size() - subset_size + static_cast<size_t>(i))
                --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (size_t j = static_cast<size_t>(i) + 1; j < subset_size; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!advanced) ++subset_size;
    }
    // Whatever remains is irreducible.
    PolyQ rf;
    rf.c.resize(rem_f.size());
    for (size_t i = 0; i < rem_f.size(); ++i) rf.c[i] = Q(rem_f[i]);
    rf.normalize();
    if (rf.degree() >= 1) out.push_back(rf);
    std::sort(out.begin(), out.end(),
              [](const PolyQ& a, const PolyQ& b) { return a.degree() < b.degree(); });
    return out;
}

/// Factor a squarefree rational polynomial into monic irreducible factors
/// over Q (leading coefficient dropped).
inline std::vector<PolyQ> factor_squarefree_q(const PolyQ& f_in) {
    PolyQ f = poly_primitive(f_in);
    long n = f.degree();
    if (n <= 0) return {};
    Z lcz = f.lc().get_num();
    if (lcz == 1) return factor_squarefree_monic_z(f);
    // y = lc*x turns f into a monic integer polynomial lc^(n-1) f(y/lc).
    PolyQ g;
    g.c.resize(f.c.size());
    for (long i = 0; i <= n; ++i) {
        // coefficient of y^i: f_i * lc^(n-1-i)
        g.c[static_cast<size_t>(i)] =
            f.c[static_cast<size_t>(i)] * Q(z_pow(lcz, static_cast<unsigned long>(n - 1 - i >= 0 ? n - 1 - i : 0)));
    }
    // the above gives lc^(n-1) f(y/lc) with y-coefficients f_i lc^(n-1-i)
    g.c[static_cast<size_t>(n)] = 1;
    g.normalize();
    auto gf = factor_squarefree_monic_z(g);
    std::vector<PolyQ> out;
    for (const auto& G : gf) {
        // back-substitute y = lc*x and renormalize monic.
        PolyQ h;
        h.c.resize(G.c.size());
        for (size_t i = 0; i < G.c.size(); ++i)
            h.c[i] = G.c[i] * q_pow(Q(lcz), static_cast<long>(i));
        h.normalize();
        out.push_back(h.monic());
    }
    return out;
}

/// Irreducibility over Q (degree >= 1 required). Non-squarefree polynomials
/// of degree >= 2 are reducible.
inline bool is_irreducible_q(const PolyQ& f) {
    long n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    PolyQ g = poly_gcd(f, f.derivative());
    if (g.degree() > 0) return false;
    return factor_squarefree_q(f).size() == 1;
}

}  // namespace unitcf
