#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "numberfield.hpp"

/// The {infinity, p}-continued fraction algorithm for imaginary quadratic
/// irrationals: exact expansion, pure periodicity, fundamental norm-one
/// p-units, Pell-like equations, and the order of [p-ideal] in the class
/// group.  Everything is computed over Q; p-adic data comes from rational
/// valuations plus Hensel lifts of a square root of -d whose precision is
/// grown on demand.
namespace unitcf::pcf {

struct NotSplit : std::runtime_error {
    explicit NotSplit(const std::string& what) : std::runtime_error("NotSplit: " + what) {}
};

struct BudgetExhausted : std::runtime_error {
    long max_loops;
    explicit BudgetExhausted(long budget)
        : std::runtime_error("expansion loop budget exhausted"), max_loops(budget) {}
};

struct PurePeriodicityViolated : std::runtime_error {
    PurePeriodicityViolated() : std::runtime_error("expansion of theta is not purely periodic") {}
};

struct Singular : std::runtime_error {
    Singular() : std::runtime_error("matrix is singular") {}
};

// ---------------------------------------------------------------------------
// Elementary p-adic helpers over Z and Q.
// ---------------------------------------------------------------------------

inline Z zpow(long p, long k) {
    Z r;
    mpz_pow_ui(r.get_mpz_t(), Z(p).get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

/// Non-negative remainder a mod m.
inline Z zmod(const Z& a, const Z& m) {
    Z r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Z zinvmod(const Z& a, const Z& m) {
    Z r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw std::domain_error("zinvmod: not invertible");
    return r;
}

/// Exact p-adic valuation of a nonzero integer.
inline long val_z(Z a, long p) {
    if (a == 0) throw std::invalid_argument("val_z: zero");
    long v = 0;
    Z q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), Z(p).get_mpz_t());
        if (r != 0) return v;
        a = q;
        ++v;
    }
}

/// Exact p-adic valuation of a nonzero rational.
inline long val_q(const Q& a, long p) {
    if (a == 0) throw std::invalid_argument("val_q: zero");
    return val_z(a.get_num(), p) - val_z(a.get_den(), p);
}

/// Residue mod p^K of a rational with non-negative valuation.
inline Z residue_q(const Q& a, long p, long K) {
    if (K <= 0) return Z(0);
    Z m = zpow(p, K);
    if (a == 0) return Z(0);
    if (val_q(a, p) < 0) throw std::domain_error("residue_q: negative valuation");
    return zmod(a.get_num() * zinvmod(a.get_den(), m), m);
}

inline Z qfloor(const Q& a) {
    Z r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_num().get_mpz_t(), a.get_den().get_mpz_t());
    return r;
}

inline bool is_squarefree(const Z& d) {
    for (Z f = 2; f * f <= d; ++f)
        if (d % (f * f) == 0) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Hensel lifting of sqrt(-d) and the fixed embedding F -> Q_p.
// ---------------------------------------------------------------------------

/// A residue r mod p^K with r^2 + d = 0 mod p^K, congruent mod p to the seed
/// root (or to the smallest positive root when seed < 0).
inline Z hensel_sqrt(const Z& d, long p, long K, long seed = -1) {
    if (p <= 2) throw NotSplit("p must be an odd prime");
    if (mpz_probab_prime_p(Z(p).get_mpz_t(), 40) == 0) throw NotSplit("p must be prime");
    if (d % p == 0) throw NotSplit("p ramifies (p divides d)");
    Z r0(-1);
    if (seed >= 0) {
        Z s = zmod(Z(seed), Z(p));
        if (zmod(s * s + d, Z(p)) != 0) throw NotSplit("seed is not a square root of -d mod p");
        r0 = s;
    } else {
        for (Z s = 1; s < p; ++s)
            if (zmod(s * s + d, Z(p)) == 0) {
                r0 = s;
                break;
            }
        if (r0 < 0) throw NotSplit("-d is a quadratic non-residue mod p");
    }
    // Newton iteration doubles the precision each round.
    Z r = r0;
    long k = 1;
    while (k < K) {
        k *= 2;
        Z m = zpow(p, k);
        r = zmod(r - (r * r + d) * zinvmod(2 * r, m), m);
    }
    return zmod(r, zpow(p, K));
}

/// The embedding F = Q(sqrt(-d)) -> Q_p selected by a root of x^2 + d mod p,
/// with a cache of Hensel lifts grown on demand.
class PadicEmbedding {
public:
    PadicEmbedding(Z d, long p, long seed_root = -1) : d_(std::move(d)), p_(p) {
        if (d_ <= 0) throw std::invalid_argument("PadicEmbedding: d must be positive");
        root_ = hensel_sqrt(d_, p_, 1, seed_root);
        cache_[1] = root_;
    }

    long p() const { return p_; }
    const Z& d() const { return d_; }
    /// The chosen root mod p.
    const Z& root() const { return root_; }

    /// The Hensel lift of the chosen root to precision p^K.
    Z root_mod(long K) const {
        auto it = cache_.lower_bound(K);
        if (it == cache_.end()) {
            long k = cache_.rbegin()->first;
            Z r = cache_.rbegin()->second;
            while (k < K) {
                k *= 2;
                Z m = zpow(p_, k);
                r = zmod(r - (r * r + d_) * zinvmod(2 * r, m), m);
                cache_[k] = r;
            }
            it = cache_.lower_bound(K);
        }
        return zmod(it->second, zpow(p_, K));
    }

    /// The embedding attached to the conjugate prime above p (root -> -root).
    PadicEmbedding conjugate() const {
        return PadicEmbedding(d_, p_, static_cast<long>(zmod(-root_, Z(p_)).get_si()));
    }

private:
    Z d_;
    long p_;
    Z root_;
    mutable std::map<long, Z> cache_;
};

// ---------------------------------------------------------------------------
// Field plumbing for F = Q(sqrt(-d)); elements live in the basis (1, g) with
// g = sqrt(-d), so coords (c0, c1) mean c0 + c1 g, Re = c0, |.|^2 = c0^2+d c1^2.
// ---------------------------------------------------------------------------

/// The d of an imaginary quadratic field created from x^2 + d.
inline Z field_d(const NumberField& F) {
    const PolyQ& f = F.defining_poly();
    if (F.degree() != 2 || f.c[1] != 0 || f.c[2] != 1 || f.c[0].get_den() != 1 || f.c[0] <= 0)
        throw std::invalid_argument("expected a field defined by x^2 + d, d > 0");
    return f.c[0].get_num();
}

inline NumberField make_field(const Z& d) {
    return NumberField::create(PolyQ({Q(d), Q(0), Q(1)}));
}

inline FieldElement conj(const FieldElement& a) {
    return a.field().element({a.coords()[0], -a.coords()[1]});
}

/// A point of the upper half plane in F: Im(value) > 0 exactly.
struct QuadIrr {
    FieldElement value;

    explicit QuadIrr(FieldElement v) : value(std::move(v)) {
        if (value.field().degree() != 2)
            throw std::invalid_argument("QuadIrr: field must be quadratic");
        field_d(value.field());
        if (value.coords()[1] <= 0) throw std::invalid_argument("QuadIrr: Im must be positive");
    }
};

/// Exact p-adic valuation of a nonzero element of F under the embedding, and
/// (when the valuation is non-negative) its residue mod p^modulus_exp.
struct ValRes {
    long v;
    Z residue;
};

inline ValRes valuation_and_residue(const FieldElement& z, const PadicEmbedding& emb,
                                    long modulus_exp) {
    const Q& c0 = z.coords()[0];
    const Q& c1 = z.coords()[1];
    long p = emb.p();
    if (c0 == 0 && c1 == 0) throw std::invalid_argument("valuation_and_residue: zero");
    if (c1 == 0) {
        long v = val_q(c0, p);
        return {v, v >= 0 ? residue_q(c0, p, modulus_exp) : Z(0)};
    }
    long vc1 = val_q(c1, p);
    // The image is c0 + c1*lambda with lambda the Hensel root; evaluating at a
    // lift mod p^K perturbs it by valuation >= vc1 + K, so grow K until the
    // valuation (and, if wanted, the residue) is pinned down.
    for (long K = std::max<long>(1, modulus_exp - vc1 + 1);; K *= 2) {
        if (K > (1L << 24)) throw std::logic_error("valuation_and_residue: no convergence");
        Q t = c0 + c1 * Q(emb.root_mod(K));
        if (t == 0) continue;
        long vt = val_q(t, p);
        if (vt < vc1 + K) return {vt, vt >= 0 ? residue_q(t, p, modulus_exp) : Z(0)};
    }
}

inline ValRes valuation_and_residue(const QuadIrr& z, const PadicEmbedding& emb,
                                    long modulus_exp) {
    return valuation_and_residue(z.value, emb, modulus_exp);
}

// ---------------------------------------------------------------------------
// The expansion loop.
// ---------------------------------------------------------------------------

/// Exact membership in the fundamental domain
///   D = { |z| > 1, -1/2 <= Re z < 1/2 } union the arc { |z| = 1, angle in
///   [pi/2, 2pi/3] }, i.e. |z| = 1 with -1/2 <= Re z <= 0.
inline bool in_fundamental_domain(const FieldElement& z, const Z& d) {
    const Q& re = z.coords()[0];
    const Q& im = z.coords()[1];
    if (im <= 0) return false;
    Q abs2 = re * re + Q(d) * im * im;
    Q half(1, 2);
    if (abs2 > 1) return -half <= re && re < half;
    if (abs2 == 1) return -half <= re && re <= 0;
    return false;
}

inline FieldElement moebius(const MatQ& M, const FieldElement& z) {
    const NumberField& F = z.field();
    return (z * M(0, 0) + F.from_q(M(0, 1))) / (z * M(1, 0) + F.from_q(M(1, 1)));
}

/// One loop of the expansion: initialization (delta), p-adic reduction (a),
/// infinity-adic reduction (b-digits), with the matrices
///   A_k^{-1} = Q_k P_k D_k,  B_k = A_1 ... A_k  over Z[1/p].
struct PcfLoop {
    long k = 0;
    int delta = 0;
    Z a;
    std::vector<Z> b_list;
    MatQ D_k, P_k, Q_k, A_k, B_k;
    FieldElement x_next;
};

struct PcfExpansion {
    std::vector<PcfLoop> loops;
    /// First (k, l), k < l, with x_k = x_l exactly (1-based states x_1 = z).
    std::optional<std::pair<long, long>> period;
};

inline PcfExpansion pcf_expand(const QuadIrr& z, const PadicEmbedding& emb, long max_loops) {
    const NumberField& F = z.value.field();
    Z d = field_d(F);
    if (d != emb.d()) throw std::invalid_argument("pcf_expand: embedding is for a different d");
    long p = emb.p();
    Z p2 = Z(p) * Z(p);
    Q half(1, 2);

    PcfExpansion out;
    std::vector<FieldElement> xs{z.value};
    MatQ B = MatQ::identity(2, Q(0), Q(1));
    for (long k = 1; k <= max_loops; ++k) {
        const FieldElement x = xs.back();
        PcfLoop L;
        L.k = k;

        // Initialization: z_k = x_k if x_k is p-integral, else -1/x_k.
        FieldElement zk = x;
        L.D_k = MatQ::identity(2, Q(0), Q(1));
        if (valuation_and_residue(x, emb, 0).v >= 0) {
            L.delta = 1;
        } else {
            L.delta = -1;
            L.D_k(0, 0) = 0;
            L.D_k(0, 1) = -1;
            L.D_k(1, 0) = 1;
            L.D_k(1, 1) = 0;
            zk = -x.inverse();
        }

        // p-adic reduction: a_k in [0, p^2) with z_k - a_k = 0 mod p^2.
        L.a = valuation_and_residue(zk, emb, 2).residue;
        L.P_k = MatQ(2, 2, Q(0));
        L.P_k(0, 0) = Q(1, p);
        L.P_k(0, 1) = Q(-L.a) / Q(p);
        L.P_k(1, 1) = Q(p);
        FieldElement w = (zk - F.from_q(Q(L.a))) * (Q(1) / Q(p2));

        // Infinity-adic reduction until w lands in the fundamental domain.
        L.Q_k = MatQ::identity(2, Q(0), Q(1));
        while (!in_fundamental_domain(w, d)) {
            Z b = qfloor(w.coords()[0] + half);
            // At the elliptic fixed point (1+sqrt(-3))/2 the forced digit
            // makes -1/(w-b) = w; taking b-1 instead (Re(w-b) = 1/2, the
            // other boundary representative) sends it to (-1+sqrt(-3))/2,
            // which lies on the boundary arc of the fundamental domain.
            if (-(w - F.from_q(Q(b))).inverse() == w) b -= 1;
            L.b_list.push_back(b);
            MatQ S(2, 2, Q(0));
            S(0, 1) = -1;
            S(1, 0) = 1;
            S(1, 1) = Q(-b);
            L.Q_k = S * L.Q_k;
            w = -(w - F.from_q(Q(b))).inverse();
            if (L.b_list.size() > 100000)
                throw std::logic_error("pcf_expand: infinity-adic reduction did not terminate");
        }

        MatQ Ainv = L.Q_k * L.P_k * L.D_k;
        L.A_k = Ainv.inverse();
        B = B * L.A_k;
        L.B_k = B;
        L.x_next = w;
        xs.push_back(w);
        out.loops.push_back(std::move(L));

        for (long j = 0; j + 1 < static_cast<long>(xs.size()); ++j)
            if (xs[static_cast<size_t>(j)] == xs.back()) {
                out.period = {j + 1, static_cast<long>(xs.size())};
                return out;
            }
    }
    throw BudgetExhausted(max_loops);
}

/// Digit rendering "[+1;7;0,4,1]" (loops separated by ';').
inline std::string digit_string(const PcfExpansion& e) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < e.loops.size(); ++i) {
        const PcfLoop& L = e.loops[i];
        if (i) os << ';';
        os << (L.delta > 0 ? "+1" : "-1") << ';' << L.a << ';';
        for (size_t j = 0; j < L.b_list.size(); ++j) {
            if (j) os << ',';
            os << L.b_list[j];
        }
    }
    os << ']';
    return os.str();
}

inline std::string period_string(const PcfExpansion& e) {
    if (!e.period) return "none";
    std::ostringstream os;
    os << '(' << e.period->first << ',' << e.period->second << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// p-units, Pell-like equations, ideal classes.
// ---------------------------------------------------------------------------

struct PellTriple {
    Z x, y;
    long nu = 0;
};

struct PUnitResult {
    Z d;
    long p = 0;
    Z root;  // chosen root of x^2 + d mod p
    long N = 0;
    FieldElement theta;    // (-1+sqrt(-d))/2 if -d = 1 mod 4, else sqrt(-d)
    FieldElement epsilon;  // fundamental norm-one p-unit s_N theta + t_N
    FieldElement u;        // p^N epsilon, generator of the ideal p-prime^(2N)
    PellTriple pell;
    long ideal_order = 0;
    PcfExpansion expansion;
};

inline bool theta_is_half_integral(const Z& d) { return zmod(d, Z(4)) == 3; }  // -d = 1 mod 4

/// The roots of unity of F: {1,-1}, plus {i,-i} for d = 1, plus the sixth
/// roots (+-1 +- sqrt(-3))/2 for d = 3.
inline std::vector<FieldElement> roots_of_unity(const NumberField& F) {
    Z d = field_d(F);
    FieldElement one = F.from_q(Q(1)), g = F.gen();
    std::vector<FieldElement> zs{one, -one};
    if (d == 1) {
        zs.push_back(g);
        zs.push_back(-g);
    } else if (d == 3) {
        Q half(1, 2);
        for (int s0 : {1, -1})
            for (int s1 : {1, -1}) zs.push_back((one * Q(s0) + g * Q(s1)) * half);
    }
    return zs;
}

/// A square root of target in F, if one exists (any of the two).
inline std::optional<FieldElement> sqrt_in_field(const FieldElement& target) {
    const NumberField& F = target.field();
    Z d = field_d(F);
    auto qsqrt = [](const Q& x) -> std::optional<Q> {
        if (x < 0) return std::nullopt;
        if (x == 0) return Q(0);
        if (!mpz_perfect_square_p(x.get_num().get_mpz_t()) ||
            !mpz_perfect_square_p(x.get_den().get_mpz_t()))
            return std::nullopt;
        Z n, m;
        mpz_sqrt(n.get_mpz_t(), x.get_num().get_mpz_t());
        mpz_sqrt(m.get_mpz_t(), x.get_den().get_mpz_t());
        return Q(n) / Q(m);
    };
    const Q& t0 = target.coords()[0];
    const Q& t1 = target.coords()[1];
    if (t1 == 0) {
        if (auto r = qsqrt(t0)) return F.from_q(*r);
        if (auto r = qsqrt(-t0 / Q(d))) return F.gen() * (*r);
        return std::nullopt;
    }
    auto wr = qsqrt(t0 * t0 + Q(d) * t1 * t1);
    if (!wr) return std::nullopt;
    for (const Q& cand : {Q((t0 + *wr) / 2), Q((t0 - *wr) / 2)}) {
        auto alpha = qsqrt(cand);
        if (!alpha || *alpha == 0) continue;
        Q beta = t1 / (2 * *alpha);
        return F.from_q(*alpha) + F.gen() * beta;
    }
    return std::nullopt;
}

/// Coordinates of x in the integral basis (1, theta); integral iff both are
/// integers.
inline std::optional<std::pair<Z, Z>> integral_coords(const FieldElement& x) {
    Z d = field_d(x.field());
    Q a = x.coords()[0], b = x.coords()[1];
    Q A = a, B = b;
    if (theta_is_half_integral(d)) {  // g = 2 theta + 1
        A = a + b;
        B = 2 * b;
    }
    if (A.get_den() != 1 || B.get_den() != 1) return std::nullopt;
    return std::make_pair(A.get_num(), B.get_num());
}

/// N if u is a root of unity times a square in O_F, else 2N.
inline long ideal_class_order(const PUnitResult& res) {
    for (const FieldElement& zeta : roots_of_unity(res.u.field())) {
        auto x = sqrt_in_field(res.u * zeta.inverse());
        if (x && integral_coords(*x)) return res.N;
    }
    return 2 * res.N;
}

inline PUnitResult fundamental_p_unit(const Z& d, long p, long seed_root = -1,
                                      long max_loops = 4000) {
    if (d <= 0 || !is_squarefree(d))
        throw std::invalid_argument("fundamental_p_unit: d must be positive and square-free");
    PadicEmbedding emb(d, p, seed_root);
    NumberField F = make_field(d);
    FieldElement g = F.gen();
    FieldElement theta =
        theta_is_half_integral(d) ? (g - F.from_q(Q(1))) * Q(1, 2) : g;

    PUnitResult res;
    res.d = d;
    res.p = p;
    res.root = emb.root();
    res.theta = theta;
    res.expansion = pcf_expand(QuadIrr(theta), emb, max_loops);
    if (!res.expansion.period || res.expansion.period->first != 1)
        throw PurePeriodicityViolated();
    res.N = res.expansion.period->second - 1;
    long N = res.N;

    MatQ Binv = res.expansion.loops[static_cast<size_t>(N - 1)].B_k.inverse();
    Q sN = Binv(1, 0), tN = Binv(1, 1);
    res.epsilon = theta * sN + F.from_q(tN);
    Z pN = zpow(p, N);
    res.u = res.epsilon * Q(pN);

    // Verify the p-unit invariants before exposing the result.
    auto fail = [](const char* what) { return std::logic_error(what); };
    if (res.epsilon.norm() != 1) throw fail("p-unit verification: norm != 1");
    Q s = sN * Q(pN), t = tN * Q(pN);
    if (s.get_den() != 1 || t.get_den() != 1)
        throw fail("p-unit verification: s, t not integral");
    Z gc;
    mpz_gcd(gc.get_mpz_t(), s.get_num().get_mpz_t(), t.get_num().get_mpz_t());
    if (gc != 1) throw fail("p-unit verification: s, t not coprime");
    if (valuation_and_residue(res.epsilon, emb, 0).v != N)
        throw fail("p-unit verification: v_p(epsilon) != N");
    if (valuation_and_residue(res.epsilon, emb.conjugate(), 0).v != -N)
        throw fail("p-unit verification: v_pbar(epsilon) != -N");
    if (res.u.norm() != Q(pN * pN)) throw fail("p-unit verification: norm(u) != p^(2N)");

    // u = s theta + t with coprime integers, so the Pell-like triple is
    // (x, y, nu) = (t, s, N).
    res.pell = {t.get_num(), s.get_num(), N};
    Z x = res.pell.x, y = res.pell.y;
    if (theta_is_half_integral(d)) {
        if (4 * x * x - 4 * x * y + (1 + d) * y * y != 4 * pN * pN)
            throw fail("p-unit verification: Pell-like equation fails");
    } else {
        if (x * x + d * y * y != pN * pN)
            throw fail("p-unit verification: Pell-like equation fails");
    }

    res.ideal_order = ideal_class_order(res);
    return res;
}

/// All primitive solutions of the Pell-like equation with nu <= r_max * N,
/// generated as zeta * (t +- sqrt(-d) s)^r and verified by substitution.
inline std::vector<PellTriple> pell_solutions(const Z& d, long p, long seed_root, long r_max) {
    PUnitResult res = fundamental_p_unit(d, p, seed_root);
    const NumberField& F = res.u.field();
    bool half = theta_is_half_integral(d);

    std::set<std::tuple<Z, Z, long>> seen;
    std::vector<PellTriple> out;
    for (long r = 1; r <= r_max; ++r) {
        long nu = r * res.N;
        Z pnu = zpow(p, nu);
        for (const FieldElement& base : {res.u.pow(r), conj(res.u).pow(r)}) {
            for (const FieldElement& zeta : roots_of_unity(F)) {
                auto coords = integral_coords(base * zeta);
                if (!coords) continue;
                auto [x, y] = *coords;
                Z gc;
                mpz_gcd(gc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                if (gc != 1) continue;
                bool ok = half ? (4 * x * x - 4 * x * y + (1 + d) * y * y == 4 * pnu * pnu)
                               : (x * x + d * y * y == pnu * pnu);
                if (!ok) continue;
                if (seen.insert({x, y, nu}).second) out.push_back({x, y, nu});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const PellTriple& a, const PellTriple& b) {
        return std::tie(a.nu, a.x, a.y) < std::tie(b.nu, b.x, b.y);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Iwasawa normal form in GL_2(Q_p).
// ---------------------------------------------------------------------------

/// The unique (lambda, nu, e, u mod p^e) with
///   M = p^lambda diag(p^nu, 1) [[p^e, u~],[0, 1]] R,  R in GL_2(Z_p).
struct PadicNormalForm {
    long lambda = 0, nu = 0, e = 0;
    Z u;
};

inline PadicNormalForm padic_normal_form(const MatQ& M, long p) {
    if (M.n != 2 || M.m != 2) throw std::invalid_argument("padic_normal_form: need 2x2");
    if (M.det() == 0) throw Singular();
    Q a = M(0, 0), b = M(0, 1), c = M(1, 0), dd = M(1, 1);
    auto vq = [p](const Q& x) { return x == 0 ? LONG_MAX : val_q(x, p); };
    // Column operations over GL_2(Z_p): clear the bottom-left entry against
    // the bottom entry of smaller valuation.
    if (vq(dd) > vq(c)) {
        std::swap(a, b);
        std::swap(c, dd);
    }
    if (c != 0) {
        Q f = c / dd;
        a = a - b * f;
    }
    // Now M ~ [[a, b],[0, dd]] with a*dd != 0.
    long lambda = val_q(dd, p);
    long m = val_q(a, p) - lambda;
    Q bp = b / dd;
    long vb = vq(bp);
    if (vb >= m) return {lambda, m, 0, Z(0)};
    long e = m - vb;
    Q unit = vb >= 0 ? Q(bp / Q(zpow(p, vb))) : Q(bp * Q(zpow(p, -vb)));
    return {lambda, vb, e, residue_q(unit, p, e)};
}

}  // namespace unitcf::pcf
