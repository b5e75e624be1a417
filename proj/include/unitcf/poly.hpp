#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace unitcf {

/// Coefficient-type hooks used by Poly<K>. The default works for any exact
/// field type with arithmetic operators and comparison against 0 (e.g. Q).
/// Types with non-trivial zero tests (shared-field algebraic numbers)
/// specialize this.
template <class K>
struct coeff_traits {
    static bool is_zero(const K& x) { return x == 0; }
    static K inverse(const K& x) { return K(1) / x; }
};

/// Dense univariate polynomial over an exact field K, lowest degree first.
/// The zero polynomial has an empty coefficient vector.
template <class K>
struct Poly {
    std::vector<K> c;

    Poly() = default;
    explicit Poly(std::vector<K> coeffs) : c(std::move(coeffs)) { normalize(); }

    void normalize() {
        while (!c.empty() && coeff_traits<K>::is_zero(c.back())) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    /// Degree; -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const K& lc() const {
        if (c.empty()) throw std::domain_error("Poly::lc of zero polynomial");
        return c.back();
    }

    bool operator==(const Poly& o) const {
        if (c.size() != o.c.size()) return false;
        for (size_t i = 0; i < c.size(); ++i)
            if (!coeff_traits<K>::is_zero(c[i] - o.c[i])) return false;
        return true;
    }

    Poly operator-() const {
        Poly r = *this;
        for (auto& x : r.c) x = -x;
        return r;
    }

    Poly operator+(const Poly& o) const {
        Poly r;
        r.c.resize(std::max(c.size(), o.c.size()), K{});
        for (size_t i = 0; i < r.c.size(); ++i) {
            if (i < c.size() && i < o.c.size())
                r.c[i] = c[i] + o.c[i];
            else if (i < c.size())
                r.c[i] = c[i];
            else
                r.c[i] = o.c[i];
        }
        r.normalize();
        return r;
    }

    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        if (c.empty() || o.c.empty()) return Poly();
        std::vector<K> r(c.size() + o.c.size() - 1, c[0] - c[0]);  // zeros
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r[i + j] = r[i + j] + c[i] * o.c[j];
        Poly p;
        p.c = std::move(r);
        p.normalize();
        return p;
    }

    Poly operator*(const K& s) const {
        Poly r = *this;
        for (auto& x : r.c) x = x * s;
        r.normalize();
        return r;
    }

    /// Horner evaluation. For the zero polynomial returns x - x.
    template <class X>
    X eval(const X& x) const {
        if (c.empty()) return x - x;
        X acc = X(c.back());
        for (size_t i = c.size() - 1; i-- > 0;) acc = acc * x + X(c[i]);
        return acc;
    }

    /// Evaluation when the point type equals K.
    K operator()(const K& x) const { return eval<K>(x); }

    Poly derivative() const {
        Poly r;
        for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * K(static_cast<long>(i)));
        r.normalize();
        return r;
    }

    /// Quotient and remainder; K must be a field.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
        Poly rem = *this;
        Poly quo;
        long dd = d.degree();
        if (rem.degree() < dd) return {quo, rem};
        quo.c.assign(static_cast<size_t>(rem.degree() - dd + 1), d.c[0] - d.c[0]);
        K dinv = coeff_traits<K>::inverse(d.lc());
        while (!rem.is_zero() && rem.degree() >= dd) {
            long k = rem.degree() - dd;
            K f = rem.lc() * dinv;
            quo.c[static_cast<size_t>(k)] = f;
            for (long i = 0; i <= dd; ++i) {
                rem.c[static_cast<size_t>(k + i)] = rem.c[static_cast<size_t>(k + i)] - f * d.c[static_cast<size_t>(i)];
            }
            rem.c.pop_back();
            rem.normalize();
        }
        quo.normalize();
        return {quo, rem};
    }

    Poly operator/(const Poly& d) const { return divmod(d).first; }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    /// Monic rescaling (zero stays zero).
    Poly monic() const {
        if (is_zero()) return *this;
        return *this * coeff_traits<K>::inverse(lc());
    }

    static Poly x() { return Poly(std::vector<K>{K(0), K(1)}); }
    static Poly constant(const K& k) { return Poly(std::vector<K>{k}); }

    /// Coefficient accessor with an explicit zero fallback (avoids needing a
    /// default-constructible zero for field-tied coefficient types).
    K coeff_or(size_t i, const K& zero) const { return i < c.size() ? c[i] : zero; }
};

/// Monic gcd via the Euclidean algorithm; K must be a field.
template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
    while (!b.is_zero()) {
        Poly<K> r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Squarefree part f / gcd(f, f').
template <class K>
Poly<K> squarefree_part(const Poly<K>& f) {
    if (f.degree() <= 0) return f.monic();
    Poly<K> g = poly_gcd(f, f.derivative());
    return (f / g).monic();
}

/// Composition f(g(x)).
template <class K>
Poly<K> poly_compose(const Poly<K>& f, const Poly<K>& g) {
    Poly<K> acc;
    for (size_t i = f.c.size(); i-- > 0;) acc = acc * g + Poly<K>::constant(f.c[i]);
    return acc;
}

/// Resultant via the Euclidean remainder sequence; K must be a field.
template <class K>
K poly_resultant(Poly<K> a, Poly<K> b) {
    if (a.is_zero() || b.is_zero()) return a.c.empty() ? (b.is_zero() ? K(0) : b.lc() * K(0)) : a.lc() * K(0);
    K res = K(1);
    while (b.degree() > 0) {
        Poly<K> r = a % b;
        long da = a.degree(), db = b.degree(), dr = r.degree();
        // res(a,b) = (-1)^(da*db) lc(b)^(da-dr) res(b,r)
        K lcb = b.lc();
        K pw = K(1);
        for (long i = 0; i < da - (r.is_zero() ? 0 : dr); ++i) pw = pw * lcb;
        if ((da % 2) && (db % 2)) res = -res;
        res = res * pw;
        if (r.is_zero()) return res * K(0);
        a = std::move(b);
        b = std::move(r);
    }
    // b is a nonzero constant.
    K lcb = b.lc();
    K pw = K(1);
    for (long i = 0; i < a.degree(); ++i) pw = pw * lcb;
    return res * pw;
}

using PolyQ = Poly<Q>;

/// Content (gcd of numerators over lcm of denominators) of a rational poly.
inline Q poly_content(const PolyQ& f) {
    if (f.is_zero()) return Q(0);
    Z num_gcd = 0, den_lcm = 1;
    for (const Q& x : f.c) {
        if (x == 0) continue;
        num_gcd = z_gcd(num_gcd, x.get_num());
        Z d = x.get_den();
        den_lcm = den_lcm / z_gcd(den_lcm, d) * d;
    }
    Q c(num_gcd, den_lcm);
    c.canonicalize();
    return c;
}

/// Primitive integer version of a rational polynomial (positive leading coeff).
inline PolyQ poly_primitive(const PolyQ& f) {
    if (f.is_zero()) return f;
    PolyQ r = f * (Q(1) / poly_content(f));
    if (r.lc() < 0) r = -r;
    return r;
}

/// Sturm chain of a squarefree-ish polynomial over any ordered field rep.
template <class K>
std::vector<Poly<K>> sturm_chain(const Poly<K>& f) {
    std::vector<Poly<K>> chain;
    if (f.is_zero()) return chain;
    chain.push_back(f);
    Poly<K> d = f.derivative();
    if (d.is_zero()) return chain;
    chain.push_back(d);
    for (;;) {
        const Poly<K>& a = chain[chain.size() - 2];
        const Poly<K>& b = chain[chain.size() - 1];
        Poly<K> r = a % b;
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

/// Sign-variation count of a Sturm chain at x, with signs supplied by `sgn`
/// (sgn must return -1/0/1 and be exact).
template <class K, class X, class SignFn>
int sturm_variations(const std::vector<Poly<K>>& chain, const X& x, SignFn sgn) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sgn(p.template eval<X>(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

/// Number of distinct real roots of the chain's polynomial in (a, b];
/// requires f(a) != 0 and f(b) != 0 for exactness of the open/closed detail
/// (we only use it with non-root endpoints, giving the count in (a, b)).
inline int sturm_count(const std::vector<PolyQ>& chain, const Q& a, const Q& b) {
    auto sgn = [](const Q& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    return sturm_variations(chain, a, sgn) - sturm_variations(chain, b, sgn);
}

/// Cauchy bound: all real roots of f lie in (-B, B).
inline Q cauchy_root_bound(const PolyQ& f) {
    if (f.degree() <= 0) return Q(1);
    Q m(0);
    for (size_t i = 0; i + 1 < f.c.size(); ++i) {
        Q a = q_abs(f.c[i] / f.lc());
        if (a > m) m = a;
    }
    return m + 1;
}

/// Isolating intervals (lo, hi), ascending, for all real roots of a
/// squarefree rational polynomial; f(lo) != 0 != f(hi) for every interval.
inline std::vector<QInterval> isolate_real_roots(const PolyQ& f_in) {
    std::vector<QInterval> out;
    PolyQ f = squarefree_part(f_in);
    if (f.degree() <= 0) return out;
    auto chain = sturm_chain(f);
    Q bound = cauchy_root_bound(f);
    // Pick endpoints that are not roots (the bound itself never is).
    struct Seg {
        Q a, b;
        int n;
    };
    std::vector<Seg> stack;
    int total = sturm_count(chain, -bound, bound);
    if (total > 0) stack.push_back({-bound, bound, total});
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.n == 1) {
            out.push_back(QInterval(s.a, s.b));
            continue;
        }
        Q m = (s.a + s.b) / 2;
        // Avoid landing exactly on a root.
        while (f(m) == 0) m = (s.a + m) / 2;
        int left = sturm_count(chain, s.a, m);
        if (left > 0) stack.push_back({s.a, m, left});
        if (s.n - left > 0) stack.push_back({m, s.b, s.n - left});
    }
    std::sort(out.begin(), out.end(), [](const QInterval& x, const QInterval& y) { return x.lo < y.lo; });
    return out;
}

/// One bisection refinement of an isolating interval for a root of f
/// (squarefree, f nonzero at the endpoints).
inline void refine_root_interval(const PolyQ& f, QInterval& iv) {
    Q m = iv.mid();
    if (f(m) == 0) {
        // Rational root: collapse towards it while keeping non-root endpoints.
        Q lo = (iv.lo + m) / 2, hi = (m + iv.hi) / 2;
        if (f(lo) != 0 && f(hi) != 0) {
            iv = QInterval(lo, hi);
            return;
        }
        m = (iv.lo + m) / 2;  // fall through with a perturbed midpoint
        if (f(m) == 0) return;
    }
    Q fa = f(iv.lo), fm = f(m);
    bool left = (fa > 0) != (fm > 0);
    if (left)
        iv = QInterval(iv.lo, m);
    else
        iv = QInterval(m, iv.hi);
}

/// Render a rational polynomial like "x^3 - 2" (debug/test helper).
inline std::string poly_to_string(const PolyQ& f, const std::string& var = "x") {
    if (f.is_zero()) return "0";
    std::string out;
    for (size_t i = f.c.size(); i-- > 0;) {
        const Q& a = f.c[i];
        if (a == 0) continue;
        Q aa = q_abs(a);
        std::string term;
        if (i == 0)
            term = aa.get_str();
        else {
            if (aa != 1) term = aa.get_str() + "*";
            term += var;
            if (i > 1) term += "^" + std::to_string(i);
        }
        if (out.empty())
            out = (a < 0 ? "-" : "") + term;
        else
            out += (a < 0 ? " - " : " + ") + term;
    }
    return out;
}

}  // namespace unitcf
