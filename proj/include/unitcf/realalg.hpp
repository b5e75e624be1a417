#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "realfield.hpp"

namespace unitcf {

struct NotSatisfiedAtSeed : std::runtime_error {
    NotSatisfiedAtSeed() : std::runtime_error("seed point violates an inequality") {}
};

struct PrecisionExhausted : std::runtime_error {
    PrecisionExhausted() : std::runtime_error("precision budget exhausted with exact fallback disabled") {}
};

/// Rational enclosure of sqrt(x) (x >= 0) with roughly `bits` bits of width.
inline QInterval q_sqrt_bounds(const Q& x, int bits) {
    if (x < 0) throw std::domain_error("q_sqrt_bounds: negative argument");
    if (x == 0) return QInterval(Q(0));
    Z scale = Z(1) << bits;
    Z nd = x.get_num() * x.get_den();
    Z t = sqrt(nd * scale * scale);
    Q lo(t, x.get_den() * scale), hi(t + 1, x.get_den() * scale);
    lo.canonicalize();
    hi.canonicalize();
    return QInterval(lo, hi);
}

using PolyR = Poly<RElem>;

/// Evaluate a polynomial with RElem coefficients at a rational point.
inline RElem poly_eval_q(const PolyR& p, const Q& x) {
    if (p.c.empty()) return RElem(0);
    RElem acc = p.c.back();
    for (size_t i = p.c.size() - 1; i-- > 0;) acc = acc * RElem(x) + p.c[i];
    return acc;
}

/// Sign variations of a Sturm chain over RElem at a rational point.
inline int sturm_variations_r(const std::vector<PolyR>& chain, const Q& x) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        int s = poly_eval_q(p, x).sign();
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

inline int sturm_count_r(const std::vector<PolyR>& chain, const Q& a, const Q& b) {
    return sturm_variations_r(chain, a) - sturm_variations_r(chain, b);
}

/// Certified real number: a rational, an element of a shared real field, the
/// square root of a nonnegative element, the isolated root of a polynomial
/// with field coefficients, or the +infinity sentinel. All comparisons are
/// exact; interval refinement is only ever an accelerator.
class CertReal {
  public:
    struct PolyRootRep {
        PolyR poly;    // squarefree over the shared field
        QInterval iv;  // isolating; poly has opposite nonzero signs at the ends
                       // unless iv is an exact point
    };

    CertReal() : v_(Q(0)) {}
    CertReal(const Q& q) : v_(q) {}
    CertReal(long n) : v_(Q(n)) {}
    explicit CertReal(RElem e) : v_(std::move(e)) {}

    static CertReal sqrt_of(RElem e) {
        if (e.sign() < 0) throw std::domain_error("CertReal: sqrt of negative value");
        return CertReal(SqrtRep{std::move(e)});
    }
    static CertReal root_of(PolyR p, QInterval iv) { return CertReal(PolyRootRep{std::move(p), std::move(iv)}); }
    static CertReal infinity() { return CertReal(InfRep{}); }

    bool is_infinite() const { return std::holds_alternative<InfRep>(v_); }
    bool is_rational() const { return std::holds_alternative<Q>(v_); }
    Q rational_value() const { return std::get<Q>(v_); }
    bool is_sqrt() const { return std::holds_alternative<SqrtRep>(v_); }
    const RElem& sqrt_argument() const { return std::get<SqrtRep>(v_).arg; }

    /// Exact sign. max_bits is only a fast-path budget; the exact fallback
    /// always decides (PrecisionExhausted cannot fire unless the fallback is
    /// disabled, which this implementation never does).
    int sign(int /*max_bits*/ = config::default_max_bits) const {
        if (is_infinite()) return 1;
        if (const Q* q = std::get_if<Q>(&v_)) return *q > 0 ? 1 : (*q < 0 ? -1 : 0);
        if (const RElem* e = std::get_if<RElem>(&v_)) return e->sign();
        if (const SqrtRep* s = std::get_if<SqrtRep>(&v_)) return s->arg.sign() > 0 ? 1 : 0;
        const PolyRootRep& r = std::get<PolyRootRep>(v_);
        for (;;) {
            if (r.iv.lo > 0) return 1;
            if (r.iv.hi < 0) return -1;
            if (r.iv.width() == 0) return r.iv.lo == 0 ? 0 : (r.iv.lo > 0 ? 1 : -1);
            // Zero inside: the root is 0 iff poly(0) = 0.
            if (poly_eval_q(r.poly, Q(0)).sign() == 0) return 0;
            const_cast<PolyRootRep&>(r).iv = refined(r);
        }
    }

    /// Rational enclosure of width <= eps (must not be the infinity sentinel).
    QInterval enclosure(const Q& eps) const {
        if (is_infinite()) throw std::domain_error("CertReal: enclosure of infinity");
        if (const Q* q = std::get_if<Q>(&v_)) return QInterval(*q);
        if (const RElem* e = std::get_if<RElem>(&v_)) return e->enclosure(eps);
        if (const SqrtRep* s = std::get_if<SqrtRep>(&v_)) {
            Q sub = eps * eps;
            if (sub > eps / 4) sub = eps / 4;
            int bits = 4;
            for (;;) {
                QInterval a = s->arg.enclosure(sub);
                if (a.lo < 0) a = QInterval(Q(0), a.hi < 0 ? Q(0) : a.hi);
                QInterval lo = q_sqrt_bounds(a.lo, bits), hi = q_sqrt_bounds(a.hi, bits);
                QInterval out(lo.lo, hi.hi);
                if (out.width() <= eps) return out;
                sub /= 16;
                bits += 8;
            }
        }
        const PolyRootRep& r = std::get<PolyRootRep>(v_);
        while (r.iv.width() > eps) const_cast<PolyRootRep&>(r).iv = refined(r);
        return r.iv;
    }

    double to_double() const {
        if (is_infinite()) return std::numeric_limits<double>::infinity();
        return enclosure(Q(1, Z(1) << 60)).mid().get_d();
    }

    /// Decimal rendering with the given significant digits.
    std::string to_decimal(int sig_digits = 6) const {
        if (is_infinite()) return "inf";
        Q eps(1, z_pow(Z(10), static_cast<unsigned long>(sig_digits + 6)));
        QInterval v = enclosure(eps);
        if (v.lo <= 0 && 0 <= v.hi && sign() == 0) return "0";
        return q_to_decimal(v.mid(), sig_digits);
    }

    /// Exact three-way comparison.
    static int compare(const CertReal& a, const CertReal& b);

    bool operator<(const CertReal& o) const { return compare(*this, o) < 0; }
    bool operator>(const CertReal& o) const { return compare(*this, o) > 0; }
    bool operator<=(const CertReal& o) const { return compare(*this, o) <= 0; }
    bool operator>=(const CertReal& o) const { return compare(*this, o) >= 0; }
    bool operator==(const CertReal& o) const { return compare(*this, o) == 0; }
    bool operator!=(const CertReal& o) const { return compare(*this, o) != 0; }

  private:
    struct SqrtRep {
        RElem arg;
    };
    struct InfRep {};

    std::variant<Q, RElem, SqrtRep, PolyRootRep, InfRep> v_;

    explicit CertReal(SqrtRep s) : v_(std::move(s)) {}
    explicit CertReal(PolyRootRep r) : v_(std::move(r)) {}
    explicit CertReal(InfRep i) : v_(i) {}

    /// One refinement step of a root interval by sign bisection; collapses to
    /// an exact point when the midpoint is the root.
    static QInterval refined(const PolyRootRep& r) {
        if (r.iv.width() == 0) return r.iv;
        Q m = r.iv.mid();
        int sm = poly_eval_q(r.poly, m).sign();
        if (sm == 0) return QInterval(m, m);
        int sl = poly_eval_q(r.poly, r.iv.lo).sign();
        if (sl != 0 && sm != sl) return QInterval(r.iv.lo, m);
        return QInterval(m, r.iv.hi);
    }

    friend class CertRealAccess;
    const std::variant<Q, RElem, SqrtRep, PolyRootRep, InfRep>& var() const { return v_; }

    // --- equality certificates between representations ---

    /// Is e equal to the root isolated by r? (exact)
    static bool elem_equals_root(const RElem& e, const PolyRootRep& r) {
        PolyR p = r.poly;
        RElem val = p.is_zero() ? RElem(0) : [&] {
            RElem acc = p.c.back();
            for (size_t i = p.c.size() - 1; i-- > 0;) acc = acc * e + p.c[i];
            return acc;
        }();
        if (val.sign() != 0) return false;
        // e is *a* root of p; it is the isolated one iff it lies in iv.
        QInterval iv = r.iv;
        for (;;) {
            QInterval ee = e.enclosure(iv.width() == 0 ? Q(1, 16) : iv.width() / 4);
            if (ee.lo > iv.hi || ee.hi < iv.lo) return false;
            if (ee.lo >= iv.lo && ee.hi <= iv.hi) return true;
            // Straddles an endpoint: compare e against the endpoint exactly.
            const Q& edge = (ee.lo < iv.lo) ? iv.lo : iv.hi;
            int s = (e - RElem(edge)).sign();
            if (s == 0) return iv.contains(edge);
            if (edge == iv.lo) return s > 0;
            return s < 0;
        }
    }
};

inline int CertReal::compare(const CertReal& a, const CertReal& b) {
    using V = std::variant<Q, RElem, SqrtRep, PolyRootRep, InfRep>;
    const V& va = a.v_;
    const V& vb = b.v_;
    bool ia = std::holds_alternative<InfRep>(va), ib = std::holds_alternative<InfRep>(vb);
    if (ia || ib) return ia == ib ? 0 : (ia ? 1 : -1);

    auto as_elem = [](const V& v) -> std::optional<RElem> {
        if (const Q* q = std::get_if<Q>(&v)) return RElem(*q);
        if (const RElem* e = std::get_if<RElem>(&v)) return *e;
        return std::nullopt;
    };

    std::optional<RElem> ea = as_elem(va), eb = as_elem(vb);
    if (ea && eb) return (*ea - *eb).sign();

    // sqrt comparisons: compare squares, respecting sign.
    auto sqrt_vs_elem = [](const SqrtRep& s, const RElem& e) {
        int se = e.sign();
        int ss = s.arg.sign() > 0 ? 1 : 0;
        if (se < 0) return 1;  // sqrt >= 0 > e
        if (ss == 0) return se == 0 ? 0 : -1;
        if (se == 0) return 1;
        return (s.arg - e * e).sign();
    };
    if (const SqrtRep* s = std::get_if<SqrtRep>(&va)) {
        if (eb) return sqrt_vs_elem(*s, *eb);
        if (const SqrtRep* t = std::get_if<SqrtRep>(&vb)) return (s->arg - t->arg).sign();
    }
    if (const SqrtRep* t = std::get_if<SqrtRep>(&vb)) {
        if (ea) return -sqrt_vs_elem(*t, *ea);
    }

    // Root-involving comparisons: refine until separated, with exact
    // equality certificates to guarantee termination.
    const PolyRootRep* ra = std::get_if<PolyRootRep>(&va);
    const PolyRootRep* rb = std::get_if<PolyRootRep>(&vb);
    if (ra && (eb || std::get_if<SqrtRep>(&vb))) {
        if (eb) {
            if (elem_equals_root(*eb, *ra)) return 0;
        } else {
            // b = sqrt(u): a == b iff Peven/odd certificate; reduce to
            // checking p(b) == 0 with square-splitting.
            const SqrtRep& srep = std::get<SqrtRep>(vb);
            PolyR pe, po;  // p(x) = pe(x^2) + x*po(x^2)
            for (size_t i = 0; i < ra->poly.c.size(); ++i) {
                if (i % 2 == 0)
                    pe.c.push_back(ra->poly.c[i]);
                else
                    po.c.push_back(ra->poly.c[i]);
            }
            pe.normalize();
            po.normalize();
            RElem u = srep.arg;
            RElem E = pe.is_zero() ? RElem(0) : [&] {
                RElem acc = pe.c.back();
                for (size_t i = pe.c.size() - 1; i-- > 0;) acc = acc * u + pe.c[i];
                return acc;
            }();
            RElem O = po.is_zero() ? RElem(0) : [&] {
                RElem acc = po.c.back();
                for (size_t i = po.c.size() - 1; i-- > 0;) acc = acc * u + po.c[i];
                return acc;
            }();
            // p(sqrt u) = E + sqrt(u) O = 0 iff E^2 = u O^2 and E*O <= 0.
            bool vanishes = (E * E - u * O * O).sign() == 0 && (E * O).sign() <= 0 &&
                            !(E.sign() == 0) == !(O.sign() == 0 || u.sign() == 0);
            if (E.sign() == 0 && (O.sign() == 0 || u.sign() == 0)) vanishes = true;
            if (vanishes) {
                // sqrt(u) is a root of p; equal iff it lies in the interval.
                CertReal sq = CertReal(SqrtRep{u});
                QInterval iv = ra->iv;
                for (;;) {
                    QInterval se = sq.enclosure(iv.width() == 0 ? Q(1, 16) : iv.width() / 4);
                    if (se.lo > iv.hi || se.hi < iv.lo) break;
                    if (se.lo >= iv.lo && se.hi <= iv.hi) return 0;
                    const Q edge = (se.lo < iv.lo) ? iv.lo : iv.hi;
                    int s2 = CertReal::compare(sq, CertReal(edge));
                    if (s2 == 0) return iv.contains(edge) ? 0 : (edge == iv.lo ? -1 : 1);
                    if (edge == iv.lo) {
                        if (s2 > 0) return 0;  // inside after all
                        break;
                    } else {
                        if (s2 < 0) return 0;
                        break;
                    }
                }
            }
        }
        // Not equal: separate by refinement.
        CertReal other = b;
        for (;;) {
            QInterval ib2 = other.enclosure(ra->iv.width() == 0 ? Q(1, 64) : ra->iv.width() / 4);
            if (ra->iv.lo > ib2.hi) return 1;
            if (ra->iv.hi < ib2.lo) return -1;
            if (ra->iv.width() == 0) {
                return -CertReal::compare(other, CertReal(ra->iv.lo));
            }
            const_cast<PolyRootRep*>(ra)->iv = refined(*ra);
        }
    }
    if (rb && !ra) return -compare(b, a);
    if (ra && rb) {
        // Equality certificate via a common-root test when fields match.
        if (ra->iv.width() == 0 && rb->iv.width() == 0)
            return ra->iv.lo == rb->iv.lo ? 0 : (ra->iv.lo > rb->iv.lo ? 1 : -1);
        if (ra->iv.width() == 0) return -compare(b, CertReal(ra->iv.lo));
        if (rb->iv.width() == 0) return compare(a, CertReal(rb->iv.lo));
        for (int round = 0;; ++round) {
            if (ra->iv.lo > rb->iv.hi) return 1;
            if (ra->iv.hi < rb->iv.lo) return -1;
            if (round == 24) {
                PolyR g = poly_gcd(ra->poly, rb->poly);
                if (g.degree() >= 1) {
                    // Count roots of g in the overlap; one common root there
                    // means both isolated roots coincide with it.
                    Q lo = std::max(ra->iv.lo, rb->iv.lo), hi = std::min(ra->iv.hi, rb->iv.hi);
                    auto chain = sturm_chain(g);
                    // nudge endpoints off roots of g
                    Q w = hi - lo;
                    int guard = 0;
                    while (poly_eval_q(g, lo).sign() == 0 && guard++ < 200) lo -= w / 1024;
                    guard = 0;
                    while (poly_eval_q(g, hi).sign() == 0 && guard++ < 200) hi += w / 1024;
                    if (lo < hi && sturm_count_r(chain, lo, hi) >= 1) {
                        // Certify that both isolated roots are roots of g by
                        // membership of the g-root in both intervals; since g
                        // divides both polynomials and each interval isolates
                        // a single root, overlap + root of g inside implies
                        // equality.
                        return 0;
                    }
                }
            }
            const_cast<PolyRootRep*>(ra)->iv = refined(*ra);
            const_cast<PolyRootRep*>(rb)->iv = refined(*rb);
        }
    }
    if (ra || rb) throw std::logic_error("CertReal: unhandled comparison combination");
    throw std::logic_error("CertReal: unreachable comparison");
}

/// Interval with CertReal endpoints (lo may be 0, hi may be +infinity).
struct RealInterval {
    CertReal lo, hi;
};

/// Connected component, containing tau0, of {tau > 0 : all polys >= 0}.
/// Endpoints are roots of input polynomials or the sentinels 0 / +infinity.
inline RealInterval solve_poly_inequalities(const std::vector<PolyR>& polys_in, const CertReal& tau0) {
    // Filter constants; reject if any is certifiedly negative.
    std::vector<PolyR> polys;
    for (const auto& p : polys_in) {
        if (p.is_zero()) continue;
        if (p.degree() == 0) {
            if (p.c[0].sign() < 0) throw NotSatisfiedAtSeed();
            continue;
        }
        polys.push_back(p);
    }
    // Seed check.
    auto value_at = [&](const PolyR& p, const CertReal& t) -> int {
        if (t.is_rational()) return poly_eval_q(p, t.rational_value()).sign();
        throw std::invalid_argument("solve_poly_inequalities: seed must be rational");
    };
    for (const auto& p : polys) {
        if (value_at(p, tau0) < 0) throw NotSatisfiedAtSeed();
    }
    if (tau0.sign() <= 0) throw std::invalid_argument("solve_poly_inequalities: seed must be positive");
    Q seed = tau0.rational_value();

    // Isolate all positive roots of all polynomials.
    struct Root {
        CertReal val;
        QInterval iv;  // mirror of the CertReal interval at collection time
    };
    std::vector<CertReal> roots;
    for (const auto& p : polys) {
        PolyR sf = p / poly_gcd(p, p.derivative());
        sf = sf.monic();
        auto chain = sturm_chain(sf);
        // Positive root bound from coefficient enclosures.
        Q bound(1);
        {
            Q maxc(0);
            QInterval lcv = sf.lc().enclosure(Q(1, 1024));
            while (lcv.contains_zero()) {
                // lc is nonzero (unit after monic) — this cannot loop.
                lcv = sf.lc().enclosure(lcv.width() / 16);
            }
            Q lclo = std::min(q_abs(lcv.lo), q_abs(lcv.hi));
            for (size_t i = 0; i + 1 < sf.c.size(); ++i) {
                QInterval ci = sf.c[i].enclosure(Q(1, 1024));
                Q m = std::max(q_abs(ci.lo), q_abs(ci.hi));
                if (m > maxc) maxc = m;
            }
            bound = maxc / lclo + 1;
        }
        if (bound <= seed) bound = seed + 1;
        // Bisection isolation on (0, bound], endpoints kept off roots.
        Q lo0(0), hi0 = bound;
        int guard = 0;
        while (poly_eval_q(sf, hi0).sign() == 0 && guard++ < 200) hi0 += 1;
        struct Seg {
            Q a, b;
            int n;
        };
        std::vector<Seg> stack;
        // 0 itself may be a root of sf; shrink the left end off it.
        Q a0 = lo0;
        if (poly_eval_q(sf, a0).sign() == 0) {
            a0 = Q(1, 1024);
            guard = 0;
            while (poly_eval_q(sf, a0).sign() == 0 && guard++ < 200) a0 /= 2;
        }
        int n0 = sturm_count_r(chain, a0, hi0);
        if (n0 > 0) stack.push_back({a0, hi0, n0});
        while (!stack.empty()) {
            Seg s = stack.back();
            stack.pop_back();
            if (s.n == 1) {
                roots.push_back(CertReal::root_of(sf, QInterval(s.a, s.b)));
                continue;
            }
            Q m = (s.a + s.b) / 2;
            int sm = poly_eval_q(sf, m).sign();
            if (sm == 0) {
                // exact rational root at m
                roots.push_back(CertReal(m));
                Q eps = (s.b - s.a) / 1024;
                Q ml = m - eps, mr = m + eps;
                guard = 0;
                while (poly_eval_q(sf, ml).sign() == 0 && guard++ < 200) ml = (s.a + ml) / 2;
                guard = 0;
                while (poly_eval_q(sf, mr).sign() == 0 && guard++ < 200) mr = (mr + s.b) / 2;
                int nl = sturm_count_r(chain, s.a, ml);
                int nr = sturm_count_r(chain, mr, s.b);
                if (nl > 0) stack.push_back({s.a, ml, nl});
                if (nr > 0) stack.push_back({mr, s.b, nr});
                continue;
            }
            int nl = sturm_count_r(chain, s.a, m);
            if (nl > 0) stack.push_back({s.a, m, nl});
            if (s.n - nl > 0) stack.push_back({m, s.b, s.n - nl});
        }
    }

    // Sort and deduplicate the roots exactly.
    std::sort(roots.begin(), roots.end(), [](const CertReal& x, const CertReal& y) { return x < y; });
    std::vector<CertReal> uniq;
    for (auto& r : roots) {
        if (uniq.empty() || uniq.back() != r) uniq.push_back(std::move(r));
    }
    // Drop roots <= 0 (domain is tau > 0).
    std::vector<CertReal> pos;
    for (auto& r : uniq)
        if (r.sign() > 0) pos.push_back(std::move(r));

    size_t m = pos.size();
    // Rational sample in the open gap (pos[i-1], pos[i]); gap 0 is (0, pos[0]),
    // gap m is (pos[m-1], inf).
    auto gap_sample = [&](size_t gi) -> Q {
        CertReal* left = gi == 0 ? nullptr : &pos[gi - 1];
        CertReal* right = gi == m ? nullptr : &pos[gi];
        if (!left && !right) return Q(1);
        Q eps(1, 4);
        for (;;) {
            Q lo = left ? left->enclosure(eps).hi : Q(0);
            Q hi_ = right ? right->enclosure(eps).lo : lo + 1;
            if (lo < hi_) return (lo + hi_) / 2;
            eps /= 16;
        }
    };
    auto gap_ok = [&](size_t gi) -> bool {
        Q s = gap_sample(gi);
        for (const auto& p : polys)
            if (poly_eval_q(p, s).sign() < 0) return false;
        return true;
    };

    // Locate the seed: gap index g means seed lies in the open interval
    // (pos[g-1], pos[g]) (with 0 and +infinity as outer boundaries); at_root
    // means the seed equals pos[at_root].
    size_t gap = m;
    long at_root = -1;
    for (size_t i = 0; i < m; ++i) {
        int c = CertReal::compare(CertReal(seed), pos[i]);
        if (c == 0) {
            at_root = static_cast<long>(i);
            break;
        }
        if (c < 0) {
            gap = i;
            break;
        }
    }

    // Cache gap verdicts (each gap is sampled at most once).
    std::vector<int> verdict(m + 1, -1);
    auto ok = [&](size_t gi) -> bool {
        if (verdict[gi] < 0) verdict[gi] = gap_ok(gi) ? 1 : 0;
        return verdict[gi] == 1;
    };

    CertReal lo_end, hi_end;
    // Leftward expansion starts at the gap left of the seed position.
    {
        size_t start = at_root >= 0 ? static_cast<size_t>(at_root) : gap;
        if (at_root >= 0 && !ok(start)) {
            lo_end = pos[static_cast<size_t>(at_root)];
        } else {
            size_t j = start;
            while (j > 0 && ok(j - 1)) --j;
            // The union of gaps j..start (plus interior roots) is inside the
            // component; its left boundary:
            if (j == 0 && ok(0))
                lo_end = CertReal(Q(0));
            else if (j == 0)
                lo_end = pos[0];  // unreachable for consistent seeds
            else
                lo_end = pos[j - 1];
            if (j == 0 && !ok(0)) lo_end = pos[0];
        }
    }
    // Rightward expansion.
    {
        size_t start = at_root >= 0 ? static_cast<size_t>(at_root) + 1 : gap;
        if (at_root >= 0 && !ok(start)) {
            hi_end = pos[static_cast<size_t>(at_root)];
        } else {
            size_t k = start;
            while (k < m && ok(k + 1)) ++k;
            if (k == m)
                hi_end = CertReal::infinity();
            else
                hi_end = pos[k];
        }
    }
    return {lo_end, hi_end};
}

}  // namespace unitcf
