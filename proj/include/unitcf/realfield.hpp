#pragma once

#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "config.hpp"
#include "intfactor.hpp"
#include "poly.hpp"

namespace unitcf {

/// A real algebraic field presentation: Q[x]/(M) together with a rational
/// interval isolating one distinguished real root gamma of M. M is monic and
/// squarefree but need not be irreducible; whenever a zero divisor shows up,
/// the modulus is *shrunk* in place to the factor whose root set contains
/// gamma (a ring projection, so every previously computed representative
/// stays valid). Handles share state: refinement and shrinking are visible
/// through all copies.
struct RealFieldData {
    PolyQ modulus;  // monic, squarefree
    QInterval iv;   // isolates gamma; modulus nonzero at both endpoints

    RealFieldData(PolyQ m, QInterval i) : modulus(std::move(m)), iv(std::move(i)) {}

    /// One bisection step on the isolating interval.
    void refine() { refine_root_interval(modulus, iv); }

    void refine_below(const Q& width) {
        while (iv.width() > width) refine();
    }

    /// Replace the modulus by a monic factor that still has gamma as a root.
    void shrink_to(const PolyQ& factor) { modulus = factor.monic(); }

    /// Does this (squarefree, rational) divisor of the modulus vanish at
    /// gamma? Decided by a Sturm count on the isolating interval.
    bool vanishes_at_gamma(const PolyQ& g) {
        auto chain = sturm_chain(g);
        for (;;) {
            if (g(iv.lo) == 0 || g(iv.hi) == 0) {
                refine();
                continue;
            }
            return sturm_count(chain, iv.lo, iv.hi) == 1;
        }
    }
};

class RealField {
  public:
    RealField() = default;
    explicit RealField(std::shared_ptr<RealFieldData> d) : d_(std::move(d)) {}

    /// Field presented by a root of f (made squarefree) isolated by iv.
    /// Attempts to minimize the modulus by rational factorization; falls back
    /// to the squarefree modulus when the factorization budget is exceeded.
    static RealField from_root(const PolyQ& f, QInterval iv, bool minimize = true) {
        PolyQ m = squarefree_part(f);
        if (m.degree() < 1) throw std::invalid_argument("RealField: constant polynomial");
        // Nudge endpoints off roots (if an endpoint is a root it is not the
        // isolated one, which callers promise to be interior), then certify.
        auto chain = sturm_chain(m);
        Q w = iv.width();
        for (int k = 2; m(iv.lo) == 0; ++k) {
            if (k > 200) throw std::invalid_argument("RealField: endpoint stuck on a root");
            iv = QInterval(iv.lo + w / (Z(1) << k), iv.hi);
        }
        for (int k = 2; m(iv.hi) == 0; ++k) {
            if (k > 200) throw std::invalid_argument("RealField: endpoint stuck on a root");
            iv = QInterval(iv.lo, iv.hi - w / (Z(1) << k));
        }
        if (sturm_count(chain, iv.lo, iv.hi) != 1)
            throw std::invalid_argument("RealField: interval does not isolate a single root");
        auto data = std::make_shared<RealFieldData>(m, iv);
        if (minimize && m.degree() > 1) {
            try {
                auto facs = factor_squarefree_q(m);
                if (facs.size() > 1) {
                    for (const auto& g : facs) {
                        if (data->vanishes_at_gamma(g)) {
                            data->shrink_to(g);
                            break;
                        }
                    }
                }
            } catch (const FactorBudgetExceeded&) {
                // keep the squarefree modulus; shrink lazily later
            }
        }
        return RealField(data);
    }

    /// The trivial field Q (modulus x, gamma = 0).
    static RealField rationals() {
        return from_root(PolyQ::x(), QInterval(Q(-1, 2), Q(1, 2)), false);
    }

    RealFieldData* data() const { return d_.get(); }
    const std::shared_ptr<RealFieldData>& ptr() const { return d_; }
    bool valid() const { return static_cast<bool>(d_); }
    long degree() const { return d_->modulus.degree(); }

    bool same_as(const RealField& o) const { return d_ == o.d_; }

  private:
    std::shared_ptr<RealFieldData> d_;
};

/// Element of a RealField, or a plain rational constant when no field handle
/// is attached (so that generic code can build literals like K(0), K(1)).
class RElem {
  public:
    RElem() : rep_() {}
    RElem(long v) : rep_(std::vector<Q>{Q(v)}) { rep_.normalize(); }
    RElem(const Q& v) : rep_(std::vector<Q>{v}) { rep_.normalize(); }
    RElem(RealField f, PolyQ rep) : field_(std::move(f)), rep_(std::move(rep)) { reduce(); }

    static RElem gen(const RealField& f) { return RElem(f, PolyQ::x()); }
    static RElem constant(const RealField& f, const Q& v) { return RElem(f, PolyQ::constant(v)); }

    const RealField& field() const { return field_; }
    const PolyQ& rep() const { return rep_; }
    bool is_rational_rep() const { return rep_.degree() <= 0; }
    Q rational_value() const {
        if (rep_.is_zero()) return Q(0);
        if (rep_.degree() != 0) throw std::domain_error("RElem: not a rational representative");
        return rep_.c[0];
    }

    // ----- arithmetic -----

    RElem operator-() const { return make(field_, -rep_); }
    RElem operator+(const RElem& o) const { return make(merged(o), rep_ + o.rep_); }
    RElem operator-(const RElem& o) const { return make(merged(o), rep_ - o.rep_); }
    RElem operator*(const RElem& o) const { return make(merged(o), rep_ * o.rep_); }
    RElem operator/(const RElem& o) const { return *this * o.inverse(); }

    bool operator==(const RElem& o) const { return (*this - o).is_zero(); }
    bool operator!=(const RElem& o) const { return !(*this == o); }
    bool operator<(const RElem& o) const { return (*this - o).sign() < 0; }
    bool operator>(const RElem& o) const { return (*this - o).sign() > 0; }
    bool operator<=(const RElem& o) const { return (*this - o).sign() <= 0; }
    bool operator>=(const RElem& o) const { return (*this - o).sign() >= 0; }

    /// Exact zero test; may shrink the field's modulus.
    bool is_zero() const {
        if (rep_.is_zero()) return true;
        if (rep_.degree() == 0) return false;
        RealFieldData* F = field_.data();
        PolyQ g = poly_gcd(rep_, F->modulus);
        if (g.degree() == 0) return false;
        if (F->vanishes_at_gamma(g)) {
            F->shrink_to(g);
            const_cast<RElem*>(this)->reduce();
            return true;
        }
        F->shrink_to(F->modulus / g);
        const_cast<RElem*>(this)->reduce();
        return rep_.is_zero();
    }

    /// Exact sign (-1, 0, 1).
    int sign() const {
        const_cast<RElem*>(this)->reduce();
        if (rep_.is_zero()) return 0;
        if (rep_.degree() == 0) return rep_.c[0] > 0 ? 1 : -1;
        RealFieldData* F = field_.data();
        if (config::interval_fast_path) {
            for (int round = 0; round < 12; ++round) {
                QInterval v = eval_interval();
                if (!v.contains_zero()) return v.definite_sign();
                F->refine();
            }
        }
        if (is_zero()) return 0;
        if (rep_.degree() == 0) return rep_.c[0] > 0 ? 1 : -1;
        for (;;) {
            QInterval v = eval_interval();
            if (!v.contains_zero()) return v.definite_sign();
            F->refine();
        }
    }

    RElem inverse() const {
        const_cast<RElem*>(this)->reduce();
        if (rep_.is_zero()) throw std::domain_error("RElem: division by zero");
        if (rep_.degree() == 0) return make(field_, PolyQ::constant(Q(1) / rep_.c[0]));
        RealFieldData* F = field_.data();
        for (;;) {
            PolyQ g = poly_gcd(rep_, F->modulus);
            if (g.degree() == 0) break;
            if (F->vanishes_at_gamma(g)) throw std::domain_error("RElem: division by zero");
            F->shrink_to(F->modulus / g);
            const_cast<RElem*>(this)->reduce();
            if (rep_.degree() == 0) {
                if (rep_.is_zero()) throw std::domain_error("RElem: division by zero");
                return make(field_, PolyQ::constant(Q(1) / rep_.c[0]));
            }
        }
        // Extended Euclid: s*rep + t*M = 1.
        PolyQ r0 = F->modulus, r1 = rep_;
        PolyQ s0, s1 = PolyQ::constant(Q(1));
        while (!r1.is_zero()) {
            auto [q, r2] = r0.divmod(r1);
            PolyQ s2 = s0 - q * s1;
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 is a nonzero constant.
        return make(field_, s0 * (Q(1) / r0.c[0]));
    }

    /// Rational enclosure of the value with width at most eps.
    QInterval enclosure(const Q& eps) const {
        const_cast<RElem*>(this)->reduce();
        if (rep_.degree() <= 0) return QInterval(rep_.is_zero() ? Q(0) : rep_.c[0]);
        RealFieldData* F = field_.data();
        for (;;) {
            QInterval v = eval_interval();
            if (v.width() <= eps) return v;
            F->refine();
        }
    }

    /// Exact floor of the value.
    Z floor() const {
        const_cast<RElem*>(this)->reduce();
        if (rep_.degree() <= 0) return q_floor(rep_.is_zero() ? Q(0) : rep_.c[0]);
        QInterval v = enclosure(Q(1, 3));
        Z fl = q_floor(v.lo), fh = q_floor(v.hi);
        if (fl == fh) return fl;
        // The interval straddles the integer fh; compare exactly.
        int s = (*this - RElem(Q(fh))).sign();
        return s >= 0 ? fh : fl;
    }

    double to_double() const {
        QInterval v = enclosure(Q(1, Z(1) << 60));
        return v.mid().get_d();
    }

  private:
    RealField field_;
    PolyQ rep_;

    static RElem make(RealField f, PolyQ rep) {
        RElem e;
        e.field_ = std::move(f);
        e.rep_ = std::move(rep);
        e.reduce();
        return e;
    }

    /// Common field of two operands (rational constants have none).
    RealField merged(const RElem& o) const {
        if (field_.valid() && o.field_.valid()) {
            if (!field_.same_as(o.field_))
                throw std::invalid_argument("RElem: operands from different fields");
            return field_;
        }
        return field_.valid() ? field_ : o.field_;
    }

    void reduce() {
        if (field_.valid() && rep_.degree() >= field_.data()->modulus.degree())
            rep_ = rep_ % field_.data()->modulus;
        else if (field_.valid())
            rep_.normalize();
    }

    QInterval eval_interval() const {
        RealFieldData* F = field_.data();
        return rep_.eval<QInterval>(QInterval(F->iv.lo, F->iv.hi));
    }

    QInterval enclosure_step() const {
        field_.data()->refine();
        return eval_interval();
    }
};

template <>
struct coeff_traits<RElem> {
    static bool is_zero(const RElem& x) { return x.is_zero(); }
    static RElem inverse(const RElem& x) { return x.inverse(); }
};

inline RElem operator+(const Q& a, const RElem& b) { return RElem(a) + b; }
inline RElem operator-(const Q& a, const RElem& b) { return RElem(a) - b; }
inline RElem operator*(const Q& a, const RElem& b) { return RElem(a) * b; }

/// Result of adjoining a new real algebraic number to a field.
struct JoinResult {
    RealField field;      // the (possibly new) common field
    RElem old_gen;        // image of the previous field's generator
    RElem adjoined;       // the adjoined root as an element of `field`
};

namespace rfdetail {

/// Lagrange interpolation through (x_i, y_i).
inline PolyQ lagrange_interpolate(const std::vector<Q>& xs, const std::vector<Q>& ys) {
    PolyQ acc;
    for (size_t i = 0; i < xs.size(); ++i) {
        PolyQ li = PolyQ::constant(Q(1));
        Q denom(1);
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            li = li * PolyQ(std::vector<Q>{-xs[j], Q(1)});
            denom *= xs[i] - xs[j];
        }
        acc = acc + li * (ys[i] / denom);
    }
    return acc;
}

/// Res_y(A(y), B_c(x - y)) where B_c(z) = c^deg(B) B(z/c), by
/// evaluation-interpolation (both inputs monic, result monic up to sign).
inline PolyQ joint_resultant(const PolyQ& A, const PolyQ& B, const Q& c) {
    long a = A.degree(), b = B.degree();
    PolyQ Bc;
    Bc.c.resize(B.c.size());
    for (long i = 0; i <= b; ++i)
        Bc.c[static_cast<size_t>(i)] =
            B.c[static_cast<size_t>(i)] * q_pow(c, b - i);
    Bc.normalize();
    long D = a * b;
    std::vector<Q> xs, ys;
    xs.reserve(static_cast<size_t>(D + 1));
    ys.reserve(static_cast<size_t>(D + 1));
    for (long j = 0; j <= D; ++j) {
        Q xj(j);
        // B_c(xj - y) as a polynomial in y.
        PolyQ shifted = poly_compose(Bc, PolyQ(std::vector<Q>{xj, Q(-1)}));
        xs.push_back(xj);
        ys.push_back(poly_resultant(A, shifted));
    }
    return lagrange_interpolate(xs, ys);
}

}  // namespace rfdetail

/// Adjoin a root beta of B (squarefree over Q, isolated by beta_iv) to the
/// field E, returning the joint field together with the images of E's
/// generator and of beta.
inline JoinResult join_root(const RealField& E, const PolyQ& B_in, QInterval beta_iv) {
    PolyQ B = squarefree_part(B_in);
    // Trivial cases first.
    if (B.degree() == 1) {
        Q beta = -B.c[0] / B.c[1];
        return {E, RElem::gen(E), RElem::constant(E, beta)};
    }
    if (E.degree() == 1) {
        Q gamma = -E.data()->modulus.c[0];
        RealField F = RealField::from_root(B, beta_iv);
        return {F, RElem::constant(F, gamma), RElem::gen(F)};
    }
    const PolyQ MA = E.data()->modulus;
    for (long ci = 1;; ++ci) {
        for (Q c : {Q(ci), Q(-ci)}) {
            PolyQ C = squarefree_part(rfdetail::joint_resultant(MA, B, c));
            // Isolating interval for gamma' = gamma + c*beta.
            auto chain = sturm_chain(C);
            QInterval biv = beta_iv;
            bool ok = false;
            QInterval J(Q(0));
            for (int rounds = 0; rounds < 256; ++rounds) {
                const QInterval& giv = E.data()->iv;
                QInterval cb = QInterval(c) * biv;
                J = QInterval(giv.lo + cb.lo, giv.hi + cb.hi);
                if (C(J.lo) != 0 && C(J.hi) != 0 && sturm_count(chain, J.lo, J.hi) == 1) {
                    ok = true;
                    break;
                }
                E.data()->refine();
                refine_root_interval(B, biv);
            }
            if (!ok) continue;
            RealField F = RealField::from_root(C, J);
            RElem gp = RElem::gen(F);
            // M_A(gamma' - c x) as a polynomial over F.
            Poly<RElem> shifted;
            {
                Poly<RElem> lin;
                lin.c = {gp, RElem(-c)};
                Poly<RElem> ma;
                ma.c.reserve(MA.c.size());
                for (const Q& q : MA.c) ma.c.push_back(RElem(q));
                shifted = poly_compose(ma, lin);
            }
            Poly<RElem> bpoly;
            bpoly.c.reserve(B.c.size());
            for (const Q& q : B.c) bpoly.c.push_back(RElem(q));
            bpoly.normalize();
            shifted.normalize();
            Poly<RElem> g = poly_gcd(bpoly, shifted);
            if (g.degree() != 1) continue;
            RElem beta = -(g.c[0] / g.c[1]);
            RElem old_gen = gp - RElem(c) * beta;
            return {F, old_gen, beta};
        }
    }
}

}  // namespace unitcf
