#pragma once

#include <cctype>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "embedding.hpp"
#include "intfactor.hpp"
#include "matrix.hpp"

namespace unitcf {

struct Reducible : std::runtime_error {
    Reducible() : std::runtime_error("defining polynomial is reducible over Q") {}
};
struct Degenerate : std::runtime_error {
    Degenerate() : std::runtime_error("defining polynomial must have degree >= 2") {}
};
struct NotInImage : std::runtime_error {
    NotInImage() : std::runtime_error("matrix is not in the image of the multiplication embedding") {}
};
struct NotQuadraticOver : std::runtime_error {
    NotQuadraticOver() : std::runtime_error("field is not quadratic over the given subfield") {}
};

namespace nfdetail {
struct NFData {
    PolyQ f;  // monic irreducible, integer coefficients
    long n = 0;
    long r1 = 0, r2 = 0;
    std::vector<QInterval> real_ivs;              // ascending
    mutable std::optional<EmbeddingData> embed;   // built on first use
};
}  // namespace nfdetail

class FieldElement;

class NumberField {
  public:
    NumberField() = default;

    /// Construct Q[x]/(poly); poly must be monic with integer coefficients.
    static NumberField create(const PolyQ& poly) {
        if (poly.degree() < 2) throw Degenerate();
        for (const Q& c : poly.c)
            if (c.get_den() != 1) throw std::invalid_argument("field_new: integer coefficients required");
        if (poly.lc() != 1) throw std::invalid_argument("field_new: monic polynomial required");
        if (!is_irreducible_q(poly)) throw Reducible();
        auto d = std::make_shared<nfdetail::NFData>();
        d->f = poly;
        d->n = poly.degree();
        d->real_ivs = isolate_real_roots(poly);
        d->r1 = static_cast<long>(d->real_ivs.size());
        d->r2 = (d->n - d->r1) / 2;
        NumberField F;
        F.d_ = std::move(d);
        return F;
    }

    const PolyQ& defining_poly() const { return d_->f; }
    long degree() const { return d_->n; }
    long r1() const { return d_->r1; }
    long r2() const { return d_->r2; }
    long num_places() const { return d_->r1 + d_->r2; }
    bool same_as(const NumberField& o) const { return d_ == o.d_; }
    bool valid() const { return static_cast<bool>(d_); }

    const EmbeddingData& embedding() const {
        if (!d_->embed) d_->embed = build_embedding_field(d_->f);
        return *d_->embed;
    }

    FieldElement element(std::vector<Q> coords) const;
    FieldElement from_q(const Q& c) const;
    FieldElement gen() const;  // theta

  private:
    std::shared_ptr<const nfdetail::NFData> d_;
};

/// Element of a number field in the power basis 1, theta, ..., theta^(n-1).
class FieldElement {
  public:
    FieldElement() = default;
    FieldElement(NumberField F, std::vector<Q> coords) : F_(std::move(F)), c_(std::move(coords)) {
        c_.resize(static_cast<size_t>(F_.degree()), Q(0));
    }

    const NumberField& field() const { return F_; }
    const std::vector<Q>& coords() const { return c_; }

    bool is_zero() const {
        for (const Q& x : c_)
            if (x != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    Q rational_value() const {
        if (!is_rational()) throw std::domain_error("FieldElement: not rational");
        return c_.empty() ? Q(0) : c_[0];
    }

    bool operator==(const FieldElement& o) const { return c_ == o.c_; }
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement operator-() const {
        std::vector<Q> r = c_;
        for (Q& x : r) x = -x;
        return FieldElement(F_, std::move(r));
    }
    FieldElement operator+(const FieldElement& o) const {
        check(o);
        std::vector<Q> r = c_;
        for (size_t i = 0; i < r.size(); ++i) r[i] += o.c_[i];
        return FieldElement(F_, std::move(r));
    }
    FieldElement operator-(const FieldElement& o) const { return *this + (-o); }
    FieldElement operator*(const FieldElement& o) const {
        check(o);
        PolyQ a{std::vector<Q>(c_)}, b{std::vector<Q>(o.c_)};
        PolyQ prod = (a * b) % F_.defining_poly();
        std::vector<Q> r = prod.c;
        return FieldElement(F_, std::move(r));
    }
    FieldElement operator*(const Q& s) const {
        std::vector<Q> r = c_;
        for (Q& x : r) x *= s;
        return FieldElement(F_, std::move(r));
    }
    FieldElement inverse() const {
        PolyQ a{std::vector<Q>(c_)};
        if (a.is_zero()) throw std::domain_error("FieldElement: division by zero");
        // Extended Euclid with the (irreducible) defining polynomial.
        PolyQ r0 = F_.defining_poly(), r1 = a;
        PolyQ s0, s1 = PolyQ::constant(Q(1));
        while (!r1.is_zero()) {
            auto [q, r2] = r0.divmod(r1);
            PolyQ s2 = s0 - q * s1;
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        PolyQ inv = s0 * (Q(1) / r0.c[0]);
        inv = inv % F_.defining_poly();
        std::vector<Q> r = inv.c;
        return FieldElement(F_, std::move(r));
    }
    FieldElement operator/(const FieldElement& o) const { return *this * o.inverse(); }

    FieldElement pow(long e) const {
        FieldElement base = *this, acc = F_.from_q(Q(1));
        bool neg = e < 0;
        unsigned long ue = static_cast<unsigned long>(neg ? -e : e);
        while (ue) {
            if (ue & 1) acc = acc * base;
            base = base * base;
            ue >>= 1;
        }
        return neg ? acc.inverse() : acc;
    }

    /// Matrix of multiplication by this element in the power basis
    /// (column j = coordinates of a * theta^j).
    MatQ power_mult_matrix() const {
        size_t n = c_.size();
        MatQ M(n, n, Q(0));
        PolyQ cur{std::vector<Q>(c_)};
        for (size_t j = 0; j < n; ++j) {
            for (size_t i = 0; i < cur.c.size(); ++i) M(i, j) = cur.c[i];
            cur = (cur * PolyQ::x()) % F_.defining_poly();
        }
        return M;
    }

    Q norm() const { return power_mult_matrix().det(); }
    Q trace() const {
        MatQ M = power_mult_matrix();
        Q t(0);
        for (size_t i = 0; i < M.n; ++i) t += M(i, i);
        return t;
    }

    /// "[c0, c1, ..., c_{n-1}]"
    std::string to_string() const {
        std::string out = "[";
        for (size_t i = 0; i < c_.size(); ++i) {
            if (i) out += ", ";
            out += c_[i].get_str();
        }
        return out + "]";
    }

  private:
    NumberField F_;
    std::vector<Q> c_;

    void check(const FieldElement& o) const {
        if (!F_.same_as(o.F_)) throw std::invalid_argument("FieldElement: different fields");
    }
};

inline FieldElement NumberField::element(std::vector<Q> coords) const {
    return FieldElement(*this, std::move(coords));
}
inline FieldElement NumberField::from_q(const Q& c) const {
    std::vector<Q> v(static_cast<size_t>(degree()), Q(0));
    v[0] = c;
    return FieldElement(*this, std::move(v));
}
inline FieldElement NumberField::gen() const {
    std::vector<Q> v(static_cast<size_t>(degree()), Q(0));
    v[1] = 1;
    return FieldElement(*this, std::move(v));
}

/// Q-basis of a number field.
class QBasis {
  public:
    QBasis() = default;
    explicit QBasis(std::vector<FieldElement> elems) : w_(std::move(elems)) {
        size_t n = w_.size();
        if (n == 0 || n != static_cast<size_t>(w_[0].field().degree()))
            throw std::invalid_argument("QBasis: need n elements");
        MatQ W = coord_matrix();
        if (W.det() == 0) throw std::invalid_argument("QBasis: elements are not a basis");
    }

    const std::vector<FieldElement>& elements() const { return w_; }
    const NumberField& field() const { return w_[0].field(); }
    size_t size() const { return w_.size(); }
    const FieldElement& operator[](size_t i) const { return w_[i]; }

    /// Row i = power-basis coordinates of w_i.
    MatQ coord_matrix() const {
        size_t n = w_.size();
        MatQ W(n, n, Q(0));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) W(i, j) = w_[i].coords()[j];
        return W;
    }

    /// Standard power basis theta^(n-1), ..., theta, 1 (descending), the
    /// layout used by the worked examples.
    static QBasis power_descending(const NumberField& F) {
        std::vector<FieldElement> v;
        long n = F.degree();
        for (long i = n - 1; i >= 0; --i) {
            std::vector<Q> c(static_cast<size_t>(n), Q(0));
            c[static_cast<size_t>(i)] = 1;
            v.push_back(F.element(std::move(c)));
        }
        return QBasis(std::move(v));
    }

  private:
    std::vector<FieldElement> w_;
};

/// Matrix of multiplication by a in the basis w: M with M w = a w (w column).
inline MatQ mult_matrix(const FieldElement& a, const QBasis& w) {
    size_t n = w.size();
    MatQ AW(n, n, Q(0));
    for (size_t i = 0; i < n; ++i) {
        FieldElement awi = a * w[i];
        for (size_t j = 0; j < n; ++j) AW(i, j) = awi.coords()[j];
    }
    return AW * w.coord_matrix().inverse();
}

/// Partial inverse of the multiplication embedding: the lambda with
/// A w = lambda w, if it exists.
inline FieldElement phi(const MatQ& A, const QBasis& w) {
    size_t n = w.size();
    if (A.n != n || A.m != n) throw std::invalid_argument("phi: matrix size mismatch");
    const NumberField& F = w.field();
    std::vector<FieldElement> v;
    v.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        FieldElement vi = F.from_q(Q(0));
        for (size_t j = 0; j < n; ++j) vi = vi + w[j] * A(i, j);
        v.push_back(vi);
    }
    FieldElement lambda = v[0] / w[0];
    for (size_t i = 0; i < n; ++i) {
        if (w[i] * lambda != v[i]) throw NotInImage();
    }
    return lambda;
}

namespace nfdetail {
/// Degree of the minimal polynomial of g over Q, and optionally the first
/// linear dependence among powers of g.
inline long subfield_degree(const FieldElement& g) {
    long n = g.field().degree();
    std::vector<std::vector<Q>> pows;
    FieldElement cur = g.field().from_q(Q(1));
    for (long k = 0; k <= n; ++k) {
        pows.push_back(cur.coords());
        // Rank test via Gaussian elimination on the rows collected so far.
        MatQ M(pows.size(), static_cast<size_t>(n), Q(0));
        for (size_t i = 0; i < pows.size(); ++i)
            for (size_t j = 0; j < static_cast<size_t>(n); ++j) M(i, j) = pows[i][j];
        // Row-reduce; rank < rows means dependence at this k.
        size_t rank = 0;
        for (size_t col = 0; col < M.m && rank < M.n; ++col) {
            size_t piv = rank;
            while (piv < M.n && M(piv, col) == 0) ++piv;
            if (piv == M.n) continue;
            for (size_t j = 0; j < M.m; ++j) std::swap(M(piv, j), M(rank, j));
            for (size_t i = 0; i < M.n; ++i) {
                if (i == rank || M(i, col) == 0) continue;
                Q f = M(i, col) / M(rank, col);
                for (size_t j = 0; j < M.m; ++j) M(i, j) -= f * M(rank, j);
            }
            ++rank;
        }
        if (rank < pows.size()) return k;  // g^k depends on lower powers
        cur = cur * g;
    }
    return n;  // unreachable for a field element
}
}  // namespace nfdetail

/// Relative norm a * s(a) for the quadratic extension F / Q(subfield_gen),
/// where s is the nontrivial automorphism fixing Q(subfield_gen).
inline FieldElement relative_norm(const FieldElement& a, const FieldElement& subfield_gen) {
    const NumberField& F = a.field();
    long n = F.degree();
    long m = nfdetail::subfield_degree(subfield_gen);
    if (2 * m != n) throw NotQuadraticOver();
    // Solve theta^2 + b theta + c = 0 with b, c in Q(g): unknowns are the
    // g-power coordinates of b and c.
    size_t un = static_cast<size_t>(n);
    MatQ M(un, un, Q(0));
    FieldElement gpow = F.from_q(Q(1));
    FieldElement theta = F.gen();
    for (long j = 0; j < m; ++j) {
        FieldElement col_b = gpow * theta;  // coefficient of mu_j
        for (size_t i = 0; i < un; ++i) {
            M(i, static_cast<size_t>(j)) = col_b.coords()[i];
            M(i, static_cast<size_t>(m + j)) = gpow.coords()[i];
        }
        gpow = gpow * subfield_gen;
    }
    FieldElement rhs = -(theta * theta);
    MatQ Minv;
    try {
        Minv = M.inverse();
    } catch (const std::domain_error&) {
        throw NotQuadraticOver();
    }
    std::vector<Q> rv = rhs.coords();
    std::vector<Q> sol = Minv * rv;
    FieldElement b = F.from_q(Q(0)), c = F.from_q(Q(0));
    gpow = F.from_q(Q(1));
    for (long j = 0; j < m; ++j) {
        b = b + gpow * sol[static_cast<size_t>(j)];
        c = c + gpow * sol[static_cast<size_t>(m + j)];
        gpow = gpow * subfield_gen;
    }
    // s(theta) = -b - theta; evaluate a at s(theta).
    FieldElement stheta = -b - theta;
    FieldElement sa = F.from_q(Q(0));
    for (size_t i = a.coords().size(); i-- > 0;) sa = sa * stheta + F.from_q(a.coords()[i]);
    return a * sa;
}

/// Certified archimedean embedding value.
struct EmbedValue {
    bool is_real = true;
    QInterval re, im;  // im = [0,0] for real places
};

/// Enclosure of sigma_place(a) with width <= 2^-precision_bits per part.
/// Places: real embeddings ascending, then complex representatives (positive
/// imaginary part) by ascending real part.
inline EmbedValue embed(const FieldElement& a, long place_index, int precision_bits) {
    const NumberField& F = a.field();
    if (place_index < 0 || place_index >= F.num_places())
        throw std::invalid_argument("embed: place index out of range");
    const EmbeddingData& E = F.embedding();
    Q eps(1, Z(1) << precision_bits);
    PolyQ ap{std::vector<Q>(a.coords())};
    if (place_index < F.r1()) {
        RElem v = ap.is_zero() ? RElem(0) : [&] {
            RElem th = E.real_roots[static_cast<size_t>(place_index)];
            RElem acc(ap.c.back());
            for (size_t i = ap.c.size(); i-- > 1;) acc = acc * th + RElem(ap.c[i - 1]);
            return acc;
        }();
        return {true, v.enclosure(eps), QInterval(Q(0))};
    }
    const auto& pr = E.pairs[static_cast<size_t>(place_index - F.r1())];
    // a mod (z^2 - s z + p): value = c1 * alpha + c0 with c in the real field.
    RElem c1(0), c0(0);
    for (size_t i = ap.c.size(); i-- > 0;) {
        // (c1 z + c0) * z = c1 z^2 + c0 z = c1 (s z - p) + c0 z
        RElem nc1 = c1 * pr.s + c0;
        RElem nc0 = -(c1 * pr.p);
        c1 = nc1;
        c0 = nc0 + RElem(ap.c[i]);
    }
    RElem re = c1 * pr.s * RElem(Q(1, 2)) + c0;
    RElem normsq = c1 * c1 * pr.p + c0 * c1 * pr.s + c0 * c0;
    RElem imsq = normsq - re * re;
    QInterval imiv = CertReal::sqrt_of(imsq).enclosure(eps);
    return {false, re.enclosure(eps), imiv};
}

/// Parse "x^3 - 2" style integer polynomials.
inline PolyQ parse_poly(const std::string& text, char var = 'x') {
    std::vector<Q> coeffs;
    auto bump = [&](size_t deg, const Q& c) {
        if (coeffs.size() <= deg) coeffs.resize(deg + 1, Q(0));
        coeffs[deg] += c;
    };
    size_t i = 0, n = text.size();
    auto skip_ws = [&] {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    bool first = true;
    skip_ws();
    while (i < n) {
        int sign = 1;
        skip_ws();
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw std::invalid_argument("parse_poly: expected + or - between terms");
        }
        first = false;
        // term: [integer][*][var[^exp]]
        bool have_coeff = false;
        Z coeff = 1;
        if (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            size_t j = i;
            while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            coeff = Z(text.substr(i, j - i));
            i = j;
            have_coeff = true;
            skip_ws();
            if (i < n && text[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        size_t deg = 0;
        if (i < n && text[i] == var) {
            ++i;
            deg = 1;
            skip_ws();
            if (i < n && text[i] == '^') {
                ++i;
                skip_ws();
                size_t j = i;
                while (j < n && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                if (j == i) throw std::invalid_argument("parse_poly: missing exponent");
                deg = std::stoul(text.substr(i, j - i));
                i = j;
            }
        } else if (!have_coeff) {
            throw std::invalid_argument("parse_poly: empty term");
        }
        bump(deg, Q(coeff * sign));
        skip_ws();
    }
    if (coeffs.empty()) throw std::invalid_argument("parse_poly: empty polynomial");
    return PolyQ(std::move(coeffs));
}

/// Parse "[c0, c1, ...]" rational coordinate lists.
inline std::vector<Q> parse_coords(const std::string& text) {
    std::vector<Q> out;
    size_t i = 0, n = text.size();
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i == n || text[i] != '[') throw std::invalid_argument("parse_coords: expected '['");
    ++i;
    std::string cur;
    for (; i < n; ++i) {
        char ch = text[i];
        if (ch == ',' || ch == ']') {
            // trim
            size_t a = cur.find_first_not_of(" \t");
            size_t b = cur.find_last_not_of(" \t");
            if (a == std::string::npos) throw std::invalid_argument("parse_coords: empty entry");
            Q v(cur.substr(a, b - a + 1));
            v.canonicalize();
            out.push_back(v);
            cur.clear();
            if (ch == ']') return out;
        } else {
            cur += ch;
        }
    }
    throw std::invalid_argument("parse_coords: missing ']'");
}

}  // namespace unitcf
