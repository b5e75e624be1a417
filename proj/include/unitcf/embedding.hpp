#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "realalg.hpp"
#include "realfield.hpp"

namespace unitcf {

/// Map an element of an old field presentation into a new one, given the
/// image of the old generator.
inline RElem remap_elem(const RElem& x, const RElem& new_gen) {
    const PolyQ& r = x.rep();
    if (r.is_zero()) return RElem(0);
    RElem acc(r.c.back());
    for (size_t i = r.c.size() - 1; i-- > 0;) acc = acc * new_gen + RElem(r.c[i]);
    return acc;
}

inline PolyR remap_poly(const PolyR& p, const RElem& new_gen) {
    PolyR out;
    out.c.reserve(p.c.size());
    for (const auto& c : p.c) out.c.push_back(remap_elem(c, new_gen));
    out.normalize();
    return out;
}

/// All archimedean places of Q[x]/(f) expressed inside one real field E:
/// the real roots as elements of E (ascending), and for each conjugate pair
/// an exact quadratic factor z^2 - s z + p of f over E (ascending real part
/// s/2).
struct EmbeddingData {
    RealField E;
    std::vector<RElem> real_roots;
    struct ComplexPair {
        RElem s, p;  // z^2 - s z + p divides f over E; s = 2 Re, p = |root|^2
    };
    std::vector<ComplexPair> pairs;
};

namespace edetail {

/// Res_z(f(z), z^n f(x/z)) — a rational polynomial whose roots include all
/// pairwise root products of f (in particular every |alpha|^2 of a conjugate
/// pair). Computed by evaluation-interpolation.
inline PolyQ product_resultant(const PolyQ& f) {
    long n = f.degree();
    long D = n * n;
    std::vector<Q> xs, ys;
    xs.reserve(static_cast<size_t>(D + 1));
    ys.reserve(static_cast<size_t>(D + 1));
    for (long j = 0; j <= D; ++j) {
        Q xj(j);
        PolyQ b;  // z^n f(xj / z) = sum_i f_i xj^i z^(n-i)
        b.c.assign(static_cast<size_t>(n + 1), Q(0));
        for (long i = 0; i <= n; ++i)
            b.c[static_cast<size_t>(n - i)] = f.c[static_cast<size_t>(i)] * q_pow(xj, i);
        b.normalize();
        xs.push_back(xj);
        ys.push_back(b.is_zero() ? Q(0) : poly_resultant(f, b));
    }
    return rfdetail::lagrange_interpolate(xs, ys);
}

}  // namespace edetail

/// Build the joint archimedean presentation of f (monic, squarefree over Q).
inline EmbeddingData build_embedding_field(const PolyQ& f) {
    EmbeddingData out;
    out.E = RealField::rationals();
    auto real_ivs = isolate_real_roots(f);

    // Adjoin the real roots in ascending order.
    for (const auto& iv : real_ivs) {
        JoinResult jr = join_root(out.E, f, iv);
        for (auto& r : out.real_roots) r = remap_elem(r, jr.old_gen);
        out.real_roots.push_back(jr.adjoined);
        out.E = jr.field;
    }

    // Split off the real roots; h carries the complex pairs.
    PolyR h;
    h.c.reserve(f.c.size());
    for (const Q& c : f.c) h.c.push_back(RElem(c));
    h.normalize();
    for (const auto& th : out.real_roots) {
        PolyR lin;
        lin.c = {-th, RElem(1)};
        auto [q, r] = h.divmod(lin);
        if (!r.is_zero()) throw std::logic_error("embedding: real root does not divide");
        h = q;
    }

    PolyQ sum_poly, prod_poly;  // computed lazily
    while (h.degree() > 0) {
        if (h.degree() == 2) {
            RElem lead_inv = h.c[2].inverse();
            out.pairs.push_back({-(h.c[1] * lead_inv), h.c[0] * lead_inv});
            break;
        }
        // Several conjugate pairs: identify one via the root-sum polynomial,
        // trying each real root candidate and verifying exactly.
        if (sum_poly.is_zero()) sum_poly = squarefree_part(rfdetail::joint_resultant(f, f, Q(1)));
        bool found = false;
        for (const auto& siv : isolate_real_roots(sum_poly)) {
            JoinResult jr = join_root(out.E, sum_poly, siv);
            RElem s = jr.adjoined;
            PolyR h2 = remap_poly(h, jr.old_gen);
            // g = gcd(h2(z), h2(s - z)): nontrivial iff s pairs up roots of h2.
            PolyR lin;
            lin.c = {s, RElem(-1)};
            PolyR shifted = poly_compose(h2, lin);
            PolyR g = poly_gcd(h2, shifted);
            if (g.degree() == 2) {
                RElem p = g.c[0] / g.c[2];
                RElem smon = -(g.c[1] / g.c[2]);
                // s consistency (g should be z^2 - s z + p).
                if ((smon - s).is_zero()) {
                    PolyR quad;
                    quad.c = {p, -s, RElem(1)};
                    auto [q, r] = h2.divmod(quad);
                    if (r.is_zero()) {
                        for (auto& rr : out.real_roots) rr = remap_elem(rr, jr.old_gen);
                        for (auto& pr : out.pairs) {
                            pr.s = remap_elem(pr.s, jr.old_gen);
                            pr.p = remap_elem(pr.p, jr.old_gen);
                        }
                        out.E = jr.field;
                        out.pairs.push_back({s, p});
                        h = q;
                        found = true;
                        break;
                    }
                }
            }
            if (g.degree() > 2) {
                // Degenerate: several pairs share this s. Identify p among the
                // real roots of the root-product polynomial by exact trial.
                if (prod_poly.is_zero())
                    prod_poly = squarefree_part(edetail::product_resultant(f));
                for (const auto& piv : isolate_real_roots(prod_poly)) {
                    if (piv.hi <= 0) continue;  // |alpha|^2 > 0
                    JoinResult j2 = join_root(jr.field, prod_poly, piv);
                    RElem s2 = remap_elem(s, j2.old_gen);
                    PolyR h3 = remap_poly(h2, j2.old_gen);
                    PolyR quad;
                    quad.c = {j2.adjoined, -s2, RElem(1)};
                    auto [q, r] = h3.divmod(quad);
                    if (!r.is_zero()) continue;
                    RElem disc = s2 * s2 - RElem(4) * j2.adjoined;
                    if (disc.sign() >= 0) continue;  // want a complex pair
                    RElem gen2 = j2.old_gen;  // image of jr.field's generator
                    for (auto& rr : out.real_roots) rr = remap_elem(remap_elem(rr, jr.old_gen), gen2);
                    for (auto& pr : out.pairs) {
                        pr.s = remap_elem(remap_elem(pr.s, jr.old_gen), gen2);
                        pr.p = remap_elem(remap_elem(pr.p, jr.old_gen), gen2);
                    }
                    out.E = j2.field;
                    out.pairs.push_back({s2, j2.adjoined});
                    h = q;
                    found = true;
                    break;
                }
                if (found) break;
            }
        }
        if (!found) throw std::logic_error("embedding: failed to split complex pairs");
    }

    // Order pairs by ascending real part (s/2), exactly.
    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const EmbeddingData::ComplexPair& a, const EmbeddingData::ComplexPair& b) {
                  return (a.s - b.s).sign() < 0;
              });
    return out;
}

}  // namespace unitcf
