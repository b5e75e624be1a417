#pragma once

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geodesic.hpp"

namespace unitcf {

struct CertificateFailure : std::runtime_error {
    explicit CertificateFailure(const std::string& what) : std::runtime_error("certificate check failed: " + what) {}
};

/// One step of the geodesic continued fraction.
struct GcfStep {
    long k = 0;
    MatZ A;         // A_k (identity for the preparation step)
    MatZ B;         // B_k
    CertReal s, t;  // membership window of B_k^{-1} geod around u_k
    Q u;            // sample parameter used to find this step
};

struct BudgetExhausted : std::runtime_error {
    std::vector<GcfStep> steps;  // partial run, for inspection
    explicit BudgetExhausted(std::vector<GcfStep> st)
        : std::runtime_error("no period found within the step budget"), steps(std::move(st)) {}
};

struct UnitCertificate {
    std::pair<long, long> period;  // (k0, k1)
    MatZ P;                        // B_{k1} B_{k0}^{-1}
    FieldElement epsilon;
    CertReal rho;  // |sigma_1(epsilon)| > 1 or < 1; rho != 1 certified
    FlatGeodesic::Variant variant = FlatGeodesic::Variant::rank_one;
};

struct GcfRun {
    std::vector<GcfStep> steps;
    std::optional<std::pair<long, long>> period;  // indices into k-values
};

namespace gcfdetail {

inline MatZ to_int(const MatQ& m) {
    MatZ r(m.n, m.m, Z(0));
    for (size_t i = 0; i < m.a.size(); ++i) {
        if (m.a[i].get_den() != 1) throw std::logic_error("gcf: expected integral matrix");
        r.a[i] = m.a[i].get_num();
    }
    return r;
}

inline MatQ to_rat(const MatZ& m) {
    MatQ r(m.n, m.m, Q(0));
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = Q(m.a[i]);
    return r;
}

/// |sigma_1(a)|^2 at the scaled place of the geodesic, as an exact element.
inline RElem scaled_abs_sq(const FlatGeodesic& geod, const FieldElement& a) {
    const NumberField& F = geod.provenance_field();
    const EmbeddingData& E = F.embedding();
    auto real_sq = [&](const RElem& root) {
        RElem v = gdetail::eval_at(a.coords(), root);
        return v * v;
    };
    auto pair_sq = [&](const EmbeddingData::ComplexPair& pr) {
        auto [c0, c1] = gdetail::reduce_quad(a.coords(), pr.s, pr.p);
        return c1 * c1 * pr.p + c0 * c1 * pr.s + c0 * c0;
    };
    if (geod.variant() == FlatGeodesic::Variant::chi) return real_sq(E.real_roots[1]);
    if (F.r1() == 2) return real_sq(E.real_roots[1]);
    if (F.r1() == 1) return real_sq(E.real_roots[0]);
    return pair_sq(E.pairs[1]);
}

/// Sign-diagonal twists D = diag(+-1) with det +1: an LLL frame B is canonical
/// only up to negating basis columns, so periodicity is tested modulo that
/// residual freedom (the identity twist is tried first).
inline std::vector<MatZ> sign_twists(size_t n) {
    std::vector<MatZ> out;
    for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
        if (__builtin_popcountl(mask) % 2 != 0) continue;  // det +1 only
        MatZ D = MatZ::identity(n, Z(0), Z(1));
        for (size_t i = 0; i < n; ++i)
            if ((mask >> i) & 1) D(i, i) = -1;
        out.push_back(std::move(D));
    }
    return out;
}

struct PeriodHit {
    MatZ P;
    FieldElement eps;
};

/// Exact periodicity test for the pair (k0, k1): B_{k1} D B_{k0}^{-1} (for
/// some sign twist D) must be a phi-image of norm one (and relative norm one
/// for the chi variant) that is not a torsion unit.
inline std::optional<PeriodHit> period_element(const FlatGeodesic& geod, const MatZ& Bk0,
                                               const MatZ& Bk1) {
    const QBasis& w = geod.provenance_basis();
    MatQ Bk0i = mat_inv_z(Bk0);
    for (const MatZ& D : sign_twists(Bk0.n)) {
        MatQ P = to_rat(Bk1) * to_rat(D) * Bk0i;
        FieldElement eps;
        try {
            eps = phi(P, w);
        } catch (const NotInImage&) {
            continue;
        }
        if (eps.norm() != 1) continue;
        if (geod.variant() == FlatGeodesic::Variant::chi) {
            const FieldElement& g = geod.chi_subfield_gen();
            if (relative_norm(eps, g) != geod.provenance_field().from_q(Q(1))) continue;
        }
        // Non-torsion <=> |sigma_1(eps)| != 1 (all absolute values are 1 once
        // the scaled one is, for these rank-one situations).
        if ((scaled_abs_sq(geod, eps) - RElem(1)).is_zero()) continue;
        return PeriodHit{to_int(P), eps};
    }
    return std::nullopt;
}

}  // namespace gcfdetail

/// First period pair in lexicographic (k1, k0) order, or nullopt.
inline std::optional<std::pair<long, long>> detect_period(const std::vector<GcfStep>& steps,
                                                          const FlatGeodesic& geod) {
    for (size_t j1 = 1; j1 < steps.size(); ++j1)
        for (size_t j0 = 0; j0 < j1; ++j0)
            if (gcfdetail::period_element(geod, steps[j0].B, steps[j1].B))
                return std::make_pair(steps[j0].k, steps[j1].k);
    return std::nullopt;
}

namespace gcfdetail {

/// Incremental period scan: compare the freshly appended step against all
/// earlier ones (preserves the lexicographic (k1, k0) discovery order).
inline std::optional<std::pair<long, long>> period_with_last(const std::vector<GcfStep>& steps,
                                                             const FlatGeodesic& geod) {
    size_t j1 = steps.size() - 1;
    for (size_t j0 = 0; j0 < j1; ++j0)
        if (period_element(geod, steps[j0].B, steps[j1].B))
            return std::make_pair(steps[j0].k, steps[j1].k);
    return std::nullopt;
}

}  // namespace gcfdetail

/// Forward loop of the geodesic continued fraction. Stops at the first exact
/// period, at a sentinel window (t_k = infinity), or throws BudgetExhausted.
inline GcfRun run_forward(const FlatGeodesic& geod, const Q& omega = Q(3, 4), long max_steps = 512,
                          const Q& u0 = Q(1)) {
    GcfRun run;
    size_t n = geod.dim();
    // Preparation: B_0 with geod(u0) in B_0 L.
    MatZ B0 = lll_reduce(geod.point_at(u0), omega);
    RealInterval w0 = window(geod, B0, omega, u0);
    run.steps.push_back({0, MatZ::identity(n, Z(0), Z(1)), B0, w0.lo, w0.hi, u0});

    for (long k = 0; k < max_steps; ++k) {
        const GcfStep& cur = run.steps.back();
        if (cur.t.is_infinite()) return run;  // forward loop stops
        MatZ Binv = gcfdetail::to_int(mat_inv_z(cur.B));
        for (long l = 1;; l *= 2) {
            if (l > (1L << 40)) throw std::logic_error("run_forward: sampling failed to converge");
            Q eps(1, 2 * l);
            Q u = cur.t.enclosure(eps).hi + eps;
            // Incremental reduction in the current frame keeps the partial
            // quotients A small and canonical.
            MatZ A = lll_reduce(act(Binv, geod.point_at(u)), omega);
            MatZ Bn = cur.B * A;
            RealInterval wn = window(geod, Bn, omega, u);
            // Valid step <=> the new window reaches back to t_k.
            if (CertReal::compare(wn.lo, cur.t) <= 0) {
                run.steps.push_back({cur.k + 1, std::move(A), std::move(Bn), wn.lo, wn.hi, u});
                break;
            }
        }
        run.period = gcfdetail::period_with_last(run.steps, geod);
        if (run.period) return run;
    }
    throw BudgetExhausted(std::move(run.steps));
}

/// Backward loop: mirror of run_forward toward t -> 0.
inline GcfRun run_backward(const FlatGeodesic& geod, const Q& omega = Q(3, 4), long max_steps = 512,
                           const Q& u0 = Q(1)) {
    GcfRun run;
    size_t n = geod.dim();
    MatZ B0 = lll_reduce(geod.point_at(u0), omega);
    RealInterval w0 = window(geod, B0, omega, u0);
    run.steps.push_back({0, MatZ::identity(n, Z(0), Z(1)), B0, w0.lo, w0.hi, u0});

    for (long k = 0; k < max_steps; ++k) {
        const GcfStep& cur = run.steps.back();
        if (cur.s.sign() == 0) return run;  // backward loop stops at the 0 sentinel
        MatZ Binv = gcfdetail::to_int(mat_inv_z(cur.B));
        for (long l = 1;; l *= 2) {
            if (l > (1L << 40)) throw std::logic_error("run_backward: sampling failed to converge");
            Q eps(1, 2 * l);
            QInterval se = cur.s.enclosure(eps);
            Q u = se.lo - eps;
            if (u <= 0) continue;
            MatZ Ainc = lll_reduce(act(Binv, geod.point_at(u)), omega);
            MatZ Bn = cur.B * Ainc;
            RealInterval wn = window(geod, Bn, omega, u);
            if (CertReal::compare(wn.hi, cur.s) >= 0) {
                // A_k with B_{k-1} = B_k A_k^{-1}: A = Bn^{-1} B_k.
                MatZ A = gcfdetail::to_int(mat_inv_z(Ainc));
                run.steps.push_back({cur.k - 1, std::move(A), std::move(Bn), wn.lo, wn.hi, u});
                break;
            }
        }
        run.period = gcfdetail::period_with_last(run.steps, geod);
        if (run.period) return run;
    }
    throw BudgetExhausted(std::move(run.steps));
}

/// Build and fully verify the unit certificate of a detected period.
inline UnitCertificate extract_unit(const std::vector<GcfStep>& steps, std::pair<long, long> period,
                                    const FlatGeodesic& geod) {
    const GcfStep* st0 = nullptr;
    const GcfStep* st1 = nullptr;
    for (const auto& s : steps) {
        if (s.k == period.first) st0 = &s;
        if (s.k == period.second) st1 = &s;
    }
    if (!st0 || !st1) throw CertificateFailure("period indices not present in the step list");
    auto hit = gcfdetail::period_element(geod, st0->B, st1->B);
    if (!hit) throw CertificateFailure("period pair has no unit element");
    MatZ P = std::move(hit->P);
    if (mat_det_z(P) != 1) throw CertificateFailure("det P != 1");
    const QBasis& w = geod.provenance_basis();
    FieldElement eps;
    try {
        eps = phi(gcfdetail::to_rat(P), w);
    } catch (const NotInImage&) {
        throw CertificateFailure("P is not a phi-image");
    }
    if (eps.norm() != 1) throw CertificateFailure("norm != 1");
    if (geod.variant() == FlatGeodesic::Variant::chi &&
        relative_norm(eps, geod.chi_subfield_gen()) != geod.provenance_field().from_q(Q(1)))
        throw CertificateFailure("relative norm != 1");
    RElem rho_sq = gcfdetail::scaled_abs_sq(geod, eps);
    if ((rho_sq - RElem(1)).is_zero()) throw CertificateFailure("torsion unit");
    UnitCertificate cert;
    cert.period = period;
    cert.P = std::move(P);
    cert.epsilon = eps;
    cert.rho = CertReal::sqrt_of(rho_sq);
    cert.variant = geod.variant();
    return cert;
}

// ---------- trace formatting ----------

/// Polynomial-in-theta rendering of a field element, e.g. "-1+2*theta^2".
inline std::string theta_string(const FieldElement& a) {
    std::ostringstream out;
    bool first = true;
    const auto& c = a.coords();
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        Q v = c[i];
        if (first) {
            if (v < 0) out << "-";
        } else {
            out << (v < 0 ? "-" : "+");
        }
        Q av = v < 0 ? Q(-v) : v;
        bool unit_coeff = (av == 1 && i > 0);
        if (!unit_coeff) out << av.get_str();
        if (i > 0) {
            if (!unit_coeff) out << "*";
            out << "theta";
            if (i > 1) out << "^" << i;
        }
        first = false;
    }
    if (first) out << "0";
    return out.str();
}

inline std::string matrix_string(const MatZ& m) {
    std::ostringstream out;
    out << "[";
    for (size_t i = 0; i < m.n; ++i) {
        if (i) out << "; ";
        for (size_t j = 0; j < m.m; ++j) {
            if (j) out << ", ";
            out << m(i, j).get_str();
        }
    }
    out << "]";
    return out.str();
}

/// Ratios [v_1/v_n, ..., v_{n-1}/v_n] of v = B_k^{-1} w, the scenery
/// coordinates shown in step traces.
inline std::vector<FieldElement> scenery(const MatZ& B, const QBasis& w) {
    size_t n = w.size();
    MatQ Bi = mat_inv_z(B);
    std::vector<FieldElement> v;
    for (size_t i = 0; i < n; ++i) {
        FieldElement vi = w.field().from_q(Q(0));
        for (size_t j = 0; j < n; ++j) vi = vi + w[j] * Bi(i, j);
        v.push_back(vi);
    }
    std::vector<FieldElement> out;
    for (size_t i = 0; i + 1 < n; ++i) out.push_back(v[i] / v[n - 1]);
    return out;
}

/// Trace of a run in the style of the worked examples: a `{s_k, t_k}` window
/// line, then a `{A_k, B_k, [B_k^-1 w]}` step line, with period markers.
inline std::string format_trace(const GcfRun& run, const FlatGeodesic& geod) {
    std::ostringstream out;
    const QBasis& w = geod.provenance_basis();
    for (size_t i = 0; i < run.steps.size(); ++i) {
        const GcfStep& st = run.steps[i];
        if (i == 0)
            out << "{preparation; " << matrix_string(st.B);
        else
            out << "{" << matrix_string(st.A) << ", " << matrix_string(st.B);
        for (const auto& r : scenery(st.B, w)) out << ", " << theta_string(r);
        out << "}";
        if (run.period && (st.k == run.period->first || st.k == run.period->second))
            out << " : period start";
        out << "\n";
        if (i + 1 < run.steps.size())
            out << "{" << st.s.to_decimal(6) << ", " << st.t.to_decimal(6) << "}\n";
    }
    return out.str();
}

// ---------- classical continued fraction oracle helpers ----------

/// Fundamental unit of Z[sqrt(d)] by the classical continued fraction of
/// sqrt(d): u = p_{l-2} sqrt(d)... returns (x, y) with u = x + y sqrt(d),
/// the fundamental solution of x^2 - d y^2 = +/-1.
inline std::pair<Z, Z> classical_cf_unit(long d) {
    Z a0 = sqrt(Z(d));
    if (a0 * a0 == d) throw std::invalid_argument("classical_cf_unit: d is a square");
    // Continued fraction of sqrt(d): period ends when a_k = 2 a_0.
    Z m = 0, den = 1, a = a0;
    Z p_prev = 1, p = a0, q_prev = 0, q = 1;
    for (int guard = 0; guard < 100000; ++guard) {
        m = den * a - m;
        den = (Z(d) - m * m) / den;
        a = (a0 + m) / den;
        if (a == 2 * a0) return {p, q};
        Z pn = a * p + p_prev, qn = a * q + q_prev;
        p_prev = p;
        p = pn;
        q_prev = q;
        q = qn;
    }
    throw std::logic_error("classical_cf_unit: period not found");
}

}  // namespace unitcf
