#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "unitcf/geodesic.hpp"

using namespace unitcf;

namespace {

PolyQ makep(std::initializer_list<long> cs) {
    std::vector<Q> v;
    for (long c : cs) v.emplace_back(c);
    return PolyQ(std::move(v));
}

MatZ matz(std::initializer_list<std::initializer_list<long>> rows) {
    size_t n = rows.size();
    MatZ m(n, rows.begin()->size(), Z(0));
    size_t i = 0;
    for (auto& r : rows) {
        size_t j = 0;
        for (long v : r) m(i, j++) = v;
        ++i;
    }
    return m;
}

void check_interval(const RealInterval& iv, double lo, double hi) {
    Q eps(1, 100000);
    auto el = iv.lo.enclosure(eps), eh = iv.hi.enclosure(eps);
    CHECK(std::abs(el.mid().get_d() - lo) < 1e-4);
    CHECK(std::abs(eh.mid().get_d() - hi) < 1e-4);
}

}  // namespace

TEST_CASE("rank-one geodesic of a real quadratic field") {
    NumberField F = NumberField::create(makep({-2, 0, 1}));
    QBasis w = QBasis::power_descending(F);
    FlatGeodesic g = heegner_rank_one(F, w);
    REQUIRE(g.terms().size() == 2);
    CHECK(g.terms()[0].e == 0);
    CHECK(g.terms()[1].e == 2);
    // Unscaled place -sqrt2: outer((-sqrt2, 1)) = [[2, -sqrt2], [-sqrt2, 1]].
    const MatR& M0 = g.terms()[0].M;
    CHECK(M0(0, 0) == RElem(2));
    CHECK(M0(1, 1) == RElem(1));
    CHECK(M0(0, 1).sign() < 0);
    CHECK((M0(0, 1) * M0(0, 1)) == RElem(2));
    // Scaled place +sqrt2: [[2, sqrt2], [sqrt2, 1]].
    const MatR& M2 = g.terms()[1].M;
    CHECK(M2(0, 1).sign() > 0);
    CHECK((M0(0, 1) + M2(0, 1)).is_zero());
    // Gram at t = 1 is positive definite.
    CHECK_NOTHROW(GramPoint::make(g.gram_at(Q(1))));
}

TEST_CASE("signature gate") {
    CHECK_THROWS_AS(heegner_rank_one(NumberField::create(makep({1, 3, 0, 0, 1})),
                                     QBasis::power_descending(NumberField::create(makep({1, 3, 0, 0, 1})))),
                    WrongSignature);
}

TEST_CASE("quadratic windows match the worked run") {
    NumberField F2 = NumberField::create(makep({-2, 0, 1}));
    FlatGeodesic g2 = heegner_rank_one(F2, QBasis::power_descending(F2));
    MatZ id = MatZ::identity(2, Z(0), Z(1));
    check_interval(window(g2, id, Q(3, 4), Q(1)), 0.69108, 1.44701);

    NumberField F3 = NumberField::create(makep({-3, 0, 1}));
    FlatGeodesic g3 = heegner_rank_one(F3, QBasis::power_descending(F3));
    check_interval(window(g3, id, Q(3, 4), Q(1)), 0.742955, 1.34598);
    // Second step: gamma = B_1 = [[1,1],[0,1]], seed inside (1.34598, 3.73205).
    check_interval(window(g3, matz({{1, 1}, {0, 1}}), Q(3, 4), Q(2)), 1.34598, 3.73205);
}

TEST_CASE("cubic window matches the worked run") {
    NumberField F = NumberField::create(makep({-2, 0, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    REQUIRE(g.dim() == 3);
    MatZ id = MatZ::identity(3, Z(0), Z(1));
    check_interval(window(g, id, Q(3, 4), Q(1)), 0.410037, 1.09074);
}

TEST_CASE("quartic window matches the worked run") {
    NumberField F = NumberField::create(makep({2, 0, 0, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    REQUIRE(g.dim() == 4);
    MatZ id = MatZ::identity(4, Z(0), Z(1));
    check_interval(window(g, id, Q(3, 4), Q(1)), 0.638754, 1.56555);
}

TEST_CASE("chi geodesic of Q(2^(1/4)) over Q(sqrt2)") {
    NumberField F = NumberField::create(makep({-2, 0, 0, 0, 1}));
    FieldElement sg = F.element({Q(0), Q(0), Q(1), Q(0)});  // theta^2
    QBasis w = QBasis::power_descending(F);
    FlatGeodesic g = heegner_chi(F, sg, w);
    REQUIRE(g.terms().size() == 3);
    CHECK(g.terms()[0].e == 0);
    CHECK(g.terms()[1].e == 2);
    CHECK(g.terms()[2].e == 4);
    MatZ id = MatZ::identity(4, Z(0), Z(1));
    check_interval(window(g, id, Q(3, 4), Q(1)), 0.858498, 1.16483);
}

TEST_CASE("chi splitting pattern gate") {
    // Totally imaginary quartic: no real places at all.
    NumberField F = NumberField::create(makep({2, 0, 0, 0, 1}));
    FieldElement sg = F.element({Q(0), Q(0), Q(1), Q(0)});
    CHECK_THROWS_AS(heegner_chi(F, sg, QBasis::power_descending(F)), SplittingPatternMismatch);
    // Non-quadratic subfield generator.
    NumberField G = NumberField::create(makep({-2, 0, 0, 0, 1}));
    CHECK_THROWS_AS(heegner_chi(G, G.gen(), QBasis::power_descending(G)), NotQuadraticOver);
}

TEST_CASE("diagonal geodesic has a sentinel window") {
    // Q(t) = diag(t^2, 1): membership iff omega <= t^2, window [sqrt(omega), inf).
    MatR M0(2, 2, RElem(0)), M2(2, 2, RElem(0));
    M0(1, 1) = RElem(1);
    M2(0, 0) = RElem(1);
    FlatGeodesic g({{0, M0}, {2, M2}}, {1, 1}, {1, 0});
    auto iv = window(g, MatZ::identity(2, Z(0), Z(1)), Q(3, 4), Q(1));
    CHECK(iv.hi.is_infinite());
    CHECK(iv.lo == CertReal::sqrt_of(RElem(Q(3, 4))));
}

TEST_CASE("window polynomial structure and exact consistency") {
    NumberField F = NumberField::create(makep({-2, 0, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    size_t n = g.dim();
    MatZ gamma = matz({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
    WindowPolys wp = window_polys(g, gamma, Q(3, 4));
    CHECK(wp.inequalities.size() == (n * n + n) / 2 - 1 + (n * (n - 1)) / 2);
    // Degree bound: sum n_i d_i = 1*2 + 2*0 = 2 in t... doubled display = 2.
    long bound = 0;
    for (size_t i = 0; i < g.lambda().size(); ++i) bound += g.lambda()[i] * g.d()[i] * 2;
    for (size_t j = 1; j <= n; ++j)
        for (size_t i = 1; i <= j; ++i) CHECK(wp.B(i - 1, j - 1).degree() <= bound);

    // Exact agreement with the Gram-point minors at a sample parameter, and
    // the determinant identity C_{i+1} B_{i+1,i+1} = B_ii B_{i+2,i+2} + B_{i,i+1}^2.
    Q t(7, 5);
    MatQ gi = mat_inv_z(gamma);
    MatR gir(n, n, RElem(0));
    for (size_t i = 0; i < n * n; ++i) gir.a[i] = RElem(gi.a[i]);
    MatR Pt = gir * g.gram_at(t) * gir.transpose();
    for (size_t j = 1; j <= n; ++j)
        for (size_t i = 1; i <= j; ++i)
            CHECK((poly_eval_q(wp.B(i - 1, j - 1), t) - hsdetail::minor_B(Pt, i, j)).is_zero());
    for (size_t i = 2; i <= n; ++i)
        CHECK((poly_eval_q(wp.C[i - 2], t) - hsdetail::minor_C(Pt, i)).is_zero());
    for (size_t i = 1; i < n; ++i) {
        RElem c = hsdetail::minor_C(Pt, i + 1);
        RElem lhs = c * hsdetail::minor_B(Pt, i + 1, i + 1);
        RElem rhs = hsdetail::minor_B(Pt, i, i) * hsdetail::minor_B(Pt, i + 2, i + 2) +
                    hsdetail::minor_B(Pt, i, i + 1) * hsdetail::minor_B(Pt, i, i + 1);
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("window is invariant under positive scaling of the Gram terms") {
    NumberField F = NumberField::create(makep({-3, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    std::vector<FlatGeodesic::Term> scaled;
    for (const auto& term : g.terms()) {
        MatR m = term.M;
        for (auto& x : m.a) x = x * RElem(Q(7, 3));
        scaled.push_back({term.e, std::move(m)});
    }
    FlatGeodesic g2(std::move(scaled), g.lambda(), g.d(), g.variant());
    MatZ id = MatZ::identity(2, Z(0), Z(1));
    auto a = window(g, id, Q(3, 4), Q(1));
    auto b = window(g2, id, Q(3, 4), Q(1));
    CHECK(CertReal::compare(a.lo, b.lo) == 0);
    CHECK(CertReal::compare(a.hi, b.hi) == 0);
}
