#include <catch2/catch_amalgamated.hpp>

#include "unitcf/gcf.hpp"

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

FieldElement elem(const NumberField& F, std::initializer_list<long> coords) {
    std::vector<Q> v;
    for (long c : coords) v.emplace_back(c);
    return F.element(std::move(v));
}

void check_window(const GcfStep& st, double s, double t) {
    CHECK(std::abs(st.s.to_double() - s) < 1e-4);
    if (std::isinf(t))
        CHECK(st.t.is_infinite());
    else
        CHECK(std::abs(st.t.to_double() - t) < 1e-4);
}

/// eps equals target up to sign and inversion.
bool matches_up_to_sign_inv(const FieldElement& eps, const FieldElement& target) {
    FieldElement ti = target.inverse();
    return eps == target || eps == -target || eps == ti || eps == -ti;
}

/// Windows overlap consecutively and the right endpoints strictly increase.
void check_monotone(const std::vector<GcfStep>& steps) {
    for (size_t i = 0; i + 1 < steps.size(); ++i) {
        CHECK(CertReal::compare(steps[i + 1].s, steps[i].t) <= 0);
        CHECK(CertReal::compare(steps[i].t, steps[i + 1].t) < 0);
        CHECK(CertReal::compare(steps[i].s, steps[i].t) < 0);
    }
}

}  // namespace

TEST_CASE("real quadratic d = 2: full worked run") {
    NumberField F = NumberField::create(makep({-2, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    CHECK(*run.period == std::make_pair(0L, 6L));
    REQUIRE(run.steps.size() >= 7);

    // B_0 = identity; the worked partial quotients A_1 .. A_6.
    CHECK(run.steps[0].B == MatZ::identity(2, Z(0), Z(1)));
    std::vector<MatZ> golden_A = {
        matz({{1, 1}, {0, 1}}),  matz({{0, -1}, {1, 0}}), matz({{1, -1}, {0, 1}}),
        matz({{1, -1}, {0, 1}}), matz({{0, -1}, {1, 0}}), matz({{1, 1}, {0, 1}}),
    };
    for (size_t k = 1; k <= 6; ++k) CHECK(run.steps[k].A == golden_A[k - 1]);
    CHECK(run.steps[6].B == matz({{-3, -4}, {-2, -3}}));

    // Window endpoints of the worked run (display variable t).
    check_window(run.steps[0], 0.69108, 1.44701);
    check_window(run.steps[1], 1.44701, 2.96306);
    check_window(run.steps[2], 1.96703, 4.02791);
    check_window(run.steps[3], 4.02791, 8.43379);
    check_window(run.steps[4], 8.43379, 17.27);
    check_window(run.steps[5], 11.4647, 23.4764);
    check_monotone(run.steps);

    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    CHECK(cert.epsilon == elem(F, {-3, -2}));  // -3 - 2 sqrt2
    CHECK(cert.epsilon.norm() == 1);
    // rho = |sigma_1(eps)| = 3 + 2 sqrt2 > 1.
    CHECK(std::abs(cert.rho.to_double() - (3 + 2 * std::sqrt(2.0))) < 1e-9);
}

TEST_CASE("real quadratic d = 3: full worked run") {
    NumberField F = NumberField::create(makep({-3, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    CHECK(*run.period == std::make_pair(0L, 4L));
    REQUIRE(run.steps.size() >= 5);

    CHECK(run.steps[0].B == MatZ::identity(2, Z(0), Z(1)));
    std::vector<MatZ> golden_A = {
        matz({{1, 1}, {0, 1}}),
        matz({{1, 1}, {0, 1}}),
        matz({{0, -1}, {1, 1}}),
        matz({{1, 1}, {0, 1}}),
    };
    for (size_t k = 1; k <= 4; ++k) CHECK(run.steps[k].A == golden_A[k - 1]);
    CHECK(run.steps[4].B == matz({{2, 3}, {1, 2}}));

    check_window(run.steps[0], 0.742955, 1.34598);
    check_window(run.steps[1], 1.34598, 3.73205);
    check_window(run.steps[2], 3.73205, 4.40807);
    check_window(run.steps[3], 3.73205, 10.348);

    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    CHECK(cert.epsilon == elem(F, {2, 1}));  // 2 + sqrt3
    CHECK(cert.epsilon.norm() == 1);
}

TEST_CASE("backward run, d = 2") {
    NumberField F = NumberField::create(makep({-2, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_backward(g);
    REQUIRE(run.period.has_value());
    UnitCertificate back = extract_unit(run.steps, *run.period, g);
    // The backward fundamental multiplier is the forward one up to sign and
    // inversion.
    CHECK(matches_up_to_sign_inv(back.epsilon, elem(F, {-3, -2})));
    // Backward windows walk toward 0.
    for (size_t i = 0; i + 1 < run.steps.size(); ++i)
        CHECK(CertReal::compare(run.steps[i + 1].s, run.steps[i].s) < 0);
}

TEST_CASE("complex cubic d = 2") {
    NumberField F = NumberField::create(makep({-2, 0, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    check_window(run.steps[0], 0.410037, 1.09074);
    check_monotone(run.steps);
    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    CHECK(matches_up_to_sign_inv(cert.epsilon, elem(F, {1, 1, 1})));  // 1 + theta + theta^2
    // The worked run closes its period at B = [[1,2,2],[1,1,2],[1,1,1]].
    CHECK(run.steps.back().B == matz({{1, 2, 2}, {1, 1, 2}, {1, 1, 1}}));
}

TEST_CASE("complex cubic d = 3") {
    NumberField F = NumberField::create(makep({-3, 0, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    // Worked run: preparation frame and the period-closing frame.
    CHECK(run.steps[0].B == matz({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(run.steps.back().B == matz({{4, 6, 13}, {3, 4, 9}, {2, 3, 6}}));
    check_window(run.steps[0], 0.987248, 1.13841);
    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    CHECK(cert.epsilon == elem(F, {4, 3, 2}));  // 4 + 3 theta + 2 theta^2
}

TEST_CASE("totally imaginary quartic x^4 + 2") {
    NumberField F = NumberField::create(makep({2, 0, 0, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    check_window(run.steps[0], 0.638754, 1.56555);
    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    CHECK(matches_up_to_sign_inv(cert.epsilon, elem(F, {-1, 0, 1, 1})));  // -1 + theta^2 + theta^3
}

TEST_CASE("chi-unit of Q(2^(1/4)) over Q(sqrt2)") {
    NumberField F = NumberField::create(makep({-2, 0, 0, 0, 1}));
    FieldElement sg = F.element({Q(0), Q(0), Q(1), Q(0)});  // theta^2 = sqrt2
    FlatGeodesic g = heegner_chi(F, sg, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    check_window(run.steps[0], 0.858498, 1.16483);
    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    FieldElement target = elem(F, {3, 2, 2, 2});  // 3 + 2 theta + 2 theta^2 + 2 theta^3
    CHECK(matches_up_to_sign_inv(cert.epsilon, target));
    CHECK(relative_norm(cert.epsilon, sg) == F.from_q(Q(1)));
    CHECK(cert.variant == FlatGeodesic::Variant::chi);
}

TEST_CASE("non-power basis (2 sqrt2, 2) gives the same multiplier") {
    NumberField F = NumberField::create(makep({-2, 0, 1}));
    QBasis w(std::vector<FieldElement>{elem(F, {0, 2}), elem(F, {2, 0})});
    FlatGeodesic g = heegner_rank_one(F, w);
    GcfRun run = run_forward(g);
    REQUIRE(run.period.has_value());
    UnitCertificate cert = extract_unit(run.steps, *run.period, g);
    CHECK(matches_up_to_sign_inv(cert.epsilon, elem(F, {3, 2})));
}

TEST_CASE("classical continued fraction oracle sweep") {
    auto squarefree = [](long d) {
        for (long f = 2; f * f <= d; ++f)
            if (d % (f * f) == 0) return false;
        return true;
    };
    for (long d = 2; d <= 50; ++d) {
        if (!squarefree(d)) continue;
        CAPTURE(d);
        NumberField F = NumberField::create(makep({-d, 0, 1}));
        FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
        GcfRun run = run_forward(g);
        REQUIRE(run.period.has_value());
        check_monotone(run.steps);
        UnitCertificate cert = extract_unit(run.steps, *run.period, g);
        REQUIRE(cert.epsilon.norm() == 1);

        // Oracle: fundamental unit u of Z[sqrt d] from the classical continued
        // fraction; its norm-one fundamental power is u or u^2.
        auto [x, y] = classical_cf_unit(d);
        FieldElement u = F.element({Q(x), Q(y)});
        FieldElement eta = (u.norm() == 1) ? u : u * u;

        // Normalize eps to the representative with |sigma_1| > 1, then it must
        // be +/- eta^m with small index m.
        FieldElement eps = cert.epsilon;
        if ((gcfdetail::scaled_abs_sq(g, eps) - RElem(1)).sign() < 0) eps = eps.inverse();
        long index = 0;
        FieldElement pow = eta;
        for (long m = 1; m <= 3; ++m) {
            if (eps == pow || eps == -pow) {
                index = m;
                break;
            }
            pow = pow * eta;
        }
        CAPTURE(index);
        CHECK(index >= 1);
        CHECK(index <= 3);
    }
}

TEST_CASE("trace formatting") {
    NumberField F = NumberField::create(makep({-2, 0, 1}));
    FlatGeodesic g = heegner_rank_one(F, QBasis::power_descending(F));
    GcfRun run = run_forward(g);
    std::string tr = format_trace(run, g);
    CHECK(tr.find("preparation") != std::string::npos);
    CHECK(tr.find("period start") != std::string::npos);
    CHECK(tr.find("{0.69108") != std::string::npos);
    CHECK(tr.find("[-3, -4; -2, -3]") != std::string::npos);
}

TEST_CASE("element and matrix rendering") {
    NumberField F = NumberField::create(makep({-2, 0, 0, 1}));
    CHECK(theta_string(elem(F, {4, 3, 2})) == "4+3*theta+2*theta^2");
    CHECK(theta_string(elem(F, {-1, 0, 1})) == "-1+theta^2");
    CHECK(theta_string(elem(F, {0, 0, 0})) == "0");
    CHECK(matrix_string(matz({{1, -2}, {0, 3}})) == "[1, -2; 0, 3]");
}

TEST_CASE("classical continued fraction helper, known values") {
    CHECK(classical_cf_unit(2) == std::make_pair(Z(1), Z(1)));
    CHECK(classical_cf_unit(3) == std::make_pair(Z(2), Z(1)));
    CHECK(classical_cf_unit(13) == std::make_pair(Z(18), Z(5)));
    CHECK(classical_cf_unit(19) == std::make_pair(Z(170), Z(39)));
    CHECK_THROWS(classical_cf_unit(16));
}
