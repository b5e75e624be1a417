// Command-line front end: rank-one unit and chi-unit computation by geodesic
// continued fractions, and {infinity,p}-continued fractions for imaginary
// quadratic fields (p-units, Pell-like solutions, ideal class orders).
//
// Exit codes: 0 success, 1 invalid input, 2 budget exhausted.

#include <cctype>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unitcf/config.hpp"
#include "unitcf/gcf.hpp"
#include "unitcf/pcf.hpp"
#include "unitcf/rootext.hpp"

using json = nlohmann::ordered_json;
using namespace unitcf;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Q parse_rational(const std::string& s) {
    try {
        Q r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw UsageError("cannot parse rational '" + s + "'");
    }
}

/// Parse a polynomial in x with rational coefficients, e.g. "x^4-2",
/// "2x^2 + x - 1/2".
PolyQ parse_poly(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw UsageError("empty polynomial");
    std::vector<Q> coeffs;
    auto add = [&](long deg, const Q& c) {
        if (deg >= static_cast<long>(coeffs.size())) coeffs.resize(static_cast<size_t>(deg) + 1, Q(0));
        coeffs[static_cast<size_t>(deg)] += c;
    };
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= s.size()) throw UsageError("dangling sign in polynomial '" + text + "'");
        std::string num;
        while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '/')) num += s[i++];
        Q coef = num.empty() ? Q(1) : parse_rational(num);
        if (sign < 0) coef = -coef;
        long deg = 0;
        if (i < s.size() && s[i] == '*') ++i;
        if (i < s.size() && (s[i] == 'x' || s[i] == 't')) {
            ++i;
            deg = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                std::string e;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e += s[i++];
                if (e.empty()) throw UsageError("missing exponent in polynomial '" + text + "'");
                deg = std::stol(e);
            }
        } else if (num.empty()) {
            throw UsageError("cannot parse polynomial '" + text + "'");
        }
        add(deg, coef);
    }
    return PolyQ(std::move(coeffs));
}

std::string poly_string(const PolyQ& f) {
    std::ostringstream os;
    bool first = true;
    for (long d = f.degree(); d >= 0; --d) {
        Q c = d >= 0 && d < static_cast<long>(f.c.size()) ? f.c[static_cast<size_t>(d)] : Q(0);
        if (c == 0) continue;
        if (!first && c > 0) os << '+';
        if (c == -1 && d > 0)
            os << '-';
        else if (!(c == 1 && d > 0))
            os << c;
        if (d > 0) {
            os << 'x';
            if (d > 1) os << '^' << d;
        }
        first = false;
    }
    if (first) os << '0';
    return os.str();
}

std::string qstr(const Q& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

/// Monic minimal polynomial of an element, by the first linear dependency
/// among its powers.
PolyQ min_poly(const FieldElement& a) {
    const NumberField& F = a.field();
    long n = F.degree();
    std::vector<std::vector<Q>> rows;  // powers of a in coordinates
    FieldElement cur = F.from_q(Q(1));
    for (long k = 0; k <= n; ++k) {
        rows.push_back(cur.coords());
        // Solve sum_{j<k} x_j a^j = a^k by Gaussian elimination.
        std::vector<std::vector<Q>> M(static_cast<size_t>(n), std::vector<Q>(rows.size(), Q(0)));
        for (size_t j = 0; j + 1 < rows.size(); ++j)
            for (size_t i = 0; i < static_cast<size_t>(n); ++i) M[i][j] = rows[j][i];
        for (size_t i = 0; i < static_cast<size_t>(n); ++i) M[i].back() = rows.back()[i];
        // elimination
        size_t cols = rows.size() - 1, lead = 0;
        std::vector<long> pivot_col(static_cast<size_t>(n), -1);
        for (size_t col = 0; col < cols && lead < static_cast<size_t>(n); ++col) {
            size_t piv = lead;
            while (piv < static_cast<size_t>(n) && M[piv][col] == 0) ++piv;
            if (piv == static_cast<size_t>(n)) continue;
            std::swap(M[piv], M[lead]);
            Q inv = 1 / M[lead][col];
            for (auto& x : M[lead]) x *= inv;
            for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
                if (i == lead || M[i][col] == 0) continue;
                Q f = M[i][col];
                for (size_t j2 = 0; j2 < M[i].size(); ++j2) M[i][j2] -= f * M[lead][j2];
            }
            pivot_col[lead] = static_cast<long>(col);
            ++lead;
        }
        bool consistent = true;
        for (size_t i = lead; i < static_cast<size_t>(n); ++i)
            if (M[i].back() != 0) consistent = false;
        if (consistent && k > 0) {
            std::vector<Q> sol(cols, Q(0));
            for (size_t i = 0; i < lead; ++i) sol[static_cast<size_t>(pivot_col[i])] = M[i].back();
            std::vector<Q> mp(static_cast<size_t>(k) + 1, Q(0));
            for (size_t j = 0; j < cols; ++j) mp[j] = -sol[j];
            mp.back() = Q(1);
            return PolyQ(std::move(mp));
        }
        cur = cur * a;
    }
    throw std::logic_error("min_poly: no dependency found");
}

/// Search for an element of F whose minimal polynomial is the given one
/// (monic), among theta powers and pairwise sums/differences.
std::optional<FieldElement> find_subfield_generator(const NumberField& F, const PolyQ& sub) {
    PolyQ target = sub.monic();
    long n = F.degree();
    std::vector<FieldElement> cands;
    for (long j = 1; j < n; ++j) cands.push_back(F.gen().pow(j));
    for (long j = 1; j < n; ++j)
        for (long k = j + 1; k < n; ++k) {
            cands.push_back(F.gen().pow(j) + F.gen().pow(k));
            cands.push_back(F.gen().pow(j) - F.gen().pow(k));
        }
    for (const FieldElement& g : cands)
        if (min_poly(g) == target) return g;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

struct GcfOptions {
    std::string field, basis, subfield;
    std::string omega = "3/4";
    long max_steps = 512;
    std::string format = "text";
    bool trace = false;
    bool reduce = false;
};

json cert_json(const UnitCertificate& cert) {
    json j;
    j["period"] = {cert.period.first, cert.period.second};
    json P = json::array();
    for (size_t i = 0; i < cert.P.n; ++i) {
        json row = json::array();
        for (size_t k = 0; k < cert.P.m; ++k) row.push_back(cert.P(i, k).get_str());
        P.push_back(row);
    }
    j["P"] = P;
    json coords = json::array();
    for (const Q& c : cert.epsilon.coords()) coords.push_back(qstr(c));
    j["epsilon"] = {{"coords", coords}, {"theta_expr", theta_string(cert.epsilon)}};
    j["rho_display"] = cert.rho.to_decimal(6);
    j["variant"] = cert.variant == FlatGeodesic::Variant::chi ? "chi" : "rank_one";
    return j;
}

int run_gcf(const GcfOptions& opt, bool chi) {
    NumberField F = NumberField::create(parse_poly(opt.field));
    QBasis w = [&] {
        if (opt.basis.empty()) return QBasis::power_descending(F);
        std::vector<FieldElement> elems;
        std::stringstream ss(opt.basis);
        std::string item;
        while (std::getline(ss, item, ',')) {
            PolyQ p = parse_poly(item);
            FieldElement e = F.from_q(Q(0));
            for (long dgr = 0; dgr <= p.degree(); ++dgr)
                e = e + F.gen().pow(dgr) * p.c[static_cast<size_t>(dgr)];
            elems.push_back(e);
        }
        return QBasis(std::move(elems));
    }();
    Q omega = parse_rational(opt.omega);

    FlatGeodesic geod = [&] {
        if (!chi) return heegner_rank_one(F, w);
        auto g = find_subfield_generator(F, parse_poly(opt.subfield));
        if (!g) throw UsageError("'" + opt.subfield + "' is not a subfield of '" + opt.field + "'");
        return heegner_chi(F, *g, w);
    }();

    GcfRun run = run_forward(geod, omega, opt.max_steps);
    if (!run.period) {
        std::cerr << "no period: run ended at a sentinel window\n";
        return 2;
    }
    UnitCertificate cert = extract_unit(run.steps, *run.period, geod);
    std::optional<RootReduction> red;
    if (opt.reduce) red = reduce_by_roots(cert.epsilon);

    if (opt.format == "json") {
        json j;
        j["command"] = chi ? "chi-unit" : "unit";
        j["config"] = {{"field", opt.field},
                       {"basis", opt.basis},
                       {"subfield", opt.subfield},
                       {"omega", qstr(omega)},
                       {"max_steps", opt.max_steps},
                       {"format", opt.format},
                       {"trace", opt.trace}};
        j["certificate"] = cert_json(cert);
        if (chi) j["relative_norm"] = "1";
        if (opt.trace) j["trace"] = format_trace(run, geod);
        if (red) {
            j["post_processing"] = {{"eta", theta_string(red->eta)},
                                    {"m", red->m},
                                    {"sign", red->sign}};
        } else if (opt.reduce) {
            j["post_processing"] = nullptr;
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << (chi ? "chi-unit" : "unit") << " field=" << poly_string(F.defining_poly());
    if (chi) std::cout << " subfield=" << opt.subfield;
    std::cout << " omega=" << qstr(omega) << "\n";
    if (opt.trace) std::cout << format_trace(run, geod);
    std::cout << "period: (" << cert.period.first << ", " << cert.period.second << ")\n";
    std::cout << "P: " << matrix_string(cert.P) << "\n";
    std::cout << "epsilon: " << theta_string(cert.epsilon) << "\n";
    std::cout << "norm: 1\n";
    if (chi) std::cout << "relative norm: 1\n";
    std::cout << "|sigma_1(epsilon)|: " << cert.rho.to_decimal(6) << "\n";
    if (opt.reduce) {
        if (red)
            std::cout << "post-processing: epsilon = " << (red->sign < 0 ? "-" : "") << "("
                      << theta_string(red->eta) << ")^" << red->m << "\n";
        else
            std::cout << "post-processing: no root up to exponent 6\n";
    }
    return 0;
}

struct PcfOptions {
    long d = 0, p = 0, root = -1, rmax = 1, max_loops = 4000;
    std::string format = "text";
};

int run_pcf(const PcfOptions& opt) {
    pcf::PUnitResult res = pcf::fundamental_p_unit(Z(opt.d), opt.p, opt.root, opt.max_loops);
    std::string digits = pcf::digit_string(res.expansion);
    std::string per = pcf::period_string(res.expansion);
    if (opt.format == "json") {
        json j;
        j["command"] = "pcf";
        j["config"] = {{"d", opt.d}, {"p", opt.p}, {"root", opt.root}, {"format", opt.format}};
        j["root"] = res.root.get_str();
        j["digits"] = digits;
        j["period"] = {res.expansion.period->first, res.expansion.period->second};
        j["N"] = res.N;
        json eps = json::array(), u = json::array();
        for (const Q& c : res.epsilon.coords()) eps.push_back(qstr(c));
        for (const Q& c : res.u.coords()) u.push_back(qstr(c));
        j["epsilon"] = eps;
        j["u"] = u;
        j["pell"] = {res.pell.x.get_str(), res.pell.y.get_str(), res.pell.nu};
        j["ideal_order"] = res.ideal_order;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "pcf d=" << opt.d << " p=" << opt.p << " root=" << res.root << "\n";
    std::cout << "digits: " << digits << " per=" << per << "\n";
    std::cout << "N: " << res.N << "\n";
    std::cout << "epsilon: " << theta_string(res.epsilon) << "\n";
    std::cout << "u: " << theta_string(res.u) << "\n";
    std::cout << "pell: (" << res.pell.x << ", " << res.pell.y << ", " << res.pell.nu << ")\n";
    std::cout << "ideal order: " << res.ideal_order << "\n";
    return 0;
}

int run_pell(const PcfOptions& opt) {
    auto sols = pcf::pell_solutions(Z(opt.d), opt.p, opt.root, opt.rmax);
    if (opt.format == "json") {
        json j;
        j["command"] = "pell";
        j["config"] = {
            {"d", opt.d}, {"p", opt.p}, {"root", opt.root}, {"rmax", opt.rmax}, {"format", opt.format}};
        json arr = json::array();
        for (const auto& s : sols) arr.push_back({s.x.get_str(), s.y.get_str(), s.nu});
        j["solutions"] = arr;
        std::cout << j.dump(2) << "\n";
        return 0;
    }
    std::cout << "pell d=" << opt.d << " p=" << opt.p << " rmax=" << opt.rmax << "\n";
    for (const auto& s : sols) std::cout << "(" << s.x << ", " << s.y << ", " << s.nu << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* bits = std::getenv("GCF_MAX_BITS")) {
        long v = std::atol(bits);
        if (v > 0) config::default_max_bits = static_cast<int>(v);
    }

    CLI::App app{"rank-one units by geodesic continued fractions"};
    app.require_subcommand(1);

    GcfOptions gopt;
    PcfOptions popt;

    auto add_gcf_flags = [&](CLI::App* cmd, bool chi) {
        cmd->add_option("--field", gopt.field, "defining polynomial, e.g. \"x^2-2\"")->required();
        cmd->add_option("--basis", gopt.basis, "comma-separated basis elements as polynomials in x");
        if (chi) cmd->add_option("--subfield", gopt.subfield, "quadratic subfield polynomial")->required();
        cmd->add_option("--omega", gopt.omega, "Lovasz parameter (rational, default 3/4)");
        cmd->add_option("--max-steps", gopt.max_steps, "step budget (default 512)");
        cmd->add_option("--format", gopt.format, "text|json")->check(CLI::IsMember({"text", "json"}));
        cmd->add_flag("--trace", gopt.trace, "print the step trace");
        cmd->add_flag("--reduce", gopt.reduce, "root-extraction post-processing (m <= 6)");
    };
    add_gcf_flags(app.add_subcommand("unit", "non-torsion unit of a rank-one field"), false);
    add_gcf_flags(app.add_subcommand("chi-unit", "chi-unit of a quadratic extension"), true);

    auto add_pcf_flags = [&](CLI::App* cmd, bool pell) {
        cmd->add_option("--d", popt.d, "positive square-free d of Q(sqrt(-d))")->required();
        cmd->add_option("--p", popt.p, "odd split prime")->required();
        cmd->add_option("--root", popt.root, "seed root of x^2+d mod p (default: smallest)");
        if (pell) cmd->add_option("--rmax", popt.rmax, "largest power of the fundamental p-unit");
        cmd->add_option("--max-steps", popt.max_loops, "expansion loop budget");
        cmd->add_option("--format", popt.format, "text|json")->check(CLI::IsMember({"text", "json"}));
    };
    add_pcf_flags(app.add_subcommand("pcf", "{infinity,p}-continued fraction and p-unit"), false);
    add_pcf_flags(app.add_subcommand("pell", "Pell-like solutions x^2 + d y^2 = p^(2 nu)"), true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    try {
        if (app.got_subcommand("unit")) return run_gcf(gopt, false);
        if (app.got_subcommand("chi-unit")) return run_gcf(gopt, true);
        if (app.got_subcommand("pcf")) return run_pcf(popt);
        if (app.got_subcommand("pell")) return run_pell(popt);
    } catch (const BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pcf::BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
