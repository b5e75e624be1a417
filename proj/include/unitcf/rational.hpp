#pragma once

#include <gmpxx.h>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace unitcf {

using Z = mpz_class;
using Q = mpq_class;

/// Floor of a rational number as an integer.
inline Z q_floor(const Q& x) {
    Z q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

/// Ceiling of a rational number as an integer.
inline Z q_ceil(const Q& x) {
    Z q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

/// Nearest integer with ties rounded up: floor(x + 1/2).
inline Z q_round(const Q& x) { return q_floor(x + Q(1, 2)); }

/// |x|.
inline Q q_abs(const Q& x) { return x < 0 ? Q(-x) : x; }

/// x^e for integer e >= 0.
inline Z z_pow(const Z& x, unsigned long e) {
    Z r;
    mpz_pow_ui(r.get_mpz_t(), x.get_mpz_t(), e);
    return r;
}

/// x^e for integer e (negative exponents allowed).
inline Q q_pow(const Q& x, long e) {
    if (e == 0) return Q(1);
    bool neg = e < 0;
    unsigned long ue = static_cast<unsigned long>(neg ? -e : e);
    Q num(z_pow(x.get_num(), ue), z_pow(x.get_den(), ue));
    num.canonicalize();
    if (neg) {
        if (num == 0) throw std::domain_error("q_pow: zero to negative power");
        return Q(1) / num;
    }
    return num;
}

/// gcd of two integers (nonnegative).
inline Z z_gcd(const Z& a, const Z& b) {
    Z g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

/// p-adic valuation of a nonzero integer.
inline long z_valuation(Z x, const Z& p) {
    if (x == 0) throw std::domain_error("z_valuation: zero");
    long v = 0;
    Z q, r;
    for (;;) {
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        x = q;
        ++v;
    }
    return v;
}

/// p-adic valuation of a nonzero rational.
inline long q_valuation(const Q& x, const Z& p) {
    if (x == 0) throw std::domain_error("q_valuation: zero");
    long v = 0;
    if (x.get_num() % p == 0) v += z_valuation(x.get_num(), p);
    if (x.get_den() % p == 0) v -= z_valuation(x.get_den(), p);
    return v;
}

/// Closed rational interval [lo, hi] with the usual outward arithmetic.
struct QInterval {
    Q lo, hi;

    QInterval() : lo(0), hi(0) {}
    QInterval(const Q& x) : lo(x), hi(x) {}
    QInterval(const Q& a, const Q& b) : lo(a), hi(b) {
        if (lo > hi) throw std::invalid_argument("QInterval: lo > hi");
    }

    Q width() const { return hi - lo; }
    Q mid() const { return (lo + hi) / 2; }
    bool contains(const Q& x) const { return lo <= x && x <= hi; }
    bool contains_zero() const { return lo <= 0 && 0 <= hi; }

    /// Sign if the interval excludes zero, otherwise 0 is returned only for
    /// the exact point interval [0,0]; call contains_zero() first to
    /// distinguish "unknown".
    int definite_sign() const {
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        return 0;
    }

    QInterval operator-() const { return QInterval(-hi, -lo); }
    QInterval operator+(const QInterval& o) const { return QInterval(lo + o.lo, hi + o.hi); }
    QInterval operator-(const QInterval& o) const { return QInterval(lo - o.hi, hi - o.lo); }
    QInterval operator*(const QInterval& o) const {
        Q a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
        Q mn = a, mx = a;
        for (const Q& v : {b, c, d}) {
            if (v < mn) mn = v;
            if (v > mx) mx = v;
        }
        return QInterval(mn, mx);
    }
};

/// Render a rational in decimal with the given number of significant digits
/// (round-to-nearest). Used for human-readable trace output.
inline std::string q_to_decimal(const Q& x, int sig_digits = 6) {
    if (x == 0) return "0";
    std::string sign = x < 0 ? "-" : "";
    Q a = q_abs(x);
    // Find exponent e with 10^e <= a < 10^(e+1).
    int e = 0;
    Q t = a;
    while (t >= 10) { t /= 10; ++e; }
    while (t < 1) { t *= 10; --e; }
    // Scale so that we keep sig_digits digits, then round.
    long shift = sig_digits - 1 - e;
    Q scaled = a * q_pow(Q(10), shift);
    Z digits = q_round(scaled);
    std::string ds = digits.get_str();
    if (static_cast<int>(ds.size()) > sig_digits) {
        // Rounding bumped 999.. to 1000..; drop the extra trailing digit.
        ds.pop_back();
        ++e;
    }
    // Place the decimal point after position e+1 (1-based) of ds.
    std::string out;
    int point = e + 1;
    if (point <= 0) {
        out = "0.";
        for (int i = 0; i < -point; ++i) out += '0';
        out += ds;
    } else if (point >= static_cast<int>(ds.size())) {
        out = ds;
        for (int i = static_cast<int>(ds.size()); i < point; ++i) out += '0';
    } else {
        out = ds.substr(0, point) + "." + ds.substr(point);
    }
    // Trim trailing zeros after a decimal point (keep at least one digit).
    if (out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return sign + out;
}

}  // namespace unitcf
