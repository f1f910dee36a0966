#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace seqloc {

// Arbitrary-precision integers and canonical rationals (denominator > 0,
// gcd(num, den) = 1 maintained by the backend after every operation).
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt den(const Rational& q) { return boost::multiprecision::denominator(q); }

/** Parse "p", "-p" or "p/q" (q > 0 after normalization). */
inline Rational parse_rational(std::string_view s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos)
            return Rational(BigInt(std::string(s)));
        BigInt p{std::string(s.substr(0, slash))};
        BigInt q{std::string(s.substr(slash + 1))};
        if (q == 0) throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational literal: '" + std::string(s) + "'");
    }
}

/** Canonical text form: "p" for integers, "p/q" otherwise. */
inline std::string format_rational(const Rational& q) {
    if (den(q) == 1) return num(q).str();
    return num(q).str() + "/" + den(q).str();
}

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

/** Exact rational value of a finite double. */
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double m = std::frexp(x, &exp);
    const auto mi = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    BigInt n(mi);
    if (exp >= 0) return Rational(n << exp);
    return Rational(n, BigInt(1) << (-exp));
}

/** Best rational approximation of x with denominator <= max_den, computed
 *  exactly via continued-fraction convergents and semiconvergents. */
inline Rational best_rational(double x, const BigInt& max_den) {
    if (max_den < 1) throw std::invalid_argument("denominator bound must be >= 1");
    const Rational t = rational_from_double(x);
    if (den(t) <= max_den) return t;
    BigInt p = num(t), q = den(t);
    const bool neg = p < 0;
    if (neg) p = -p;
    const Rational target(p, q);
    BigInt hm2 = 0, km2 = 1, hm1 = 1, km1 = 0;
    while (q != 0) {
        const BigInt a = p / q;
        const BigInt ki = a * km1 + km2;
        if (ki > max_den) {
            // largest admissible semiconvergent vs. previous convergent
            const BigInt k = (max_den - km2) / km1;
            const Rational semi(k * hm1 + hm2, k * km1 + km2);
            const Rational conv(hm1, km1);
            Rational ds = abs(semi - target), dc = abs(conv - target);
            const Rational best = (ds <= dc) ? semi : conv;
            return neg ? -best : best;
        }
        const BigInt hi = a * hm1 + hm2;
        const BigInt r = p % q;
        p = q; q = r;
        hm2 = hm1; km2 = km1; hm1 = hi; km1 = ki;
    }
    const Rational exact(hm1, km1);
    return neg ? -exact : exact;
}

/** Scale a rational vector to the unique proportional coprime integer vector
 *  (direction preserved; the all-zero vector stays all-zero). */
inline std::vector<BigInt> to_coprime_integers(const std::vector<Rational>& v) {
    BigInt l = 1;
    for (const auto& q : v) l = boost::multiprecision::lcm(l, den(q));
    std::vector<BigInt> out;
    out.reserve(v.size());
    BigInt g = 0;
    for (const auto& q : v) {
        BigInt z = num(q) * (l / den(q));
        g = boost::multiprecision::gcd(g, z);
        out.push_back(std::move(z));
    }
    if (g > 1)
        for (auto& z : out) z /= g;
    return out;
}

/** Divide an integer vector by the gcd of its entries. */
inline void reduce_by_gcd(std::vector<BigInt>& v) {
    BigInt g = 0;
    for (const auto& z : v) g = boost::multiprecision::gcd(g, z);
    if (g > 1)
        for (auto& z : v) z /= g;
}

/** Flip sign so the first nonzero entry is positive (used for equalities,
 *  where the orientation is free). */
inline void normalize_sign_lex(std::vector<BigInt>& v) {
    for (const auto& z : v) {
        if (z == 0) continue;
        if (z < 0)
            for (auto& w : v) w = -w;
        return;
    }
}

inline bool lex_less(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace seqloc
