#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/correlations.hpp"

namespace seqloc {

/**
 * Correlator coordinates for the (1,2) binary scenario, outcomes encoded as
 * +1 <-> index 0 and -1 <-> index 1. The 32 coordinates parametrize the
 * sequential subspace bijectively (together with normalization); layout:
 *
 *   [0..1]   <A_x>                      x
 *   [2..3]   <B1_y1>                    y1
 *   [4..7]   <B2_y1y2>                  (y1,y2)
 *   [8..11]  <A_x B1_y1>               (x,y1)
 *   [12..19] <A_x B2_y1y2>             (x,y1,y2)
 *   [20..23] <B1_y1 B2_y1y2>           (y1,y2)
 *   [24..31] <A_x B1_y1 B2_y1y2>       (x,y1,y2)
 *
 * Single-party / partial correlators are extracted averaging uniformly over
 * the settings they do not mention (the choice is immaterial on sequential
 * data and keeps the extraction symmetric under relabelings).
 */
inline constexpr int kCorrCount = 32;

namespace corr {
inline int A(int x) { return x; }
inline int B1(int y1) { return 2 + y1; }
inline int B2(int y1, int y2) { return 4 + 2 * y1 + y2; }
inline int AB1(int x, int y1) { return 8 + 2 * x + y1; }
inline int AB2(int x, int y1, int y2) { return 12 + 4 * x + 2 * y1 + y2; }
inline int B1B2(int y1, int y2) { return 20 + 2 * y1 + y2; }
inline int AB1B2(int x, int y1, int y2) { return 24 + 4 * x + 2 * y1 + y2; }
}  // namespace corr

struct Correlators {
    Rep rep;
    std::vector<Rational> rat;  // size 32 when rep == rational
    std::vector<double> flt;    // size 32 when rep == floating
    double tolerance = 0.0;
};

namespace detail {

inline int pm(int digit) { return 1 - 2 * digit; }  // outcome index -> +/-1

inline void require_one_two_binary(const Scenario& sc, const char* who) {
    if (!sc.is_one_two_binary())
        throw std::invalid_argument(std::string(who) +
                                    ": requires the (1,2) scenario with binary settings/outcomes");
}

/// entry index for digits (x, y1, y2, a, b1, b2)
inline std::size_t ent(int x, int y1, int y2, int a, int b1, int b2) {
    return static_cast<std::size_t>(
        ((((x * 2 + y1) * 2 + y2) * 2 + a) * 2 + b1) * 2 + b2);
}

template <typename T, typename Get>
std::vector<T> correlators_impl(const Get& P) {
    std::vector<T> c(kCorrCount, T(0));
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int a = 0; a < 2; ++a)
                    for (int b1 = 0; b1 < 2; ++b1)
                        for (int b2 = 0; b2 < 2; ++b2) {
                            const T v = P(ent(x, y1, y2, a, b1, b2));
                            const int sa = pm(a), s1 = pm(b1), s2 = pm(b2);
                            c[corr::A(x)] += v * sa;
                            c[corr::B1(y1)] += v * s1;
                            c[corr::B2(y1, y2)] += v * s2;
                            c[corr::AB1(x, y1)] += v * (sa * s1);
                            c[corr::AB2(x, y1, y2)] += v * (sa * s2);
                            c[corr::B1B2(y1, y2)] += v * (s1 * s2);
                            c[corr::AB1B2(x, y1, y2)] += v * (sa * s1 * s2);
                        }
    // divide by the number of settings each correlator was accumulated over
    for (int x = 0; x < 2; ++x) c[corr::A(x)] /= 4;
    for (int y1 = 0; y1 < 2; ++y1) c[corr::B1(y1)] /= 4;
    for (int i = 4; i < 8; ++i) c[i] /= 2;    // B2: averaged over x
    for (int i = 8; i < 12; ++i) c[i] /= 2;   // AB1: averaged over y2
    for (int i = 20; i < 24; ++i) c[i] /= 2;  // B1B2: averaged over x
    return c;
}

/// sign of correlator k on entry (x,y1,y2,a,b1,b2); 0 if the entry's setting
/// does not match, together with the averaging weight denominator
struct CorrWeight {
    int sign;   // +/-1 contribution of the outcome signs, 0 if setting mismatch
    int denom;  // number of settings the correlator is averaged over
};

inline CorrWeight corr_weight(int k, int x, int y1, int y2, int a, int b1, int b2) {
    const int sa = pm(a), s1 = pm(b1), s2 = pm(b2);
    if (k < 2) return {k == x ? sa : 0, 4};                                       // <A_x>
    if (k < 4) return {k - 2 == y1 ? s1 : 0, 4};                                  // <B1>
    if (k < 8) return {k - 4 == 2 * y1 + y2 ? s2 : 0, 2};                         // <B2>
    if (k < 12) return {k - 8 == 2 * x + y1 ? sa * s1 : 0, 2};                    // <A B1>
    if (k < 20) return {k - 12 == 4 * x + 2 * y1 + y2 ? sa * s2 : 0, 1};          // <A B2>
    if (k < 24) return {k - 20 == 2 * y1 + y2 ? s1 * s2 : 0, 2};                  // <B1 B2>
    return {k - 24 == 4 * x + 2 * y1 + y2 ? sa * s1 * s2 : 0, 1};                 // <A B1 B2>
}

/// probability entry from correlators (the 1/8 Fourier reconstruction)
template <typename T>
T reconstruct_entry(const std::vector<T>& c, int x, int y1, int y2, int a, int b1, int b2) {
    const int sa = pm(a), s1 = pm(b1), s2 = pm(b2);
    T v = T(1);
    v += c[corr::A(x)] * sa;
    v += c[corr::B1(y1)] * s1;
    v += c[corr::B2(y1, y2)] * s2;
    v += c[corr::AB1(x, y1)] * (sa * s1);
    v += c[corr::AB2(x, y1, y2)] * (sa * s2);
    v += c[corr::B1B2(y1, y2)] * (s1 * s2);
    v += c[corr::AB1B2(x, y1, y2)] * (sa * s1 * s2);
    return v / 8;
}

}  // namespace detail

/** Extract the 32 correlators of a (1,2)-binary sequential correlation. */
inline Correlators to_correlators(const SequentialCorrelations& P) {
    detail::require_one_two_binary(P.scenario(), "to_correlators");
    Correlators c;
    c.rep = P.rep();
    if (P.is_rational()) {
        const auto& v = P.rat();
        c.rat = detail::correlators_impl<Rational>([&](std::size_t i) { return v[i]; });
    } else {
        const auto& v = P.flt();
        c.flt = detail::correlators_impl<double>([&](std::size_t i) { return v[i]; });
        c.tolerance = P.tolerance();
    }
    return c;
}

/**
 * Rebuild the probability tensor from correlators. Throws if a reconstructed
 * entry is negative (reporting the offending index); the reconstruction is
 * sequential by construction, which is re-validated before returning.
 */
inline SequentialCorrelations from_correlators(const Correlators& c) {
    const Scenario sc = Scenario::one_two_binary();
    const bool rational = c.rep == Rep::rational;
    if ((rational ? c.rat.size() : c.flt.size()) != kCorrCount)
        throw std::invalid_argument("from_correlators: expected 32 coordinates");
    auto build = [&](auto tag) {
        using T = decltype(tag);
        const auto& coords = [&]() -> const std::vector<T>& {
            if constexpr (std::is_same_v<T, Rational>) return c.rat;
            else return c.flt;
        }();
        std::vector<T> out(sc.size());
        for (int x = 0; x < 2; ++x)
            for (int y1 = 0; y1 < 2; ++y1)
                for (int y2 = 0; y2 < 2; ++y2)
                    for (int a = 0; a < 2; ++a)
                        for (int b1 = 0; b1 < 2; ++b1)
                            for (int b2 = 0; b2 < 2; ++b2) {
                                T v = detail::reconstruct_entry<T>(coords, x, y1, y2, a, b1, b2);
                                const std::size_t i = detail::ent(x, y1, y2, a, b1, b2);
                                bool neg;
                                if constexpr (std::is_same_v<T, Rational>) neg = v < 0;
                                else neg = v < -c.tolerance;
                                if (neg)
                                    throw std::domain_error(
                                        "from_correlators: negative reconstructed entry at index " +
                                        std::to_string(i));
                                out[i] = v;
                            }
        return out;
    };
    if (rational) {
        SequentialCorrelations P(sc, build(Rational{}));
        if (!validate_sequential(P).ok())
            throw std::logic_error("from_correlators: reconstruction failed validation");
        return P;
    }
    SequentialCorrelations P(sc, build(double{}), c.tolerance > 0 ? c.tolerance : 1e-10);
    if (!validate_sequential(P).ok())
        throw std::logic_error("from_correlators: reconstruction failed validation");
    return P;
}

}  // namespace seqloc
