#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/correlators.hpp"
#include "seqloc/strategies.hpp"

namespace seqloc {

enum class Basis : std::uint8_t { probability, correlator };

/**
 * A linear functional on (1,2)-binary correlations with a bound:
 * beta(P) <= bound. In the probability basis coeffs has 64 entries (one per
 * tensor entry); in the correlator basis 33 entries (index 0 multiplies the
 * constant 1, indices 1..32 the correlators in the layout of correlators.hpp).
 * The two bases are identified through the Fourier reconstruction of the
 * probability tensor, which is exact on the sequential subspace.
 */
struct BellFunctional {
    Basis basis = Basis::correlator;
    std::vector<Rational> coeffs;
    Rational bound;
};

/// canonical integer correlator form: constant folded into the bound,
/// coefficients and bound jointly reduced to coprime integers
struct CanonicalFunctional {
    std::vector<BigInt> coeffs;  // 33 entries, coeffs[0] == 0
    BigInt bound;

    bool operator==(const CanonicalFunctional&) const = default;
    bool operator<(const CanonicalFunctional& o) const {
        if (coeffs != o.coeffs) return lex_less(coeffs, o.coeffs);
        return bound < o.bound;
    }

    std::vector<BigInt> key() const {
        auto k = coeffs;
        k.push_back(bound);
        return k;
    }
};

/** Probability basis -> correlator basis (exact; unique representative). */
inline BellFunctional to_correlator_basis(const BellFunctional& f) {
    if (f.basis == Basis::correlator) return f;
    if (f.coeffs.size() != 64)
        throw std::invalid_argument("probability-basis functional must have 64 coefficients");
    std::vector<Rational> c(33, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int a = 0; a < 2; ++a)
                    for (int b1 = 0; b1 < 2; ++b1)
                        for (int b2 = 0; b2 < 2; ++b2) {
                            const Rational& w = f.coeffs[detail::ent(x, y1, y2, a, b1, b2)];
                            if (w == 0) continue;
                            const Rational w8 = w / 8;
                            c[0] += w8;
                            for (int k = 0; k < kCorrCount; ++k) {
                                const auto cw = detail::corr_weight(k, x, y1, y2, a, b1, b2);
                                if (cw.sign != 0) c[k + 1] += w8 * cw.sign;
                            }
                        }
    return BellFunctional{Basis::correlator, std::move(c), f.bound};
}

/** Correlator basis -> probability basis (averaging over unmentioned
 *  settings; agrees with the correlator form on sequential data). */
inline BellFunctional to_probability_basis(const BellFunctional& f) {
    if (f.basis == Basis::probability) return f;
    if (f.coeffs.size() != 33)
        throw std::invalid_argument("correlator-basis functional must have 33 coefficients");
    std::vector<Rational> c(64, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int a = 0; a < 2; ++a)
                    for (int b1 = 0; b1 < 2; ++b1)
                        for (int b2 = 0; b2 < 2; ++b2) {
                            Rational v = f.coeffs[0] / 8;
                            for (int k = 0; k < kCorrCount; ++k) {
                                if (f.coeffs[k + 1] == 0) continue;
                                const auto cw = detail::corr_weight(k, x, y1, y2, a, b1, b2);
                                if (cw.sign != 0)
                                    v += f.coeffs[k + 1] * cw.sign / cw.denom;
                            }
                            c[detail::ent(x, y1, y2, a, b1, b2)] = v;
                        }
    return BellFunctional{Basis::probability, std::move(c), f.bound};
}

/** Exact value on rational (1,2)-binary correlations. */
inline Rational evaluate(const BellFunctional& f, const SequentialCorrelations& P) {
    detail::require_one_two_binary(P.scenario(), "evaluate");
    if (f.basis == Basis::probability) {
        Rational s(0);
        for (std::size_t i = 0; i < 64; ++i)
            if (f.coeffs[i] != 0) s += f.coeffs[i] * P.rat()[i];
        return s;
    }
    const auto c = to_correlators(P);
    Rational s = f.coeffs[0];
    for (int k = 0; k < kCorrCount; ++k) s += f.coeffs[k + 1] * c.rat[k];
    return s;
}

inline double evaluate_double(const BellFunctional& f, const SequentialCorrelations& P) {
    detail::require_one_two_binary(P.scenario(), "evaluate");
    if (f.basis == Basis::probability) {
        double s = 0;
        for (std::size_t i = 0; i < 64; ++i)
            s += to_double(f.coeffs[i]) * P.entry_as_double(i);
        return s;
    }
    double s = to_double(f.coeffs[0]);
    if (P.is_rational()) {
        const auto c = to_correlators(P);
        for (int k = 0; k < kCorrCount; ++k) s += to_double(f.coeffs[k + 1]) * to_double(c.rat[k]);
    } else {
        const auto c = to_correlators(P);
        for (int k = 0; k < kCorrCount; ++k) s += to_double(f.coeffs[k + 1]) * c.flt[k];
    }
    return s;
}

/** Exact value on a homogenized integer correlator vector (vertices). */
inline Rational evaluate_corr_vec(const BellFunctional& f, const std::vector<BigInt>& corr33) {
    if (f.basis != Basis::correlator)
        throw std::invalid_argument("evaluate_corr_vec expects a correlator-basis functional");
    Rational s(0);
    for (std::size_t k = 0; k < 33; ++k)
        if (f.coeffs[k] != 0) s += f.coeffs[k] * Rational(corr33[k]);
    return s;
}

/**
 * Canonical integer correlator form: convert to the correlator basis, fold
 * the constant coefficient into the bound, scale coefficients and bound
 * jointly to coprime integers. Two functionals describe the same half-space
 * of sequential correlations iff their canonical forms are equal.
 */
inline CanonicalFunctional canonicalize(const BellFunctional& f) {
    const auto corr = to_correlator_basis(f);
    std::vector<Rational> v(corr.coeffs.begin() + 1, corr.coeffs.end());
    v.push_back(corr.bound - corr.coeffs[0]);
    auto ints = to_coprime_integers(v);
    CanonicalFunctional out;
    out.bound = ints.back();
    ints.pop_back();
    out.coeffs.reserve(33);
    out.coeffs.push_back(0);
    for (auto& z : ints) out.coeffs.push_back(std::move(z));
    return out;
}

inline BellFunctional from_canonical(const CanonicalFunctional& c) {
    std::vector<Rational> coeffs(33);
    for (std::size_t i = 0; i < 33; ++i) coeffs[i] = Rational(c.coeffs[i]);
    return BellFunctional{Basis::correlator, std::move(coeffs), Rational(c.bound)};
}

// ---------------------------------------------------------------------------
// the four named functional families of the (1,2) binary scenario
// ---------------------------------------------------------------------------

/** CHSH on the first-step marginal P(a b1 | x y1), bound 3. */
inline BellFunctional chsh_marginal_functional() {
    std::vector<Rational> c(64, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1) {
            const bool want_equal = !(x == 1 && y1 == 1);
            for (int y2 = 0; y2 < 2; ++y2)
                for (int a = 0; a < 2; ++a)
                    for (int b1 = 0; b1 < 2; ++b1) {
                        if ((a == b1) != want_equal) continue;
                        for (int b2 = 0; b2 < 2; ++b2)
                            c[detail::ent(x, y1, y2, a, b1, b2)] = Rational(1, 2);
                    }
        }
    return BellFunctional{Basis::probability, std::move(c), Rational(3)};
}

/** Lifted CHSH on P(a b2 | x (y1 y2)) with B inputs 00 and 11, bound 3. */
inline BellFunctional chsh_lifted_functional() {
    std::vector<Rational> c(64, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int yy : {0, 3}) {  // (y1,y2) in {00, 11}
            const int y1 = yy >> 1, y2 = yy & 1;
            const bool want_equal = !(x == 1 && yy == 3);
            for (int a = 0; a < 2; ++a)
                for (int b2 = 0; b2 < 2; ++b2) {
                    if ((a == b2) != want_equal) continue;
                    for (int b1 = 0; b1 < 2; ++b1)
                        c[detail::ent(x, y1, y2, a, b1, b2)] = Rational(1);
                }
        }
    return BellFunctional{Basis::probability, std::move(c), Rational(3)};
}

/**
 * CHSH conditioned on B's first-step event (y1*, b1*), multiplied through by
 * the branch probability: sum of the CHSH pattern terms minus 3 P(b1*|y1*),
 * bound 0. On the branch of positive probability this is the conditioned
 * CHSH with bound 3.
 */
inline BellFunctional chsh_conditioned_functional(int y1s, int b1s) {
    std::vector<Rational> c(64, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int y2 = 0; y2 < 2; ++y2) {
            const bool want_equal = !(x == 1 && y2 == 1);
            for (int a = 0; a < 2; ++a)
                for (int b2 = 0; b2 < 2; ++b2) {
                    if ((a == b2) != want_equal) continue;
                    c[detail::ent(x, y1s, y2, a, b1s, b2)] += Rational(1);
                }
        }
    // - 3 P(b1*|y1*), averaged over the free settings (x, y2)
    for (int x = 0; x < 2; ++x)
        for (int y2 = 0; y2 < 2; ++y2)
            for (int a = 0; a < 2; ++a)
                for (int b2 = 0; b2 < 2; ++b2)
                    c[detail::ent(x, y1s, y2, a, b1s, b2)] -= Rational(3, 4);
    return BellFunctional{Basis::probability, std::move(c), Rational(0)};
}

/**
 * The sequential CHSH-type inequality of the (1,2) scenario, built from the
 * branch combinations B = [(1+B1_0) B2_01 - (1-B1_0) B2_00]/2 and
 * B' = [(1-B1_1) B2_11 + (1+B1_1) B2_10]/2 as
 * <A_0 (B - B') - A_1 (B + B')> <= 2. Its maximum over the time-ordered
 * local set is 2; over the post-selection-local set it reaches 4.
 */
inline BellFunctional sequential_chsh_functional() {
    std::vector<Rational> c(33, Rational(0));
    const Rational h(1, 2);
    auto AB2 = [&](int x, int y1, int y2) -> Rational& {
        return c[1 + corr::AB2(x, y1, y2)];
    };
    auto AB1B2 = [&](int x, int y1, int y2) -> Rational& {
        return c[1 + corr::AB1B2(x, y1, y2)];
    };
    // A0 B
    AB2(0, 0, 1) += h; AB1B2(0, 0, 1) += h;
    AB2(0, 0, 0) -= h; AB1B2(0, 0, 0) += h;
    // - A0 B'
    AB2(0, 1, 1) -= h; AB1B2(0, 1, 1) += h;
    AB2(0, 1, 0) -= h; AB1B2(0, 1, 0) -= h;
    // - A1 B
    AB2(1, 0, 1) -= h; AB1B2(1, 0, 1) -= h;
    AB2(1, 0, 0) += h; AB1B2(1, 0, 0) -= h;
    // - A1 B'
    AB2(1, 1, 1) -= h; AB1B2(1, 1, 1) += h;
    AB2(1, 1, 0) -= h; AB1B2(1, 1, 0) -= h;
    return BellFunctional{Basis::correlator, std::move(c), Rational(2)};
}

/** Positivity of one tensor entry: -P(e) <= 0. */
inline BellFunctional positivity_functional(std::size_t entry) {
    std::vector<Rational> c(64, Rational(0));
    c.at(entry) = Rational(-1);
    return BellFunctional{Basis::probability, std::move(c), Rational(0)};
}

/** Exact maximum over the 256 vertices (correlator vectors) of the scenario. */
inline Rational max_over_vertices(const BellFunctional& f,
                                  const std::vector<std::vector<BigInt>>& corr_vertices) {
    const auto g = to_correlator_basis(f);
    bool first = true;
    Rational best(0);
    for (const auto& v : corr_vertices) {
        const Rational val = evaluate_corr_vec(g, v);
        if (first || val > best) {
            best = val;
            first = false;
        }
    }
    return best;
}

}  // namespace seqloc
