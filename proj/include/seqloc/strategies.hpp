#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/correlations.hpp"

namespace seqloc {

/**
 * A time-ordered deterministic single-party response: at step j the outcome
 * is a function of the settings of steps 1..j only (never of later ones).
 * For deterministic strategies the dependence on prior outcomes is redundant
 * and normalized away.
 */
struct DeterministicStrategy {
    Party party = Party::A;
    /// response[j]: outcome of step j as a flat table over (settings of
    /// steps 0..j), mixed-radix with step-0 setting most significant
    std::vector<std::vector<int>> response;
    bool time_ordered = true;

    bool operator==(const DeterministicStrategy&) const = default;

    // setting cardinalities, needed to flatten setting prefixes
    std::vector<int> setting_cards;

    /// outcome tuple for a full setting assignment of this party
    std::vector<int> outcomes(const std::vector<int>& settings) const {
        std::vector<int> out(response.size());
        for (std::size_t j = 0; j < response.size(); ++j) {
            std::size_t idx = 0;  // settings[0..j], most significant first
            for (std::size_t k = 0; k <= j; ++k)
                idx = idx * static_cast<std::size_t>(setting_cards[k]) + settings[k];
            out[j] = response[j][idx];
        }
        return out;
    }
};

namespace detail {

inline std::size_t checked_pow(std::size_t base, std::size_t exp, std::size_t cap) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (r > cap / base + 1) return cap + 1;
        r *= base;
        if (r > cap) return cap + 1;
    }
    return r;
}

}  // namespace detail

/** Number of time-ordered deterministic strategies of one party. */
inline std::size_t strategy_count(const std::vector<int>& setting_cards,
                                  const std::vector<int>& outcome_cards,
                                  std::size_t cap = 1000000) {
    std::size_t total = 1, settings_so_far = 1;
    for (std::size_t j = 0; j < setting_cards.size(); ++j) {
        settings_so_far *= setting_cards[j];
        const std::size_t tables =
            detail::checked_pow(outcome_cards[j], settings_so_far, cap);
        if (tables > cap || total > cap / tables) return cap + 1;
        total *= tables;
    }
    return total;
}

/** All time-ordered deterministic strategies of one party, in lexicographic
 *  order of their response tables (step-0 table most significant). */
inline std::vector<DeterministicStrategy> enumerate_strategies(
    Party party, const std::vector<int>& setting_cards, const std::vector<int>& outcome_cards,
    std::size_t cap = 1000000) {
    const std::size_t count = strategy_count(setting_cards, outcome_cards, cap);
    if (count > cap)
        throw std::length_error("strategy enumeration exceeds the cap of " + std::to_string(cap));
    const std::size_t steps = setting_cards.size();
    std::vector<std::size_t> table_size(steps);
    std::size_t settings_so_far = 1;
    for (std::size_t j = 0; j < steps; ++j) {
        settings_so_far *= setting_cards[j];
        table_size[j] = settings_so_far;
    }
    DeterministicStrategy cur;
    cur.party = party;
    cur.setting_cards = setting_cards;
    cur.response.resize(steps);
    for (std::size_t j = 0; j < steps; ++j) cur.response[j].assign(table_size[j], 0);

    std::vector<DeterministicStrategy> out;
    out.reserve(count);
    for (;;) {
        out.push_back(cur);
        // odometer over all table entries, last entry least significant
        int j = static_cast<int>(steps) - 1;
        int e = j >= 0 ? static_cast<int>(table_size[j]) - 1 : -1;
        for (; j >= 0;) {
            if (++cur.response[j][e] < outcome_cards[j]) break;
            cur.response[j][e] = 0;
            if (--e < 0) {
                --j;
                e = j >= 0 ? static_cast<int>(table_size[j]) - 1 : -1;
            }
        }
        if (j < 0) break;
    }
    return out;
}

/**
 * Extreme points of the time-ordered local set: all products of time-ordered
 * deterministic strategies of the two parties. Distinct strategy pairs give
 * distinct tensors, so the list is duplicate-free by construction.
 */
struct TolocVertex {
    DeterministicStrategy a, b;
};

inline std::vector<TolocVertex> enumerate_toloc_vertices_raw(const Scenario& sc,
                                                             std::size_t cap = 1000000) {
    sc.check();
    const auto sa = enumerate_strategies(Party::A, sc.x_cards, sc.a_cards, cap);
    const auto sb = enumerate_strategies(Party::B, sc.y_cards, sc.b_cards, cap);
    if (sa.size() > cap / sb.size())
        throw std::length_error("vertex enumeration exceeds the cap");
    std::vector<TolocVertex> out;
    out.reserve(sa.size() * sb.size());
    for (const auto& a : sa)
        for (const auto& b : sb) out.push_back(TolocVertex{a, b});
    return out;
}

/** The probability tensor of a product of deterministic strategies. */
inline SequentialCorrelations vertex_tensor(const Scenario& sc, const DeterministicStrategy& a,
                                            const DeterministicStrategy& b) {
    const Indexer ix(sc);
    std::vector<Rational> v(sc.size(), Rational(0));
    std::vector<int> setting(sc.s() + sc.t(), 0);
    std::vector<int> setting_cards;
    setting_cards.insert(setting_cards.end(), sc.x_cards.begin(), sc.x_cards.end());
    setting_cards.insert(setting_cards.end(), sc.y_cards.begin(), sc.y_cards.end());
    do {
        const std::vector<int> xs(setting.begin(), setting.begin() + sc.s());
        const std::vector<int> ys(setting.begin() + sc.s(), setting.end());
        std::vector<int> digits = setting;
        const auto ao = a.outcomes(xs), bo = b.outcomes(ys);
        digits.insert(digits.end(), ao.begin(), ao.end());
        digits.insert(digits.end(), bo.begin(), bo.end());
        v[ix.flatten(digits)] = 1;
    } while (next_tuple(setting, setting_cards));
    return SequentialCorrelations(sc, std::move(v));
}

inline std::vector<SequentialCorrelations> enumerate_toloc_vertices(const Scenario& sc,
                                                                    std::size_t cap = 1000000) {
    std::vector<SequentialCorrelations> out;
    const auto verts = enumerate_toloc_vertices_raw(sc, cap);
    out.reserve(verts.size());
    for (const auto& v : verts) out.push_back(vertex_tensor(sc, v.a, v.b));
    return out;
}

/** Deterministic bipartite boxes of a single-shot scenario (s = t = 1). */
inline std::vector<TolocVertex> enumerate_local_vertices_raw(const Scenario& sc,
                                                             std::size_t cap = 1000000) {
    if (sc.s() != 1 || sc.t() != 1)
        throw std::invalid_argument("local vertex enumeration expects a single-shot scenario");
    return enumerate_toloc_vertices_raw(sc, cap);
}

/**
 * Homogenized correlator vector (leading 1, then the 32 correlators) of a
 * strategy-pair vertex of the (1,2) binary scenario; all entries are +/-1.
 */
inline std::vector<BigInt> vertex_correlator_vector(const DeterministicStrategy& a,
                                                    const DeterministicStrategy& b) {
    auto pm = [](int o) { return 1 - 2 * o; };
    std::vector<BigInt> c(33, BigInt(0));
    c[0] = 1;
    const int A0 = pm(a.response[0][0]), A1 = pm(a.response[0][1]);
    const int Ax[2] = {A0, A1};
    for (int x = 0; x < 2; ++x) c[1 + x] = Ax[x];
    for (int y1 = 0; y1 < 2; ++y1) {
        const int B1 = pm(b.response[0][y1]);
        c[1 + 2 + y1] = B1;
        for (int y2 = 0; y2 < 2; ++y2) {
            const int B2 = pm(b.response[1][2 * y1 + y2]);
            c[1 + 4 + 2 * y1 + y2] = B2;
            c[1 + 20 + 2 * y1 + y2] = B1 * B2;
            for (int x = 0; x < 2; ++x) {
                c[1 + 12 + 4 * x + 2 * y1 + y2] = Ax[x] * B2;
                c[1 + 24 + 4 * x + 2 * y1 + y2] = Ax[x] * B1 * B2;
            }
        }
        for (int x = 0; x < 2; ++x) c[1 + 8 + 2 * x + y1] = Ax[x] * B1;
    }
    return c;
}

/** A finite mixture of products of time-ordered deterministic responses. */
struct TimeOrderedModel {
    struct Component {
        Rational weight;
        DeterministicStrategy a, b;
    };
    std::vector<Component> components;

    SequentialCorrelations reconstruct(const Scenario& sc) const {
        std::vector<Rational> acc(sc.size(), Rational(0));
        for (const auto& comp : components) {
            const auto tensor = vertex_tensor(sc, comp.a, comp.b);
            for (std::size_t i = 0; i < acc.size(); ++i)
                if (tensor.rat()[i] != 0) acc[i] += comp.weight * tensor.rat()[i];
        }
        return SequentialCorrelations(sc, std::move(acc));
    }

    Rational total_weight() const {
        Rational s(0);
        for (const auto& c : components) s += c.weight;
        return s;
    }
};

}  // namespace seqloc
