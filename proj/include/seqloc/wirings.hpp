#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/correlations.hpp"
#include "seqloc/correlators.hpp"

namespace seqloc {

/**
 * A deterministic sequential wiring on one party: the effective input z is
 * routed through the measurement sequence via f_1(z), f_j(z, o_1..o_{j-1})
 * and the effective output is g(z, o_1..o_t), collapsing that party's
 * sequence into a single measurement with |Z| inputs and |C| outputs.
 * Stochastic wirings are convex mixtures of these and add nothing to the
 * linear constraints built from them.
 */
struct SequentialWiring {
    Party party = Party::B;
    int z_card = 2;
    int c_card = 2;
    /// f[j]: flat table over (z, o_1..o_{j-1}) mixed-radix, z most significant,
    /// with values in the party's step-j setting alphabet
    std::vector<std::vector<int>> f;
    /// g: flat table over (z, o_1..o_t), values in 0..c_card-1
    std::vector<int> g;

    bool operator==(const SequentialWiring&) const = default;
};

namespace detail {

inline std::size_t wiring_prefix_index(int z, const std::vector<int>& outcomes, std::size_t upto,
                                       const std::vector<int>& outcome_cards) {
    std::size_t idx = static_cast<std::size_t>(z);
    for (std::size_t k = 0; k < upto; ++k)
        idx = idx * static_cast<std::size_t>(outcome_cards[k]) + outcomes[k];
    return idx;
}

}  // namespace detail

inline void check_wiring(const SequentialWiring& w, const Scenario& sc) {
    const auto& setting_cards = w.party == Party::A ? sc.x_cards : sc.y_cards;
    const auto& outcome_cards = w.party == Party::A ? sc.a_cards : sc.b_cards;
    const std::size_t steps = setting_cards.size();
    if (w.z_card < 1 || w.c_card < 1) throw std::invalid_argument("wiring: empty alphabets");
    if (w.f.size() != steps) throw std::invalid_argument("wiring: step count mismatch");
    std::size_t dom = static_cast<std::size_t>(w.z_card);
    for (std::size_t j = 0; j < steps; ++j) {
        if (w.f[j].size() != dom)
            throw std::invalid_argument("wiring: routing table " + std::to_string(j) +
                                        " has the wrong domain size");
        for (int v : w.f[j])
            if (v < 0 || v >= setting_cards[j])
                throw std::invalid_argument("wiring: routed setting out of range");
        dom *= static_cast<std::size_t>(outcome_cards[j]);
    }
    if (w.g.size() != dom) throw std::invalid_argument("wiring: output table has the wrong size");
    for (int v : w.g)
        if (v < 0 || v >= w.c_card)
            throw std::invalid_argument("wiring: output value out of range");
}

/**
 * Apply a wiring to one party of a sequential correlation. The wired party
 * is collapsed to a single step; the result is validated (it is sequential
 * by construction, exactly so in rational mode).
 */
inline SequentialCorrelations apply_wiring(const SequentialCorrelations& P,
                                           const SequentialWiring& w) {
    const Scenario& sc = P.scenario();
    check_wiring(w, sc);
    Scenario nsc = sc;
    if (w.party == Party::A) {
        nsc.x_cards = {w.z_card};
        nsc.a_cards = {w.c_card};
    } else {
        nsc.y_cards = {w.z_card};
        nsc.b_cards = {w.c_card};
    }
    const Indexer ix(sc), nix(nsc);
    const auto& outcome_cards = w.party == Party::A ? sc.a_cards : sc.b_cards;
    const std::size_t steps = outcome_cards.size();

    auto accumulate = [&](auto& out, const auto& get) {
        std::vector<int> nd(nix.digit_count(), 0);
        std::size_t nflat = 0;
        do {
            // split the target digits into the other party's part and (z, c)
            const int s2 = nsc.s(), t2 = nsc.t();
            std::vector<int> xs(nd.begin(), nd.begin() + s2);
            std::vector<int> ys(nd.begin() + s2, nd.begin() + s2 + t2);
            std::vector<int> as(nd.begin() + s2 + t2, nd.begin() + s2 + t2 + s2);
            std::vector<int> bs(nd.begin() + s2 + t2 + s2, nd.end());
            const int z = w.party == Party::A ? xs[0] : ys[0];
            const int c = w.party == Party::A ? as[0] : bs[0];
            // sum over the wired party's outcome chains mapped to c
            std::vector<int> chain(steps, 0);
            const std::vector<int> chain_cards = outcome_cards;
            do {
                const std::size_t gi =
                    detail::wiring_prefix_index(z, chain, steps, outcome_cards);
                if (w.g[gi] != c) continue;
                std::vector<int> digits;
                digits.reserve(ix.digit_count());
                auto routed = [&](std::size_t j) {
                    return w.f[j][detail::wiring_prefix_index(z, chain, j, outcome_cards)];
                };
                if (w.party == Party::A) {
                    for (std::size_t j = 0; j < steps; ++j) digits.push_back(routed(j));
                    digits.insert(digits.end(), ys.begin(), ys.end());
                    digits.insert(digits.end(), chain.begin(), chain.end());
                    digits.insert(digits.end(), bs.begin(), bs.end());
                } else {
                    digits.insert(digits.end(), xs.begin(), xs.end());
                    for (std::size_t j = 0; j < steps; ++j) digits.push_back(routed(j));
                    digits.insert(digits.end(), as.begin(), as.end());
                    digits.insert(digits.end(), chain.begin(), chain.end());
                }
                out[nflat] += get(ix.flatten(digits));
            } while (next_tuple(chain, chain_cards));
            ++nflat;
        } while (next_tuple(nd, nix.cards()));
    };

    if (P.is_rational()) {
        std::vector<Rational> out(nsc.size(), Rational(0));
        accumulate(out, [&](std::size_t i) { return P.rat()[i]; });
        SequentialCorrelations R(nsc, std::move(out));
        if (!validate_sequential(R).ok())
            throw std::logic_error("apply_wiring: result failed validation");
        return R;
    }
    std::vector<double> out(nsc.size(), 0.0);
    accumulate(out, [&](std::size_t i) { return P.flt()[i]; });
    SequentialCorrelations R(nsc, std::move(out), P.tolerance() * 4);
    if (!validate_sequential(R).ok())
        throw std::logic_error("apply_wiring: result failed validation");
    return R;
}

/**
 * A wiring of party B in the (1,2) binary scenario together with the induced
 * linear map, stored as a 16x64 0/1 matrix taking the joint tensor to the
 * wired bipartite box (row index (x, z, a, c) most significant first).
 */
struct WiringMap {
    SequentialWiring wiring;
    std::vector<std::array<int, 64>> matrix;  // 16 rows

    std::vector<Rational> apply(const std::vector<Rational>& tensor) const {
        std::vector<Rational> out(16, Rational(0));
        for (int r = 0; r < 16; ++r)
            for (int e = 0; e < 64; ++e)
                if (matrix[r][e]) out[r] += tensor[e];
        return out;
    }
};

namespace detail {

inline std::vector<std::array<int, 64>> wiring_matrix_one_two(const SequentialWiring& w) {
    std::vector<std::array<int, 64>> m(16);
    for (auto& row : m) row.fill(0);
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int b1 = 0; b1 < 2; ++b1)
                for (int b2 = 0; b2 < 2; ++b2) {
                    const int y1 = w.f[0][z];
                    const int y2 = w.f[1][2 * z + b1];
                    const int c = w.g[(2 * z + b1) * 2 + b2];
                    const int a0row = ((x * 2 + z) * 2 + 0) * 2 + c;
                    const int a1row = ((x * 2 + z) * 2 + 1) * 2 + c;
                    m[a0row][ent(x, y1, y2, 0, b1, b2)] += 1;
                    m[a1row][ent(x, y1, y2, 1, b1, b2)] += 1;
                }
    return m;
}

}  // namespace detail

/**
 * All deterministic wirings of party B in the (1,2) binary scenario with
 * binary effective input and output: 4 x 16 x 256 = 16384 raw function
 * triples, deduplicated by exact equality of the induced linear maps on the
 * sequential subspace (function triples differing only on branches the map
 * cannot see collapse). Deterministic lexicographic order; the first triple
 * of each class is kept as representative.
 */
inline std::vector<WiringMap> enumerate_wirings(std::size_t* raw_count = nullptr) {
    // sign table of the Fourier reconstruction: S[k][e], k = 0 constant
    static const auto signs = [] {
        std::array<std::array<int, 64>, 33> s{};
        for (int e = 0; e < 64; ++e) {
            const int x = (e >> 5) & 1, y1 = (e >> 4) & 1, y2 = (e >> 3) & 1;
            const int a = (e >> 2) & 1, b1 = (e >> 1) & 1, b2 = e & 1;
            s[0][e] = 1;
            for (int k = 0; k < kCorrCount; ++k)
                s[k + 1][e] = detail::corr_weight(k, x, y1, y2, a, b1, b2).sign;
        }
        return s;
    }();

    std::vector<WiringMap> out;
    std::map<std::vector<int>, std::size_t> seen;
    std::size_t raw = 0;
    for (int f1 = 0; f1 < 4; ++f1)
        for (int f2 = 0; f2 < 16; ++f2)
            for (int g = 0; g < 256; ++g) {
                SequentialWiring w;
                w.party = Party::B;
                w.z_card = 2;
                w.c_card = 2;
                w.f = {{(f1 >> 0) & 1, (f1 >> 1) & 1},
                       {(f2 >> 0) & 1, (f2 >> 1) & 1, (f2 >> 2) & 1, (f2 >> 3) & 1}};
                w.g.resize(8);
                for (int i = 0; i < 8; ++i) w.g[i] = (g >> i) & 1;
                ++raw;
                auto matrix = detail::wiring_matrix_one_two(w);
                std::vector<std::array<int, 4>> support(16);  // <= 4 entries per row
                std::vector<int> nsupp(16, 0);
                for (int r = 0; r < 16; ++r)
                    for (int e = 0; e < 64; ++e)
                        if (matrix[r][e]) support[r][nsupp[r]++] = e;
                // restriction to the sequential subspace: compose the map with
                // the correlator parametrization (global 1/8 dropped)
                std::vector<int> key;
                key.reserve(16 * 33);
                for (int r = 0; r < 16; ++r)
                    for (int k = 0; k < 33; ++k) {
                        int acc = 0;
                        for (int i = 0; i < nsupp[r]; ++i) acc += signs[k][support[r][i]];
                        key.push_back(acc);
                    }
                if (seen.emplace(std::move(key), out.size()).second)
                    out.push_back(WiringMap{std::move(w), std::move(matrix)});
            }
    if (raw_count) *raw_count = raw;
    return out;
}

}  // namespace seqloc
