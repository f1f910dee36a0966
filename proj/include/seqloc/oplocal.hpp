#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "seqloc/membership.hpp"
#include "seqloc/wirings.hpp"

namespace seqloc {

/**
 * Result of maximizing a functional over the single-copy operational
 * relaxation: sequential correlations whose post-selection branches satisfy
 * every CHSH sign pattern (multiplied through) and whose image under every
 * deduplicated wiring is CHSH-local. Time-ordered local points are feasible,
 * so beta_star >= toloc_max always; equality is the certified outcome, not
 * an assumption.
 */
struct OpLocalLpReport {
    Rational beta_star;
    Rational toloc_max;
    bool equal = false;
    SequentialCorrelations maximizer;
    /// wiring-image constraints that ended up active (tight) at the maximizer
    std::vector<std::pair<std::size_t, int>> active_wiring_rows;
    std::size_t wiring_rows_added = 0;
    std::size_t lp_solves = 0;
};

namespace detail {

/// CHSH row of one wiring image as coefficients over the 64 tensor entries
inline std::vector<Rational> wiring_chsh_row(const WiringMap& wm, int pattern) {
    std::vector<Rational> row(64, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int z = 0; z < 2; ++z)
            for (int a = 0; a < 2; ++a)
                for (int c = 0; c < 2; ++c) {
                    const int coef = chsh_pattern_sign(pattern, x, z) * (a == c ? 1 : -1);
                    if (coef == 0) continue;
                    const int r = ((x * 2 + z) * 2 + a) * 2 + c;
                    for (int e = 0; e < 64; ++e)
                        if (wm.matrix[r][e]) row[e] += coef;
                }
    return row;
}

/// multiplied-through CHSH rows of the four post-selection branches
inline std::vector<std::vector<Rational>> postselection_chsh_rows() {
    std::vector<std::vector<Rational>> rows;
    for (int y1 = 0; y1 < 2; ++y1)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int p = 0; p < 8; ++p) {
                std::vector<Rational> row(64, Rational(0));
                for (int x = 0; x < 2; ++x)
                    for (int y2 = 0; y2 < 2; ++y2)
                        for (int a = 0; a < 2; ++a)
                            for (int b2 = 0; b2 < 2; ++b2) {
                                const int sign = chsh_pattern_sign(p, x, y2) * (a == b2 ? 1 : -1);
                                auto& v = row[ent(x, y1, y2, a, b1, b2)];
                                v += sign;
                                v -= Rational(1, 2);  // 2 * branch mass, averaged over (x,y2)
                            }
                rows.push_back(std::move(row));
            }
    return rows;
}

}  // namespace detail

/**
 * Exact maximum of beta over the single-copy operational constraint set,
 * solved by lazy generation of wiring-image rows: solve, scan every wiring
 * image of the maximizer for violated sign patterns, add the worst rows,
 * repeat until every image is CHSH-local. Deterministic throughout.
 */
inline OpLocalLpReport oplocal_lp(const BellFunctional& beta,
                                  const std::vector<WiringMap>& wirings,
                                  const std::vector<std::vector<BigInt>>& vertex_corr) {
    const Scenario sc = Scenario::one_two_binary();
    LinearProgram lp;
    lp.objective = to_probability_basis(beta).coeffs;
    for (auto& row : normalization_rows(sc)) {
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(Rational(1));
    }
    for (auto& row : sequentiality_equality_rows(sc)) {
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(Rational(0));
    }
    for (auto& row : detail::postselection_chsh_rows()) {
        lp.ub_lhs.push_back(std::move(row));
        lp.ub_rhs.push_back(Rational(0));
    }

    std::map<std::vector<Rational>, std::size_t> row_index;  // exact row dedup
    std::vector<std::pair<std::size_t, int>> row_origin;     // (wiring, pattern)
    constexpr std::size_t kRowsPerIteration = 16;

    OpLocalLpReport report{Rational(0), Rational(0), false,
                           SequentialCorrelations::uniform(sc), {}, 0, 0};
    for (;;) {
        const auto res = solve_lp(lp);
        ++report.lp_solves;
        if (res.status != LpStatus::optimal)
            throw std::logic_error("operational LP must be feasible and bounded");
        const std::vector<Rational> P(res.primal.begin(), res.primal.begin() + 64);

        // scan all wiring images of the maximizer for violated sign patterns
        struct Candidate {
            Rational violation;
            std::size_t wiring;
            int pattern;
        };
        std::vector<Candidate> cands;
        for (std::size_t wi = 0; wi < wirings.size(); ++wi) {
            const auto image = wirings[wi].apply(P);
            std::array<Rational, 4> corr;
            for (int x = 0; x < 2; ++x)
                for (int z = 0; z < 2; ++z) {
                    Rational e(0);
                    for (int a = 0; a < 2; ++a)
                        for (int c = 0; c < 2; ++c) {
                            const auto& v =
                                image[static_cast<std::size_t>(((x * 2 + z) * 2 + a) * 2 + c)];
                            e += (a == c) ? v : -v;
                        }
                    corr[2 * x + z] = e;
                }
            for (int p = 0; p < 8; ++p) {
                Rational val(0);
                for (int x = 0; x < 2; ++x)
                    for (int z = 0; z < 2; ++z)
                        val += chsh_pattern_sign(p, x, z) * corr[2 * x + z];
                if (val > 2) cands.push_back({val - 2, wi, p});
            }
        }
        if (cands.empty()) {
            report.beta_star = res.optimum;
            report.maximizer = SequentialCorrelations(sc, P);
            // record which added wiring rows are tight at the maximizer
            for (std::size_t i = 0; i < row_origin.size(); ++i) {
                const auto& row = lp.ub_lhs[32 + i];
                Rational v(0);
                for (int e = 0; e < 64; ++e)
                    if (row[e] != 0) v += row[e] * P[e];
                if (v == lp.ub_rhs[32 + i]) report.active_wiring_rows.push_back(row_origin[i]);
            }
            break;
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
            if (a.violation != b.violation) return a.violation > b.violation;
            if (a.wiring != b.wiring) return a.wiring < b.wiring;
            return a.pattern < b.pattern;
        });
        std::size_t added = 0;
        for (const auto& cand : cands) {
            if (added >= kRowsPerIteration) break;
            auto row = detail::wiring_chsh_row(wirings[cand.wiring], cand.pattern);
            if (!row_index.emplace(row, row_origin.size()).second) continue;
            lp.ub_lhs.push_back(std::move(row));
            lp.ub_rhs.push_back(Rational(2));
            row_origin.emplace_back(cand.wiring, cand.pattern);
            ++added;
        }
        if (added == 0)
            throw std::logic_error("operational LP: violated rows already present");
        report.wiring_rows_added = row_origin.size();
    }

    BellFunctional corr_beta = to_correlator_basis(beta);
    bool first = true;
    for (const auto& v : vertex_corr) {
        const Rational val = evaluate_corr_vec(corr_beta, v);
        if (first || val > report.toloc_max) {
            report.toloc_max = val;
            first = false;
        }
    }
    report.equal = report.beta_star == report.toloc_max;
    return report;
}

struct Theorem1Row {
    std::string orbit;
    CanonicalFunctional representative;
    Rational beta_star;
    Rational toloc_max;
    bool equal = false;
};

/**
 * Run the operational LP for every facet-orbit representative and compare
 * with the exact vertex maximum. A row with equal == false would contradict
 * the single-copy equivalence and is surfaced by the caller.
 */
inline std::vector<Theorem1Row> certify_theorem1(const TolocFacetData& data,
                                                 const std::vector<WiringMap>& wirings) {
    std::vector<Theorem1Row> rows;
    for (const auto& orbit : data.classification.orbits) {
        const auto beta = from_canonical(orbit.representative);
        const auto rep = oplocal_lp(beta, wirings, data.vertex_corr);
        rows.push_back(Theorem1Row{orbit.name, orbit.representative, rep.beta_star,
                                   rep.toloc_max, rep.equal});
    }
    return rows;
}

/**
 * Lift per-branch time-ordered models of all first-step post-selections to a
 * model of the full correlations, for scenarios whose first measurements
 * have a single setting each. The lifted hidden variable is (branch, lambda)
 * with weight q = P(first outcomes) * p(lambda | branch); first-step
 * responses are point masses on the branch outcomes.
 */
inline TimeOrderedModel lift_postselected_models(
    const Scenario& sc, const std::vector<std::vector<std::optional<TimeOrderedModel>>>& models,
    const std::vector<std::vector<Rational>>& first_step) {
    sc.check();
    if (sc.x_cards[0] != 1 || sc.y_cards[0] != 1)
        throw std::invalid_argument(
            "lift_postselected_models: first measurements must have a single setting");
    if (sc.s() < 2 || sc.t() < 2)
        throw std::invalid_argument("lift_postselected_models: both parties need a second step");
    const int na = sc.a_cards[0], nb = sc.b_cards[0];
    if (static_cast<int>(first_step.size()) != na)
        throw std::invalid_argument("lift_postselected_models: first-step distribution shape");
    Rational total(0);
    for (const auto& row : first_step) {
        if (static_cast<int>(row.size()) != nb)
            throw std::invalid_argument("lift_postselected_models: first-step distribution shape");
        for (const auto& q : row) {
            if (q < 0) throw std::invalid_argument("lift_postselected_models: negative weight");
            total += q;
        }
    }
    if (total != 1)
        throw std::invalid_argument("lift_postselected_models: weights fail to normalize");

    auto lift_strategy = [&](const DeterministicStrategy& reduced, Party party,
                             int first_outcome) {
        DeterministicStrategy full;
        full.party = party;
        full.setting_cards = party == Party::A ? sc.x_cards : sc.y_cards;
        full.response.push_back({first_outcome});
        // the first setting alphabet is trivial, so later tables carry over
        for (const auto& table : reduced.response) full.response.push_back(table);
        return full;
    };

    TimeOrderedModel lifted;
    for (int a1 = 0; a1 < na; ++a1)
        for (int b1 = 0; b1 < nb; ++b1) {
            const Rational& q = first_step[a1][b1];
            if (q == 0) continue;
            const auto& model = models.at(a1).at(b1);
            if (!model)
                throw std::invalid_argument(
                    "lift_postselected_models: missing model for a positive-probability branch");
            if (model->total_weight() != 1)
                throw std::invalid_argument(
                    "lift_postselected_models: branch model weights fail to normalize");
            for (const auto& comp : model->components)
                lifted.components.push_back({q * comp.weight,
                                             lift_strategy(comp.a, Party::A, a1),
                                             lift_strategy(comp.b, Party::B, b1)});
        }
    return lifted;
}

}  // namespace seqloc
