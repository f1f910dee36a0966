#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "seqloc/facets.hpp"
#include "seqloc/functionals.hpp"
#include "seqloc/lp.hpp"
#include "seqloc/strategies.hpp"

namespace seqloc {

/** Equality rows (coefficients over flat entries, rhs 0) expressing all
 *  sequentiality conditions of the scenario. */
inline std::vector<std::vector<Rational>> sequentiality_equality_rows(const Scenario& sc) {
    std::vector<std::vector<Rational>> rows;
    const Indexer ix(sc);
    const auto& cards = ix.cards();
    const std::size_t nd = cards.size();
    for (Party party : {Party::A, Party::B}) {
        const int steps = party == Party::A ? sc.s() : sc.t();
        for (int j = 0; j < steps; ++j) {
            std::vector<bool> summed(nd, false), indep(nd, false);
            for (int k = j; k < steps; ++k) {
                summed[party == Party::A ? ix.a_pos(k) : ix.b_pos(k)] = true;
                indep[party == Party::A ? ix.x_pos(k) : ix.y_pos(k)] = true;
            }
            std::size_t n_group = 1, n_cell = 1;
            for (std::size_t p = 0; p < nd; ++p) {
                if (indep[p]) n_cell *= cards[p];
                else if (!summed[p]) n_group *= cards[p];
            }
            // one row per (group, cell != 0): cell value minus cell-0 value
            std::vector<std::vector<std::vector<std::size_t>>> entries(
                n_group, std::vector<std::vector<std::size_t>>(n_cell));
            std::vector<int> digits(nd, 0);
            std::size_t flat = 0;
            do {
                std::size_t g = 0, c = 0;
                for (std::size_t p = 0; p < nd; ++p) {
                    if (indep[p]) c = c * cards[p] + digits[p];
                    else if (!summed[p]) g = g * cards[p] + digits[p];
                }
                entries[g][c].push_back(flat);
                ++flat;
            } while (next_tuple(digits, ix.cards()));
            for (std::size_t g = 0; g < n_group; ++g)
                for (std::size_t c = 1; c < n_cell; ++c) {
                    std::vector<Rational> row(sc.size(), Rational(0));
                    for (auto e : entries[g][c]) row[e] += 1;
                    for (auto e : entries[g][0]) row[e] -= 1;
                    rows.push_back(std::move(row));
                }
        }
    }
    return rows;
}

/** Per-setting normalization rows (coefficients over flat entries, rhs 1). */
inline std::vector<std::vector<Rational>> normalization_rows(const Scenario& sc) {
    std::vector<std::vector<Rational>> rows;
    const std::size_t block = sc.outcome_count();
    for (std::size_t s = 0; s < sc.setting_count(); ++s) {
        std::vector<Rational> row(sc.size(), Rational(0));
        for (std::size_t o = 0; o < block; ++o) row[s * block + o] = 1;
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// CHSH locality of single-shot 2-in/2-out boxes (the locality test behind the
// post-selection conditions; equivalent to the 16-vertex LP on no-signalling
// data, which the tests cross-check)
// ---------------------------------------------------------------------------

/// the 8 sign patterns: index p = 4*negated + 2*sx + sy, the minus sign
/// sitting at input pair (sx, sy)
inline int chsh_pattern_sign(int p, int x, int y) {
    const int sx = (p >> 1) & 1, sy = p & 1;
    int s = (x == sx && y == sy) ? -1 : 1;
    return (p & 4) ? -s : s;
}

struct ChshCheck {
    bool local = true;
    int worst_pattern = -1;
    Rational worst_value;   // of the multiplied-through form
    Rational scale;         // per-setting mass the box was multiplied by
};

/**
 * CHSH locality of a possibly unnormalized 2-in/2-out box. `box` holds the 16
 * entries indexed (x, y, a, b) most-significant-first; every setting must
 * carry the same total mass (multiplied-through post-selection branches do).
 * The box is local iff all 8 pattern values stay within 2 * mass.
 */
inline ChshCheck chsh_local_check(const std::vector<Rational>& box, const Rational& mass) {
    if (box.size() != 16) throw std::invalid_argument("chsh_local_check: expected 16 entries");
    std::array<Rational, 4> corr;  // unnormalized E_xy
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Rational e(0);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const Rational& v = box[static_cast<std::size_t>(((x * 2 + y) * 2 + a) * 2 + b)];
                    e += (a == b) ? v : -v;
                }
            corr[2 * x + y] = e;
        }
    ChshCheck res;
    res.scale = mass;
    const Rational limit = 2 * mass;
    for (int p = 0; p < 8; ++p) {
        Rational val(0);
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) val += chsh_pattern_sign(p, x, y) * corr[2 * x + y];
        if (val > limit && (res.worst_pattern < 0 || val > res.worst_value)) {
            res.local = false;
            res.worst_pattern = p;
            res.worst_value = val;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// membership oracles
// ---------------------------------------------------------------------------

struct TolocMembership {
    bool member = false;
    std::optional<TimeOrderedModel> model;     ///< exact reconstruction on yes
    std::optional<BellFunctional> separating;  ///< valid on every vertex, violated by P
    std::string separating_orbit;              ///< orbit tag when facet-based
    Rational violation;                        ///< beta(P) - bound of the certificate
};

namespace detail {

inline void require_exact_sequential(const SequentialCorrelations& P, const char* who) {
    if (!P.is_rational())
        throw std::invalid_argument(std::string(who) +
                                    ": rational representation required (rationalize first)");
    if (!validate_sequential(P).ok())
        throw std::invalid_argument(std::string(who) + ": input is not exactly sequential");
}

/** Feasibility of target = convex mixture of the given tensors. */
struct HullResult {
    bool inside = false;
    std::vector<Rational> weights;
    std::vector<Rational> farkas;  // over entry rows; last element is the row for sum w = 1
};

inline HullResult hull_membership(const std::vector<TolocVertex>& verts, const Scenario& sc,
                                  const SequentialCorrelations& target) {
    const std::size_t n = target.size(), nv = verts.size();
    std::vector<std::vector<Rational>> cols;
    cols.reserve(nv);
    for (const auto& v : verts) cols.push_back(vertex_tensor(sc, v.a, v.b).rat());

    LinearProgram lp;
    lp.objective.assign(nv, Rational(0));
    lp.eq_lhs.assign(n + 1, std::vector<Rational>(nv, Rational(0)));
    lp.eq_rhs.resize(n + 1);
    for (std::size_t e = 0; e < n; ++e) {
        for (std::size_t v = 0; v < nv; ++v) lp.eq_lhs[e][v] = cols[v][e];
        lp.eq_rhs[e] = target.rat()[e];
    }
    lp.eq_lhs[n].assign(nv, Rational(1));
    lp.eq_rhs[n] = 1;

    const auto res = solve_lp(lp);
    HullResult out;
    if (res.status == LpStatus::optimal) {
        out.inside = true;
        out.weights = res.primal;
    } else if (res.status == LpStatus::infeasible) {
        out.farkas = res.farkas_eq;
    } else {
        throw std::logic_error("hull membership LP cannot be unbounded");
    }
    return out;
}

inline TimeOrderedModel model_from_weights(const std::vector<TolocVertex>& verts,
                                           const std::vector<Rational>& weights) {
    TimeOrderedModel model;
    for (std::size_t i = 0; i < verts.size(); ++i)
        if (weights[i] != 0)
            model.components.push_back({weights[i], verts[i].a, verts[i].b});
    return model;
}

}  // namespace detail

/**
 * Exact membership in the time-ordered local set. On yes, the returned model
 * reconstructs P exactly; on no, the separating functional is valid on all
 * vertices but violated by P. For the (1,2) binary scenario the certificate
 * is the most violated facet (computing the facet cache on first use); other
 * scenarios get a Farkas-derived functional.
 */
inline TolocMembership member_toloc(const SequentialCorrelations& P,
                                    bool use_facet_certificates = true,
                                    std::size_t cap = 1000000) {
    detail::require_exact_sequential(P, "member_toloc");
    const Scenario& sc = P.scenario();
    const auto verts = enumerate_toloc_vertices_raw(sc, cap);
    const auto hull = detail::hull_membership(verts, sc, P);

    TolocMembership out;
    if (hull.inside) {
        out.member = true;
        out.model = detail::model_from_weights(verts, hull.weights);
        return out;
    }
    out.member = false;
    if (use_facet_certificates && sc.is_one_two_binary()) {
        const auto data = toloc_facets();
        const auto pc = to_correlators(P);
        // evaluate each facet exactly on P and pick the most violated one
        std::size_t best = data.facets.size();
        Rational best_violation(0);
        for (std::size_t i = 0; i < data.facets.size(); ++i) {
            const auto& f = data.facets[i].canonical;
            Rational v(0);
            for (int k = 0; k < kCorrCount; ++k)
                if (f.coeffs[k + 1] != 0) v += Rational(f.coeffs[k + 1]) * pc.rat[k];
            const Rational violation = v - Rational(f.bound);
            if (violation > best_violation ||
                (violation == best_violation && best < data.facets.size() &&
                 violation > 0 && f < data.facets[best].canonical)) {
                best = i;
                best_violation = violation;
            }
        }
        if (best < data.facets.size() && best_violation > 0) {
            out.separating = from_canonical(data.facets[best].canonical);
            out.separating_orbit = data.facets[best].orbit;
            out.violation = best_violation;
            return out;
        }
        // fall through: P satisfies every facet yet is outside the hull --
        // impossible for valid input, so surface it loudly
        throw std::logic_error("member_toloc: infeasible but no facet is violated");
    }
    // Farkas-derived separating functional: phi . v <= bound for all vertices
    // and phi . P > bound, with phi = -y[entries], bound = y[last]
    std::vector<Rational> phi(P.size());
    for (std::size_t e = 0; e < P.size(); ++e) phi[e] = -hull.farkas[e];
    BellFunctional f;
    f.basis = Basis::probability;
    f.coeffs = std::move(phi);
    f.bound = hull.farkas.back();
    Rational val(0);
    for (std::size_t e = 0; e < P.size(); ++e) val += f.coeffs[e] * P.rat()[e];
    out.violation = val - f.bound;
    out.separating = std::move(f);
    return out;
}

/** Merge every step of each party into one box: the tensor is unchanged, the
 *  scenario becomes single-shot with product alphabets. */
inline SequentialCorrelations merge_steps(const SequentialCorrelations& P) {
    const Scenario& sc = P.scenario();
    auto prod = [](const std::vector<int>& v) {
        int p = 1;
        for (int c : v) p *= c;
        return p;
    };
    const Scenario merged = Scenario::single_shot(prod(sc.x_cards), prod(sc.y_cards),
                                                  prod(sc.a_cards), prod(sc.b_cards));
    if (P.is_rational()) return SequentialCorrelations(merged, P.rat());
    return SequentialCorrelations(merged, P.flt(), P.tolerance());
}

/**
 * Standard Bell locality with each party's measurement sequence treated as
 * one merged box (the hidden-variable decomposition with arbitrary per-model
 * responses). Certificates live in the merged single-shot scenario.
 */
inline TolocMembership member_bell_local(const SequentialCorrelations& P,
                                         std::size_t cap = 1000000) {
    detail::require_exact_sequential(P, "member_bell_local");
    return member_toloc(merge_steps(P), false, cap);
}

struct PostlocWitness {
    enum class Kind { merged_nonlocal, branch_nonlocal };
    Kind kind;
    std::optional<BellFunctional> merged_separating;  // merged-scenario functional
    int y1 = -1, b1 = -1;       ///< offending post-selection branch
    int pattern = -1;           ///< violated CHSH sign pattern (0..7)
    Rational violation;
};

struct PostlocMembership {
    bool member = false;
    std::optional<PostlocWitness> witness;
};

/**
 * Membership in the post-selection-local set of the (1,2) binary scenario:
 * the merged box must be Bell-local and every (y1, b1) branch must satisfy
 * all CHSH sign patterns in multiplied-through form (vacuous at probability
 * zero). Branch locality is decided by the sign patterns; the 16-vertex LP
 * cross-check can be enabled for non-hot-path calls.
 */
inline PostlocMembership member_postloc(const SequentialCorrelations& P,
                                        bool lp_crosscheck = false) {
    detail::require_exact_sequential(P, "member_postloc");
    detail::require_one_two_binary(P.scenario(), "member_postloc");

    PostlocMembership out;
    const auto bell = member_bell_local(P);
    if (!bell.member) {
        PostlocWitness w;
        w.kind = PostlocWitness::Kind::merged_nonlocal;
        w.merged_separating = bell.separating;
        w.violation = bell.violation;
        out.witness = std::move(w);
        return out;
    }
    for (int y1 = 0; y1 < 2; ++y1)
        for (int b1 = 0; b1 < 2; ++b1) {
            // multiplied-through branch box: entries P(a, b1, b2 | x, y1, y2)
            std::vector<Rational> box(16);
            for (int x = 0; x < 2; ++x)
                for (int y2 = 0; y2 < 2; ++y2)
                    for (int a = 0; a < 2; ++a)
                        for (int b2 = 0; b2 < 2; ++b2)
                            box[static_cast<std::size_t>(((x * 2 + y2) * 2 + a) * 2 + b2)] =
                                P.rat()[detail::ent(x, y1, y2, a, b1, b2)];
            Rational mass(0);
            for (int a = 0; a < 2; ++a)
                for (int b2 = 0; b2 < 2; ++b2)
                    mass += box[static_cast<std::size_t>((0 * 2 + a) * 2 + b2)];
            const auto check = chsh_local_check(box, mass);
            bool lp_local = true;
            if (lp_crosscheck && mass > 0) {
                std::vector<Rational> nbox(16);
                for (std::size_t i = 0; i < 16; ++i) nbox[i] = box[i] / mass;
                const Scenario single = Scenario::single_shot(2, 2, 2, 2);
                const SequentialCorrelations branch(single, nbox);
                lp_local = member_toloc(branch, false).member;
                if (lp_local != check.local)
                    throw std::logic_error(
                        "member_postloc: sign-pattern test disagrees with the vertex LP");
            }
            if (!check.local) {
                PostlocWitness w;
                w.kind = PostlocWitness::Kind::branch_nonlocal;
                w.y1 = y1;
                w.b1 = b1;
                w.pattern = check.worst_pattern;
                w.violation = check.worst_value - 2 * mass;
                out.witness = std::move(w);
                return out;
            }
        }
    out.member = true;
    return out;
}

}  // namespace seqloc
