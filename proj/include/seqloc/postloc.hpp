#pragma once

#include <optional>
#include <vector>

#include "seqloc/membership.hpp"

namespace seqloc {

struct PostlocMaximum {
    Rational optimum;
    SequentialCorrelations maximizer;
    std::vector<Rational> weights;  ///< hidden-variable mixture certifying Bell locality
};

/**
 * Exact maximum of a functional over the post-selection-local set of the
 * (1,2) binary scenario, as one LP: variables are the 64 tensor entries plus
 * the 1024 convex weights of the merged-box hidden-variable decomposition;
 * constraints are the linking equalities, the sequentiality conditions and
 * the multiplied-through CHSH inequalities of every post-selection branch.
 */
inline PostlocMaximum maximize_over_postloc(const BellFunctional& beta) {
    const Scenario sc = Scenario::one_two_binary();
    const std::size_t n = sc.size();
    const Scenario merged = Scenario::single_shot(2, 4, 2, 4);
    const auto verts = enumerate_local_vertices_raw(merged);
    const std::size_t nv = verts.size();
    const std::size_t nvars = n + nv;

    std::vector<std::vector<Rational>> cols;
    cols.reserve(nv);
    for (const auto& v : verts) cols.push_back(vertex_tensor(merged, v.a, v.b).rat());

    LinearProgram lp;
    lp.objective.assign(nvars, Rational(0));
    const auto beta_prob = to_probability_basis(beta);
    for (std::size_t e = 0; e < n; ++e) lp.objective[e] = beta_prob.coeffs[e];
    // the constant part of a probability-basis functional obtained from the
    // correlator basis is spread over the entries, so no offset is needed

    // P_e - sum_v w_v vertex_v[e] = 0
    for (std::size_t e = 0; e < n; ++e) {
        std::vector<Rational> row(nvars, Rational(0));
        row[e] = 1;
        for (std::size_t v = 0; v < nv; ++v) row[n + v] = -cols[v][e];
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(Rational(0));
    }
    {
        std::vector<Rational> row(nvars, Rational(0));
        for (std::size_t v = 0; v < nv; ++v) row[n + v] = 1;
        lp.eq_lhs.push_back(std::move(row));
        lp.eq_rhs.push_back(Rational(1));
    }
    for (auto& seq_row : sequentiality_equality_rows(sc)) {
        seq_row.resize(nvars, Rational(0));
        lp.eq_lhs.push_back(std::move(seq_row));
        lp.eq_rhs.push_back(Rational(0));
    }
    // multiplied-through CHSH on every (y1, b1) branch:
    //   sum_pattern branch entries - 2 * branch mass <= 0
    for (int y1 = 0; y1 < 2; ++y1)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int p = 0; p < 8; ++p) {
                std::vector<Rational> row(nvars, Rational(0));
                for (int x = 0; x < 2; ++x)
                    for (int y2 = 0; y2 < 2; ++y2)
                        for (int a = 0; a < 2; ++a)
                            for (int b2 = 0; b2 < 2; ++b2) {
                                const int sign = chsh_pattern_sign(p, x, y2) * (a == b2 ? 1 : -1);
                                row[detail::ent(x, y1, y2, a, b1, b2)] += sign;
                                // branch mass via the (x,y2)-averaged marginal
                                row[detail::ent(x, y1, y2, a, b1, b2)] -= Rational(2, 4);
                            }
                lp.ub_lhs.push_back(std::move(row));
                lp.ub_rhs.push_back(Rational(0));
            }

    const auto res = solve_lp(lp);
    if (res.status != LpStatus::optimal)
        throw std::logic_error("maximize_over_postloc: LP must be feasible and bounded");
    std::vector<Rational> tensor(res.primal.begin(), res.primal.begin() + n);
    std::vector<Rational> weights(res.primal.begin() + n, res.primal.end());
    return PostlocMaximum{res.optimum, SequentialCorrelations(sc, std::move(tensor)),
                          std::move(weights)};
}

}  // namespace seqloc
