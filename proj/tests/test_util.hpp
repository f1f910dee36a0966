#pragma once

#include <random>
#include <vector>

#include "seqloc/membership.hpp"

namespace seqloc::testutil {

/// random convex mixture of time-ordered vertices (exact rational weights)
inline SequentialCorrelations random_toloc_mixture(const Scenario& sc,
                                                   const std::vector<TolocVertex>& verts,
                                                   std::mt19937_64& rng, int max_terms = 8) {
    const int k = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_terms - 1));
    std::vector<Rational> weights(verts.size(), Rational(0));
    long long total = 0;
    for (int i = 0; i < k; ++i) {
        const auto v = rng() % verts.size();
        const long long w = 1 + static_cast<long long>(rng() % 97);
        weights[v] += Rational(w);
        total += w;
    }
    std::vector<Rational> acc(sc.size(), Rational(0));
    for (std::size_t v = 0; v < verts.size(); ++v) {
        if (weights[v] == 0) continue;
        const auto tensor = vertex_tensor(sc, verts[v].a, verts[v].b);
        const Rational w = weights[v] / total;
        for (std::size_t e = 0; e < acc.size(); ++e)
            if (tensor.rat()[e] != 0) acc[e] += w;
    }
    return SequentialCorrelations(sc, std::move(acc));
}

/// PR box paired with a uniform independent second outcome for B:
/// a + b1 = x*y1 (mod 2) with uniform marginals, b2 unbiased coin
inline SequentialCorrelations pr_box_one_two() {
    const Scenario sc = Scenario::one_two_binary();
    std::vector<Rational> v(sc.size(), Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int a = 0; a < 2; ++a)
                    for (int b1 = 0; b1 < 2; ++b1)
                        for (int b2 = 0; b2 < 2; ++b2)
                            if (((a + b1) & 1) == (x & y1))
                                v[detail::ent(x, y1, y2, a, b1, b2)] = Rational(1, 4);
    return SequentialCorrelations(sc, std::move(v));
}

/// single-shot 2-in/2-out PR box as a 16-entry tensor
inline std::vector<Rational> pr_box_single_shot() {
    std::vector<Rational> v(16, Rational(0));
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    if (((a + b) & 1) == (x & y))
                        v[static_cast<std::size_t>(((x * 2 + y) * 2 + a) * 2 + b)] =
                            Rational(1, 2);
    return v;
}

}  // namespace seqloc::testutil
