// Scratch benchmark: facet enumeration of the 256-vertex time-ordered local
// polytope of the (1,2) binary scenario in its 32-dimensional correlator space.
#include <chrono>
#include <iostream>
#include <map>

#include "seqloc/dd.hpp"
#include "seqloc/strategies.hpp"

using namespace seqloc;

int main() {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::cout << "vertices: " << verts.size() << "\n";

    std::vector<std::vector<Rational>> pts;
    pts.reserve(verts.size());
    for (const auto& v : verts) {
        const auto c = vertex_correlator_vector(v.a, v.b);
        std::vector<Rational> p(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) p[i - 1] = Rational(c[i]);
        pts.push_back(std::move(p));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const auto fd = dd_facets(pts);
    const auto t1 = std::chrono::steady_clock::now();
    std::cout << "facets: " << fd.facets.size()
              << "  equalities: " << fd.equalities.size() << "\n";
    std::cout << "time: "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count() / 1000.0
              << " s\n";

    std::map<BigInt, int> by_bound;
    for (const auto& f : fd.facets) ++by_bound[f.offset];
    for (const auto& [b, n] : by_bound) std::cout << "  offset " << b << ": " << n << "\n";
    return 0;
}
