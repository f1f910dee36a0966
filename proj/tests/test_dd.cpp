#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "seqloc/dd.hpp"

using namespace seqloc;

namespace {

std::vector<Rational> rvec(std::initializer_list<int> v) {
    std::vector<Rational> r;
    for (int x : v) r.emplace_back(x);
    return r;
}

// order-independent canonical key of a facet list
std::set<std::vector<BigInt>> facet_keys(const std::vector<HalfSpace>& facets) {
    std::set<std::vector<BigInt>> keys;
    for (const auto& f : facets) {
        std::vector<BigInt> k = f.normal;
        k.push_back(f.offset);
        keys.insert(k);
    }
    return keys;
}

BigInt eval(const HalfSpace& f, const std::vector<Rational>& p) {
    Rational s(0);
    for (std::size_t i = 0; i < p.size(); ++i) s += Rational(f.normal[i]) * p[i];
    Rational d = Rational(f.offset) - s;
    REQUIRE(den(d) == 1);
    return num(d);
}

void check_valid_and_tight(const FacetDescription& fd,
                           const std::vector<std::vector<Rational>>& pts) {
    for (const auto& f : fd.facets) {
        int tight = 0;
        for (const auto& p : pts) {
            const BigInt slack = eval(f, p);
            CHECK(slack >= 0);
            if (slack == 0) ++tight;
        }
        CHECK(tight >= 1);
    }
    for (const auto& e : fd.equalities)
        for (const auto& p : pts) {
            Rational s(0);
            for (std::size_t i = 0; i < p.size(); ++i) s += Rational(e.normal[i]) * p[i];
            CHECK(s == Rational(e.rhs));
        }
}

}  // namespace

TEST_CASE("unit square has four facets and no equalities") {
    const std::vector<std::vector<Rational>> pts{rvec({0, 0}), rvec({1, 0}), rvec({0, 1}),
                                                 rvec({1, 1})};
    const auto fd = dd_facets(pts);
    CHECK(fd.equalities.empty());
    REQUIRE(fd.facets.size() == 4);
    check_valid_and_tight(fd, pts);
}

TEST_CASE("standard simplex has n+1 facets") {
    for (int n = 2; n <= 5; ++n) {
        std::vector<std::vector<Rational>> pts(n + 1, std::vector<Rational>(n, Rational(0)));
        for (int i = 0; i < n; ++i) pts[i + 1][i] = 1;
        const auto fd = dd_facets(pts);
        CHECK(fd.equalities.empty());
        CHECK(fd.facets.size() == static_cast<std::size_t>(n + 1));
        check_valid_and_tight(fd, pts);
    }
}

TEST_CASE("single point and segment degenerate cases") {
    const auto single = dd_facets({rvec({3, 4, 5})});
    CHECK(single.facets.empty());
    CHECK(single.equalities.size() == 3);

    const auto seg = dd_facets({rvec({0, 0}), rvec({2, 2})});
    CHECK(seg.equalities.size() == 1);  // x == y
    CHECK(seg.facets.size() == 2);      // both endpoints
    check_valid_and_tight(seg, {rvec({0, 0}), rvec({2, 2})});
}

TEST_CASE("triangle embedded in a 3d plane: one equality, three facets") {
    const std::vector<std::vector<Rational>> pts{rvec({1, 0, 0}), rvec({0, 1, 0}),
                                                 rvec({0, 0, 1})};
    const auto fd = dd_facets(pts);
    CHECK(fd.equalities.size() == 1);  // x + y + z == 1
    CHECK(fd.facets.size() == 3);
    check_valid_and_tight(fd, pts);
}

namespace {

// 16 deterministic boxes of the single-shot 2-in/2-out scenario in the
// 8-dimensional correlator coordinates
std::vector<std::vector<Rational>> local_polytope_vertices() {
    std::vector<std::vector<Rational>> verts;
    auto pm = [](int bit) { return 1 - 2 * bit; };
    for (int fa = 0; fa < 4; ++fa)
        for (int fb = 0; fb < 4; ++fb) {
            const int a0 = pm(fa & 1), a1 = pm((fa >> 1) & 1);
            const int b0 = pm(fb & 1), b1 = pm((fb >> 1) & 1);
            verts.push_back(rvec({a0, a1, b0, b1, a0 * b0, a0 * b1, a1 * b0, a1 * b1}));
        }
    return verts;
}

// brute-force oracle for the known facet classes of that polytope:
// 16 positivity facets and 8 CHSH sign patterns
std::set<std::vector<BigInt>> local_polytope_expected_facets() {
    std::set<std::vector<BigInt>> keys;
    auto pm = [](int bit) { return 1 - 2 * bit; };
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ai = 0; ai < 2; ++ai)
                for (int bi = 0; bi < 2; ++bi) {
                    // 1 + a<Ax> + b<By> + ab<AxBy> >= 0
                    const int a = pm(ai), b = pm(bi);
                    std::vector<BigInt> k(9, BigInt(0));
                    k[0 + x] = -a;
                    k[2 + y] = -b;
                    k[4 + 2 * x + y] = -a * b;
                    k[8] = 1;  // offset
                    keys.insert(k);
                }
    for (int sx = 0; sx < 2; ++sx)
        for (int sy = 0; sy < 2; ++sy)
            for (int neg = 0; neg < 2; ++neg) {
                // +/- [<A0B0> + <A0B1> + <A1B0> - <A1B1>] with the minus sign
                // moved over all four positions via input relabelings
                std::vector<BigInt> k(9, BigInt(0));
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y) {
                        int s = (x == sx && y == sy) ? -1 : 1;
                        if (neg) s = -s;
                        k[4 + 2 * x + y] = s;
                    }
                k[8] = 2;
                keys.insert(k);
            }
    return keys;
}

}  // namespace

TEST_CASE("local polytope of the 2-in/2-out scenario: 8 CHSH + 16 positivity facets") {
    const auto verts = local_polytope_vertices();
    const auto fd = dd_facets(verts);
    CHECK(fd.equalities.empty());
    check_valid_and_tight(fd, verts);
    CHECK(facet_keys(fd.facets) == local_polytope_expected_facets());
}

TEST_CASE("facets -> vertices -> facets round trip on the local polytope") {
    const auto verts = local_polytope_vertices();
    const auto fd = dd_facets(verts);
    const auto back = dd_vertices(fd.facets, 8);
    REQUIRE(back.size() == verts.size());
    std::set<std::vector<Rational>> vs(verts.begin(), verts.end());
    for (const auto& v : back) CHECK(vs.count(v) == 1);
    const auto fd2 = dd_facets(back);
    CHECK(facet_keys(fd2.facets) == facet_keys(fd.facets));
}

TEST_CASE("random low-dimensional polytopes round trip") {
    std::mt19937_64 rng(987654321);
    for (int trial = 0; trial < 12; ++trial) {
        const int dim = 3 + static_cast<int>(rng() % 3);       // 3..5
        const int npts = dim + 2 + static_cast<int>(rng() % (12 - dim - 1));
        std::set<std::vector<Rational>> uniq;
        while (static_cast<int>(uniq.size()) < npts) {
            std::vector<Rational> p(dim);
            for (auto& c : p) c = Rational(static_cast<int>(rng() % 9) - 4);
            uniq.insert(p);
        }
        const std::vector<std::vector<Rational>> pts(uniq.begin(), uniq.end());
        const auto fd = dd_facets(pts);
        if (!fd.equalities.empty()) continue;  // degenerate draw: skip (rare)
        check_valid_and_tight(fd, pts);
        const auto back = dd_vertices(fd.facets, dim);
        // the recovered vertex set is a subset of the input points...
        std::set<std::vector<Rational>> input(pts.begin(), pts.end());
        for (const auto& v : back) CHECK(input.count(v) == 1);
        // ...and regenerating facets from it reproduces the facet set exactly
        const auto fd2 = dd_facets(back);
        CHECK(facet_keys(fd2.facets) == facet_keys(fd.facets));
    }
}

TEST_CASE("dd rejects empty input") {
    CHECK_THROWS_AS(dd_facets({}), std::invalid_argument);
}
