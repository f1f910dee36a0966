#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "seqloc/membership.hpp"
#include "seqloc/postloc.hpp"
#include "test_util.hpp"

using namespace seqloc;

TEST_CASE("vertex counts") {
    CHECK(enumerate_toloc_vertices_raw(Scenario::single_shot(2, 2, 2, 2)).size() == 16);
    CHECK(enumerate_toloc_vertices_raw(Scenario::one_two_binary()).size() == 256);
    CHECK(enumerate_toloc_vertices_raw(Scenario{{1}, {1}, {1}, {1}}).size() == 1);
    CHECK(enumerate_local_vertices_raw(Scenario::single_shot(2, 4, 2, 4)).size() == 1024);
    CHECK_THROWS_AS(enumerate_toloc_vertices_raw(Scenario::one_two_binary(), 100),
                    std::length_error);
}

TEST_CASE("(1,2) vertices are pairwise distinct and valid") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::set<std::vector<Rational>> seen;
    for (const auto& v : verts) {
        const auto tensor = vertex_tensor(sc, v.a, v.b);
        CHECK(validate_sequential(tensor).ok());
        seen.insert(tensor.rat());
    }
    CHECK(seen.size() == verts.size());

    std::set<std::vector<BigInt>> corr_seen;
    for (const auto& v : verts) corr_seen.insert(vertex_correlator_vector(v.a, v.b));
    CHECK(corr_seen.size() == verts.size());
}

TEST_CASE("correlator vectors agree with tensor correlators") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 25; ++i) {
        const auto& v = verts[rng() % verts.size()];
        const auto fast = vertex_correlator_vector(v.a, v.b);
        const auto slow = to_correlators(vertex_tensor(sc, v.a, v.b));
        for (int k = 0; k < kCorrCount; ++k) CHECK(Rational(fast[k + 1]) == slow.rat[k]);
    }
}

TEST_CASE("member_toloc: uniform is inside with an exact model") {
    const auto P = SequentialCorrelations::uniform(Scenario::one_two_binary());
    const auto res = member_toloc(P, /*use_facet_certificates=*/false);
    REQUIRE(res.member);
    REQUIRE(res.model.has_value());
    CHECK(res.model->total_weight() == 1);
    CHECK(res.model->reconstruct(P.scenario()).rat() == P.rat());
}

TEST_CASE("member_toloc: PR-box construction is outside with a valid certificate") {
    const auto P = testutil::pr_box_one_two();
    REQUIRE(validate_sequential(P).ok());
    const auto res = member_toloc(P, /*use_facet_certificates=*/false);
    REQUIRE(!res.member);
    REQUIRE(res.separating.has_value());
    CHECK(res.violation > 0);
    // re-verify the certificate: valid on every vertex, violated by P
    const Scenario sc = P.scenario();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    const auto& f = *res.separating;
    for (const auto& v : verts)
        CHECK(evaluate(f, vertex_tensor(sc, v.a, v.b)) <= f.bound);
    CHECK(evaluate(f, P) > f.bound);
}

TEST_CASE("random time-ordered mixtures are members and reconstruct exactly") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::mt19937_64 rng(20240229);
    for (int i = 0; i < 100; ++i) {
        const auto P = testutil::random_toloc_mixture(sc, verts, rng);
        const auto res = member_toloc(P, false);
        REQUIRE(res.member);
        CHECK(res.model->reconstruct(sc).rat() == P.rat());
    }
}

TEST_CASE("correlator round trip is exact on random mixtures") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::mt19937_64 rng(7777);
    for (int i = 0; i < 100; ++i) {
        const auto P = testutil::random_toloc_mixture(sc, verts, rng);
        const auto back = from_correlators(to_correlators(P));
        CHECK(back.rat() == P.rat());
    }
}

TEST_CASE("post-selection preserves time-ordered locality (closure property)") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::mt19937_64 rng(555);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        const auto P = testutil::random_toloc_mixture(sc, verts, rng);
        for (int y1 = 0; y1 < 2; ++y1)
            for (int b1 = 0; b1 < 2; ++b1) {
                SequentialCorrelations Q = P;
                try {
                    Q = postselect(P, Party::B, y1, b1).correlations;
                } catch (const ZeroProbabilityEvent&) {
                    continue;
                }
                CHECK(member_toloc(Q, false).member);
                ++checked;
            }
    }
    CHECK(checked >= 100);
}

TEST_CASE("member_bell_local: vertices yes, PR construction no") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    CHECK(member_bell_local(vertex_tensor(sc, verts[17].a, verts[17].b)).member);
    CHECK(member_bell_local(vertex_tensor(sc, verts[200].a, verts[200].b)).member);
    const auto res = member_bell_local(testutil::pr_box_one_two());
    CHECK(!res.member);
    CHECK(res.separating.has_value());
}

TEST_CASE("member_postloc: mixtures yes; hidden-nonlocality box fails at (0,0)") {
    const Scenario sc = Scenario::one_two_binary();
    const auto verts = enumerate_toloc_vertices_raw(sc);
    std::mt19937_64 rng(99);
    for (int i = 0; i < 5; ++i) {
        const auto P = testutil::random_toloc_mixture(sc, verts, rng);
        CHECK(member_postloc(P, /*lp_crosscheck=*/true).member);
    }

    // first step of B uniform and uninformative; the (y1,b1) = (0,0) branch
    // carries a PR box between a and b2, other branches are uniform
    std::vector<Rational> v(sc.size(), Rational(0));
    const auto pr = testutil::pr_box_single_shot();
    for (int x = 0; x < 2; ++x)
        for (int y1 = 0; y1 < 2; ++y1)
            for (int y2 = 0; y2 < 2; ++y2)
                for (int a = 0; a < 2; ++a)
                    for (int b1 = 0; b1 < 2; ++b1)
                        for (int b2 = 0; b2 < 2; ++b2) {
                            const bool branch = (y1 == 0 && b1 == 0);
                            const Rational val =
                                branch ? pr[static_cast<std::size_t>(((x * 2 + y2) * 2 + a) * 2 +
                                                                     b2)] / 2
                                       : Rational(1, 8);
                            v[detail::ent(x, y1, y2, a, b1, b2)] = val;
                        }
    const SequentialCorrelations box(sc, std::move(v));
    REQUIRE(validate_sequential(box).ok());
    const auto res = member_postloc(box, /*lp_crosscheck=*/true);
    REQUIRE(!res.member);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->kind == PostlocWitness::Kind::branch_nonlocal);
    CHECK(res.witness->y1 == 0);
    CHECK(res.witness->b1 == 0);
}

TEST_CASE("sign-pattern locality test agrees with the 16-vertex LP on 1000 boxes") {
    const Scenario single = Scenario::single_shot(2, 2, 2, 2);
    const auto verts = enumerate_toloc_vertices_raw(single);
    std::mt19937_64 rng(123123);
    const auto pr = testutil::pr_box_single_shot();
    int nonlocal_count = 0;
    for (int i = 0; i < 1000; ++i) {
        // random local mixture contaminated with a random amount of PR box
        auto mix = testutil::random_toloc_mixture(single, verts, rng).rat();
        const Rational q(static_cast<long long>(rng() % 100), 99);
        for (std::size_t e = 0; e < 16; ++e)
            mix[e] = (1 - q) * mix[e] + q * pr[e];
        const auto fine = chsh_local_check(mix, Rational(1));
        const SequentialCorrelations box(single, mix);
        const bool lp = member_toloc(box, false).member;
        REQUIRE(fine.local == lp);
        if (!lp) ++nonlocal_count;
    }
    CHECK(nonlocal_count > 100);  // the sample covers both branches
}

TEST_CASE("maximize_over_postloc: positivity gives 0, marginal CHSH gives its local bound") {
    const auto pos = maximize_over_postloc(positivity_functional(0));
    CHECK(pos.optimum == 0);

    const auto chsh = maximize_over_postloc(chsh_marginal_functional());
    CHECK(chsh.optimum == 3);
    CHECK(validate_sequential(chsh.maximizer).ok());
    CHECK(member_postloc(chsh.maximizer).member);
}
