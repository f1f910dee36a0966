#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "seqloc/correlations.hpp"
#include "seqloc/correlators.hpp"
#include "seqloc/json_io.hpp"

using namespace seqloc;

TEST_CASE("indexer follows mixed-radix order, settings first") {
    const Scenario sc = Scenario::one_two_binary();
    CHECK(sc.size() == 64);
    const Indexer ix(sc);
    // [x, y1, y2, a, b1, b2], most significant first
    CHECK(ix.flatten({0, 0, 0, 0, 0, 0}) == 0);
    CHECK(ix.flatten({0, 0, 0, 0, 0, 1}) == 1);
    CHECK(ix.flatten({1, 0, 0, 0, 0, 0}) == 32);
    CHECK(ix.flatten({0, 1, 0, 1, 0, 0}) == 16 + 4);
    CHECK(ix.digits(37) == std::vector<int>{1, 0, 0, 1, 0, 1});
}

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-4") == Rational(-4));
    CHECK(format_rational(Rational(-10, 4)) == "-5/2");
    CHECK(format_rational(Rational(8, 2)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("best rational approximation") {
    CHECK(best_rational(0.5, 100) == Rational(1, 2));
    CHECK(best_rational(-0.25, 100) == Rational(-1, 4));
    const Rational pi_approx = best_rational(3.14159265358979, 1000);
    CHECK(pi_approx == Rational(355, 113));
    // perturbation never exceeds 1/denominator for bound >= 1
    const Rational r = best_rational(0.123456789, 1000000);
    CHECK(abs(r - rational_from_double(0.123456789)) < Rational(1, 1000000));
}

TEST_CASE("uniform distribution validates") {
    const auto P = SequentialCorrelations::uniform(Scenario::one_two_binary());
    CHECK(validate_sequential(P).ok());
}

TEST_CASE("signalling from y2 to b1 is flagged at B step 1") {
    // b1 == y2 deterministically, everything else uniform
    const Scenario sc = Scenario::one_two_binary();
    const Indexer ix(sc);
    std::vector<Rational> v(sc.size(), Rational(0));
    std::vector<int> d(6, 0);
    do {
        if (d[4] == d[2]) v[ix.flatten(d)] = Rational(1, 4);  // b1 == y2
    } while (next_tuple(d, ix.cards()));
    const SequentialCorrelations P(sc, v);
    const auto report = validate_sequential(P);
    CHECK(!report.ok());
    bool found = false;
    for (const auto& viol : report.violations)
        if (viol.kind == Violation::Kind::sequentiality && viol.party == 'B' && viol.step == 1)
            found = true;
    CHECK(found);
}

TEST_CASE("negative entries and broken normalization are reported distinctly") {
    const Scenario sc = Scenario::single_shot(1, 1, 2, 2);
    std::vector<Rational> v{Rational(-1, 4), Rational(1, 2), Rational(1, 2), Rational(1, 2)};
    const auto report = validate_sequential(SequentialCorrelations(sc, v));
    bool neg = false, norm = false;
    for (const auto& viol : report.violations) {
        neg = neg || viol.kind == Violation::Kind::negative_entry;
        norm = norm || viol.kind == Violation::Kind::normalization;
    }
    CHECK(neg);
    CHECK(norm);
}

TEST_CASE("postselect uniform on B's first step") {
    const auto P = SequentialCorrelations::uniform(Scenario::one_two_binary());
    const auto [Q, prob] = postselect(P, Party::B, 0, 0);
    CHECK(prob == Rational(1, 2));
    CHECK(Q.scenario() == Scenario::single_shot(2, 2, 2, 2));
    for (const auto& e : Q.rat()) CHECK(e == Rational(1, 4));
    CHECK(validate_sequential(Q).ok());
}

TEST_CASE("postselect deterministic box is identity with probability 1") {
    const Scenario sc{{2, 2}, {2}, {2, 2}, {2}};
    const auto P = SequentialCorrelations::point_mass(sc, {1, 0}, {1});
    const auto [Q, prob] = postselect(P, Party::A, 0, 1);
    CHECK(prob == Rational(1));
    const auto expect = SequentialCorrelations::point_mass(Scenario{{2}, {2}, {2}, {2}}, {0}, {1});
    CHECK(Q.rat() == expect.rat());
}

TEST_CASE("postselect rejects zero-probability events and deeper steps") {
    const Scenario sc{{2, 2}, {2}, {2, 2}, {2}};
    const auto P = SequentialCorrelations::point_mass(sc, {1, 0}, {1});
    CHECK_THROWS_AS(postselect(P, Party::A, 0, 0), ZeroProbabilityEvent);
    CHECK_THROWS_AS(postselect(P, Party::A, 0, 1, 1), std::invalid_argument);
    // B has a single step here: removing it would leave no steps
    CHECK_THROWS_AS(postselect(P, Party::B, 0, 1), std::invalid_argument);
}

TEST_CASE("product of uniforms is uniform over the combined scenario") {
    const auto U = SequentialCorrelations::uniform(Scenario::single_shot(2, 2, 2, 2));
    const auto P = product(U, U);
    CHECK(P.scenario() == Scenario({{2, 2}, {2, 2}, {2, 2}, {2, 2}}));
    for (const auto& e : P.rat()) CHECK(e == Rational(1, 16));
    CHECK(validate_sequential(P).ok());
}

TEST_CASE("product with a deterministic box is a point-mass extension") {
    const Scenario single = Scenario::single_shot(2, 2, 2, 2);
    const auto U = SequentialCorrelations::uniform(single);
    const auto D = SequentialCorrelations::point_mass(single, {1}, {0});
    const auto P = product(U, D);
    CHECK(validate_sequential(P).ok());
    const Indexer ix(P.scenario());
    std::vector<int> d(ix.digit_count(), 0);
    do {
        const Rational e = P.rat()[ix.flatten(d)];
        // digits: x1 x2 y1 y2 a1 a2 b1 b2; the second factor fixes a2=1, b2=0
        if (d[5] == 1 && d[7] == 0) CHECK(e == Rational(1, 4));
        else CHECK(e == 0);
    } while (next_tuple(d, ix.cards()));
}

TEST_CASE("product entry cap") {
    const auto U = SequentialCorrelations::uniform(Scenario::one_two_binary());
    CHECK_THROWS_AS(product(U, U, 100), std::length_error);
}

TEST_CASE("correlators of uniform vanish; deterministic all-plus gives all ones") {
    const auto U = SequentialCorrelations::uniform(Scenario::one_two_binary());
    const auto cu = to_correlators(U);
    for (const auto& c : cu.rat) CHECK(c == 0);
    const auto D =
        SequentialCorrelations::point_mass(Scenario::one_two_binary(), {0}, {0, 0});
    const auto cd = to_correlators(D);
    for (const auto& c : cd.rat) CHECK(c == 1);
}

TEST_CASE("from_correlators round-trips and validates") {
    const auto U = SequentialCorrelations::uniform(Scenario::one_two_binary());
    const auto P = from_correlators(to_correlators(U));
    CHECK(P.rat() == U.rat());

    Correlators bad;
    bad.rep = Rep::rational;
    bad.rat.assign(kCorrCount, Rational(0));
    bad.rat[corr::A(0)] = 2;  // outside [-1, 1] -> negative reconstruction
    CHECK_THROWS_AS(from_correlators(bad), std::domain_error);
}

TEST_CASE("json round trip preserves both representations") {
    const auto U = SequentialCorrelations::uniform(Scenario::one_two_binary());
    const auto j = correlations_to_json(U);
    const auto back = correlations_from_json(j);
    CHECK(back.is_rational());
    CHECK(back.rat() == U.rat());
    CHECK(j.dump() == correlations_to_json(back).dump());

    std::vector<double> f(4, 0.25);
    const SequentialCorrelations F(Scenario::single_shot(1, 1, 2, 2), f, 1e-9);
    const auto jf = correlations_to_json(F);
    const auto backf = correlations_from_json(jf);
    CHECK(!backf.is_rational());
    CHECK(backf.tolerance() == 1e-9);
    CHECK(backf.flt() == f);
}

TEST_CASE("shape mismatch is rejected at construction") {
    CHECK_THROWS_AS(SequentialCorrelations(Scenario::one_two_binary(),
                                           std::vector<Rational>(63, Rational(0))),
                    std::invalid_argument);
}
