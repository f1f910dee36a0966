#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>

#include "seqloc/lp.hpp"

using namespace seqloc;

TEST_CASE("maximise x subject to x <= 3") {
    LinearProgram lp;
    lp.objective = {Rational(1)};
    lp.ub_lhs = {{Rational(1)}};
    lp.ub_rhs = {Rational(3)};
    const auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.optimum == 3);
    CHECK(verify_primal(lp, res.primal, res.optimum));
}

TEST_CASE("x <= 1 together with x >= 2 is infeasible with a Farkas certificate") {
    LinearProgram lp;
    lp.objective = {Rational(0)};
    lp.ub_lhs = {{Rational(1)}, {Rational(-1)}};
    lp.ub_rhs = {Rational(1), Rational(-2)};
    const auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::infeasible);
    CHECK(verify_farkas(lp, res.farkas_eq, res.farkas_ub));
}

TEST_CASE("unbounded objective is detected") {
    LinearProgram lp;
    lp.objective = {Rational(1)};
    lp.ub_lhs = {{Rational(-1)}};
    lp.ub_rhs = {Rational(0)};
    const auto res = solve_lp(lp);
    CHECK(res.status == LpStatus::unbounded);
}

TEST_CASE("free variables can go negative") {
    LinearProgram lp;
    lp.objective = {Rational(-1)};
    lp.free_vars = {true};
    lp.ub_lhs = {{Rational(-1)}};  // -x <= 5  =>  x >= -5
    lp.ub_rhs = {Rational(5)};
    const auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.primal[0] == -5);
    CHECK(res.optimum == 5);
    CHECK(verify_primal(lp, res.primal, res.optimum));
}

TEST_CASE("redundant equalities do not break phase one") {
    LinearProgram lp;
    lp.objective = {Rational(1), Rational(1)};
    lp.eq_lhs = {{Rational(1), Rational(1)}, {Rational(2), Rational(2)}};
    lp.eq_rhs = {Rational(1), Rational(2)};
    const auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.optimum == 1);
}

namespace {

// local deterministic strategies of the single-shot two-input/two-output
// scenario, as 8-dimensional correlator vectors (A0 A1 B0 B1 then AxBy)
std::array<std::array<int, 8>, 16> local_vertices_corr() {
    std::array<std::array<int, 8>, 16> verts{};
    int idx = 0;
    auto pm = [](int bit) { return 1 - 2 * bit; };
    for (int fa = 0; fa < 4; ++fa)
        for (int fb = 0; fb < 4; ++fb) {
            const int a0 = pm(fa & 1), a1 = pm((fa >> 1) & 1);
            const int b0 = pm(fb & 1), b1 = pm((fb >> 1) & 1);
            verts[idx++] = {a0, a1, b0, b1, a0 * b0, a0 * b1, a1 * b0, a1 * b1};
        }
    return verts;
}

}  // namespace

TEST_CASE("CHSH over the hull of the 16 local deterministic boxes equals 2") {
    const auto verts = local_vertices_corr();
    // CHSH functional <A0B0> + <A0B1> + <A1B0> - <A1B1>
    const std::array<int, 8> chsh{0, 0, 0, 0, 1, 1, 1, -1};

    // independent oracle: brute-force maximum over the 16 vertices
    int brute = -100;
    for (const auto& v : verts) {
        int val = 0;
        for (int i = 0; i < 8; ++i) val += chsh[i] * v[i];
        brute = std::max(brute, val);
    }
    CHECK(brute == 2);

    // LP over the convex hull: max chsh.c st c = sum w_i v_i, sum w = 1, w >= 0
    LinearProgram lp;
    const std::size_t nw = verts.size();
    lp.objective.assign(nw, Rational(0));
    for (std::size_t i = 0; i < nw; ++i)
        for (int k = 0; k < 8; ++k) lp.objective[i] += Rational(chsh[k] * verts[i][k]);
    lp.eq_lhs.push_back(std::vector<Rational>(nw, Rational(1)));
    lp.eq_rhs.push_back(Rational(1));
    const auto res = solve_lp(lp);
    REQUIRE(res.status == LpStatus::optimal);
    CHECK(res.optimum == brute);
    CHECK(verify_primal(lp, res.primal, res.optimum));
}

TEST_CASE("solver determinism: identical LPs give identical certificates") {
    std::mt19937_64 rng(12345);
    for (int rep = 0; rep < 20; ++rep) {
        LinearProgram lp;
        const int n = 4, m = 6;
        lp.objective.resize(n);
        for (auto& c : lp.objective) c = Rational(static_cast<int>(rng() % 11) - 5);
        for (int r = 0; r < m; ++r) {
            std::vector<Rational> row(n);
            for (auto& v : row) v = Rational(static_cast<int>(rng() % 7) - 3);
            lp.ub_lhs.push_back(row);
            lp.ub_rhs.push_back(Rational(static_cast<int>(rng() % 5)));
        }
        const auto r1 = solve_lp(lp);
        const auto r2 = solve_lp(lp);
        CHECK(r1.status == r2.status);
        CHECK(r1.primal == r2.primal);
        CHECK(r1.optimum == r2.optimum);
        CHECK(r1.farkas_eq == r2.farkas_eq);
        CHECK(r1.farkas_ub == r2.farkas_ub);
        if (r1.status == LpStatus::optimal)
            CHECK(verify_primal(lp, r1.primal, r1.optimum));
        if (r1.status == LpStatus::infeasible)
            CHECK(verify_farkas(lp, r1.farkas_eq, r1.farkas_ub));
    }
}

TEST_CASE("dimension mismatches are rejected") {
    LinearProgram lp;
    lp.objective = {Rational(1), Rational(2)};
    lp.eq_lhs = {{Rational(1)}};
    lp.eq_rhs = {Rational(1)};
    CHECK_THROWS_AS(solve_lp(lp), std::invalid_argument);
}
