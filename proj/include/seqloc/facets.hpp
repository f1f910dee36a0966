#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/dd.hpp"
#include "seqloc/functionals.hpp"
#include "seqloc/json_io.hpp"

namespace seqloc {

/**
 * Generators of the group of reversible deterministic time-ordered local
 * relabelings of the (1,2) binary scenario, acting as permutations of the 64
 * tensor entries: swap of x; per-x flip of a; swap of y1; per-y1 flip of b1;
 * per-(y1,b1) swap of y2; per-(y1,b1,y2) flip of b2. Order 2^18.
 */
inline std::vector<std::array<int, 64>> relabeling_generators() {
    std::vector<std::array<int, 64>> gens;
    auto add = [&](auto&& digit_map) {
        std::array<int, 64> p{};
        for (int x = 0; x < 2; ++x)
            for (int y1 = 0; y1 < 2; ++y1)
                for (int y2 = 0; y2 < 2; ++y2)
                    for (int a = 0; a < 2; ++a)
                        for (int b1 = 0; b1 < 2; ++b1)
                            for (int b2 = 0; b2 < 2; ++b2) {
                                int X = x, Y1 = y1, Y2 = y2, A = a, B1 = b1, B2 = b2;
                                digit_map(X, Y1, Y2, A, B1, B2);
                                p[detail::ent(x, y1, y2, a, b1, b2)] =
                                    static_cast<int>(detail::ent(X, Y1, Y2, A, B1, B2));
                            }
        gens.push_back(p);
    };
    add([](int& x, int&, int&, int&, int&, int&) { x ^= 1; });
    for (int xs = 0; xs < 2; ++xs)
        add([xs](int& x, int&, int&, int& a, int&, int&) { if (x == xs) a ^= 1; });
    add([](int&, int& y1, int&, int&, int&, int&) { y1 ^= 1; });
    for (int ys = 0; ys < 2; ++ys)
        add([ys](int&, int& y1, int&, int&, int& b1, int&) { if (y1 == ys) b1 ^= 1; });
    for (int ys = 0; ys < 2; ++ys)
        for (int bs = 0; bs < 2; ++bs)
            add([ys, bs](int&, int& y1, int& y2, int&, int& b1, int&) {
                if (y1 == ys && b1 == bs) y2 ^= 1;
            });
    for (int ys = 0; ys < 2; ++ys)
        for (int bs = 0; bs < 2; ++bs)
            for (int y2s = 0; y2s < 2; ++y2s)
                add([ys, bs, y2s](int&, int& y1, int& y2, int&, int& b1, int& b2) {
                    if (y1 == ys && b1 == bs && y2 == y2s) b2 ^= 1;
                });
    return gens;
}

/** Image of a functional under an entry relabeling (bound preserved). */
inline CanonicalFunctional apply_relabeling(const CanonicalFunctional& f,
                                            const std::array<int, 64>& perm) {
    const auto prob = to_probability_basis(from_canonical(f));
    std::vector<Rational> permuted(64);
    for (int e = 0; e < 64; ++e) permuted[perm[e]] = prob.coeffs[e];
    return canonicalize(BellFunctional{Basis::probability, std::move(permuted), prob.bound});
}

struct FacetOrbit {
    std::string name;                  ///< tag or "other_<k>"
    CanonicalFunctional representative;  ///< lexicographically minimal member
    std::vector<std::size_t> members;  ///< indices into the facet list
};

struct FacetClassification {
    std::vector<FacetOrbit> orbits;
    std::vector<std::size_t> orbit_of;  ///< facet index -> orbit index
};

/**
 * Partition a relabeling-closed facet list into orbits of the group above.
 * Requires correlator-basis (canonical) facets; throws if a generator image
 * is missing from the list, which would mean the input is not closed.
 */
inline FacetClassification classify_facets(const std::vector<CanonicalFunctional>& facets) {
    const auto gens = relabeling_generators();
    std::map<std::vector<BigInt>, std::size_t> index;
    for (std::size_t i = 0; i < facets.size(); ++i) {
        if (facets[i].coeffs.size() != 33 || facets[i].coeffs[0] != 0)
            throw std::invalid_argument("classify_facets: facet not in canonical correlator form");
        index[facets[i].key()] = i;
    }
    // union-find over generator images
    std::vector<std::size_t> parent(facets.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < facets.size(); ++i)
        for (const auto& g : gens) {
            const auto img = apply_relabeling(facets[i], g);
            const auto it = index.find(img.key());
            if (it == index.end())
                throw std::logic_error(
                    "classify_facets: facet set is not closed under relabelings");
            const std::size_t a = find(i), b = find(it->second);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < facets.size(); ++i) groups[find(i)].push_back(i);

    FacetClassification out;
    out.orbit_of.assign(facets.size(), 0);
    for (auto& [root, members] : groups) {
        FacetOrbit orbit;
        orbit.members = members;
        orbit.representative = facets[members[0]];
        for (auto m : members)
            if (facets[m] < orbit.representative) orbit.representative = facets[m];
        out.orbits.push_back(std::move(orbit));
    }
    std::sort(out.orbits.begin(), out.orbits.end(),
              [](const FacetOrbit& a, const FacetOrbit& b) {
                  return a.representative < b.representative;
              });

    // name the orbits containing the known functional families
    std::map<std::vector<BigInt>, std::string> tags;
    auto tag = [&](const BellFunctional& f, const std::string& name) {
        tags[canonicalize(f).key()] = name;
    };
    tag(positivity_functional(0), "positivity");
    tag(chsh_marginal_functional(), "chsh_marginal");
    tag(chsh_lifted_functional(), "chsh_lifted");
    tag(chsh_conditioned_functional(0, 0), "chsh_conditioned");
    tag(sequential_chsh_functional(), "sequential_chsh");

    std::size_t unnamed = 0;
    for (std::size_t oi = 0; oi < out.orbits.size(); ++oi) {
        auto& orbit = out.orbits[oi];
        std::string name;
        for (auto m : orbit.members) {
            const auto it = tags.find(facets[m].key());
            if (it != tags.end()) {
                name = it->second;
                break;
            }
        }
        orbit.name = name.empty() ? "other_" + std::to_string(++unnamed) : name;
        for (auto m : orbit.members) out.orbit_of[m] = oi;
    }
    return out;
}

/** One enumerated facet with both basis renderings and its orbit tag. */
struct FacetInfo {
    CanonicalFunctional canonical;      // correlator basis, integer
    std::vector<BigInt> prob_coeffs;    // 64 integers
    BigInt prob_bound;                  // bound matching prob_coeffs
    std::string orbit;
};

struct TolocFacetData {
    std::size_t vertex_count = 0;
    std::vector<std::vector<BigInt>> vertex_corr;  // homogenized +/-1 vectors
    std::vector<FacetInfo> facets;
    FacetClassification classification;
};

namespace detail {

inline std::pair<std::vector<BigInt>, BigInt> probability_form(const CanonicalFunctional& c) {
    const auto prob = to_probability_basis(from_canonical(c));
    std::vector<Rational> all = prob.coeffs;
    all.push_back(prob.bound);
    auto ints = to_coprime_integers(all);
    BigInt bound = ints.back();
    ints.pop_back();
    return {std::move(ints), std::move(bound)};
}

}  // namespace detail

/** Directory for the facet cache: $SEQLOC_CACHE_DIR, else a per-user dir. */
inline std::filesystem::path cache_directory() {
    if (const char* env = std::getenv("SEQLOC_CACHE_DIR")) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME"))
        return std::filesystem::path(xdg) / "seqloc";
    if (const char* home = std::getenv("HOME"))
        return std::filesystem::path(home) / ".cache" / "seqloc";
    return std::filesystem::temp_directory_path() / "seqloc-cache";
}

inline Json facet_data_to_json(const TolocFacetData& data) {
    Json j;
    j["scenario"] = Scenario::one_two_binary().signature();
    j["vertex_count"] = data.vertex_count;
    Json facets = Json::array();
    for (const auto& f : data.facets) {
        Json e;
        Json cc = Json::array();
        for (const auto& z : f.canonical.coeffs) cc.push_back(z.str());
        e["coeffs_correlator"] = std::move(cc);
        e["bound"] = f.canonical.bound.str();
        Json pc = Json::array();
        for (const auto& z : f.prob_coeffs) pc.push_back(z.str());
        e["coeffs_probability"] = std::move(pc);
        e["bound_probability"] = f.prob_bound.str();
        e["orbit"] = f.orbit;
        facets.push_back(std::move(e));
    }
    j["facets"] = std::move(facets);
    Json orbits = Json::array();
    for (const auto& o : data.classification.orbits) {
        Json e;
        e["name"] = o.name;
        e["size"] = o.members.size();
        Json rep = Json::array();
        for (const auto& z : o.representative.coeffs) rep.push_back(z.str());
        e["representative"] = std::move(rep);
        e["bound"] = o.representative.bound.str();
        orbits.push_back(std::move(e));
    }
    j["orbits"] = std::move(orbits);
    return j;
}

/**
 * Facet enumeration of the 256-vertex time-ordered local polytope of the
 * (1,2) binary scenario, classified into relabeling orbits. Results are
 * cached in cache_directory() after the first computation.
 */
inline TolocFacetData toloc_facets(bool use_cache = true) {
    const Scenario sc = Scenario::one_two_binary();
    std::string key = sc.signature();
    for (auto& ch : key)
        if (ch == ':' || ch == ',') ch = '_';
    const auto cache_file = cache_directory() / ("toloc_facets_" + key + ".json");

    TolocFacetData data;
    const auto raw = enumerate_toloc_vertices_raw(sc);
    data.vertex_count = raw.size();
    data.vertex_corr.reserve(raw.size());
    for (const auto& v : raw) data.vertex_corr.push_back(vertex_correlator_vector(v.a, v.b));

    if (use_cache && std::filesystem::exists(cache_file)) {
        const Json j = load_json_file(cache_file.string());
        if (j.at("scenario").get<std::string>() == sc.signature() &&
            j.at("vertex_count").get<std::size_t>() == data.vertex_count) {
            std::vector<CanonicalFunctional> canon;
            for (const auto& e : j.at("facets")) {
                FacetInfo f;
                for (const auto& z : e.at("coeffs_correlator"))
                    f.canonical.coeffs.emplace_back(z.get<std::string>());
                f.canonical.bound = BigInt(e.at("bound").get<std::string>());
                for (const auto& z : e.at("coeffs_probability"))
                    f.prob_coeffs.emplace_back(z.get<std::string>());
                f.prob_bound = BigInt(e.at("bound_probability").get<std::string>());
                f.orbit = e.at("orbit").get<std::string>();
                canon.push_back(f.canonical);
                data.facets.push_back(std::move(f));
            }
            data.classification = classify_facets(canon);
            return data;
        }
    }

    // vertices in correlator coordinates are already integral
    std::vector<std::vector<Rational>> pts;
    pts.reserve(data.vertex_corr.size());
    for (const auto& c : data.vertex_corr) {
        std::vector<Rational> p(32);
        for (std::size_t i = 1; i < 33; ++i) p[i - 1] = Rational(c[i]);
        pts.push_back(std::move(p));
    }
    const auto fd = dd_facets(pts);
    if (!fd.equalities.empty())
        throw std::logic_error("toloc_facets: polytope unexpectedly not full-dimensional");

    std::vector<CanonicalFunctional> canon;
    canon.reserve(fd.facets.size());
    for (const auto& h : fd.facets) {
        CanonicalFunctional c;
        c.coeffs.reserve(33);
        c.coeffs.push_back(0);
        for (const auto& z : h.normal) c.coeffs.push_back(z);
        c.bound = h.offset;
        canon.push_back(std::move(c));
    }
    data.classification = classify_facets(canon);
    data.facets.reserve(canon.size());
    for (std::size_t i = 0; i < canon.size(); ++i) {
        FacetInfo f;
        f.canonical = canon[i];
        auto [pc, pb] = detail::probability_form(canon[i]);
        f.prob_coeffs = std::move(pc);
        f.prob_bound = std::move(pb);
        f.orbit = data.classification.orbits[data.classification.orbit_of[i]].name;
        data.facets.push_back(std::move(f));
    }

    if (use_cache) {
        std::error_code ec;
        std::filesystem::create_directories(cache_file.parent_path(), ec);
        const auto tmp = cache_file.string() + ".tmp";
        save_json_file(tmp, facet_data_to_json(data));
        std::filesystem::rename(tmp, cache_file, ec);
        if (ec) std::filesystem::remove(tmp, ec);
    }
    return data;
}

}  // namespace seqloc
