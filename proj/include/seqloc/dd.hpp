#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/rational.hpp"

namespace seqloc {

/// normal . x <= offset
struct HalfSpace {
    std::vector<BigInt> normal;
    BigInt offset;
    bool operator==(const HalfSpace&) const = default;
};

/// normal . x == rhs
struct Hyperplane {
    std::vector<BigInt> normal;
    BigInt rhs;
    bool operator==(const Hyperplane&) const = default;
};

struct FacetDescription {
    std::vector<HalfSpace> facets;       ///< facets within the affine hull
    std::vector<Hyperplane> equalities;  ///< basis of the affine hull
};

namespace linalg {

/** Reduce M to reduced row echelon form in place; returns the pivot columns. */
inline std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& M) {
    std::vector<std::size_t> pivots;
    if (M.empty()) return pivots;
    const std::size_t rows = M.size(), cols = M[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && M[pr][c] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(M[pr], M[r]);
        const Rational inv = M[r][c];
        for (auto& v : M[r]) v /= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            const Rational f = M[i][c];
            for (std::size_t j = 0; j < cols; ++j)
                if (M[r][j] != 0) M[i][j] -= f * M[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    M.resize(r);  // drop zero rows
    return pivots;
}

/** Exact inverse via Gauss-Jordan; throws on singular input. */
inline std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> A) {
    const std::size_t n = A.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (A[i].size() != n) throw std::invalid_argument("invert: not square");
        A[i].resize(2 * n, Rational(0));
        A[i][n + i] = 1;
    }
    auto pivots = rref(A);
    if (pivots.size() != n || A.size() != n)
        throw std::domain_error("invert: singular matrix");
    for (std::size_t i = 0; i < n; ++i)
        if (pivots[i] != i) throw std::domain_error("invert: singular matrix");
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = A[i][n + j];
    return inv;
}

}  // namespace linalg

namespace detail {

struct Bits {
    std::vector<std::uint64_t> w;
    explicit Bits(std::size_t nbits = 0) : w((nbits + 63) / 64, 0) {}
    void set(std::size_t i) { w[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    static Bits intersect(const Bits& a, const Bits& b) {
        Bits r;
        r.w.resize(a.w.size());
        for (std::size_t i = 0; i < a.w.size(); ++i) r.w[i] = a.w[i] & b.w[i];
        return r;
    }
    bool contains(const Bits& sub) const {  // sub subset of *this
        for (std::size_t i = 0; i < w.size(); ++i)
            if (sub.w[i] & ~w[i]) return false;
        return true;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(__builtin_popcountll(x));
        return c;
    }
};

struct Ray {
    std::vector<BigInt> z;
    Bits zero;
};

inline BigInt dot(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
    BigInt s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

/**
 * Double description: extreme rays of the pointed cone {z : M z >= 0}.
 * Constraints are inserted in input order after a seeding basis of the first
 * linearly independent rows; the returned set is order-independent.
 */
inline std::vector<std::vector<BigInt>> cone_rays(const std::vector<std::vector<BigInt>>& M) {
    if (M.empty()) throw std::invalid_argument("cone_rays: no constraints");
    const std::size_t n = M.size(), d = M[0].size();

    // seed: first d linearly independent rows (input order)
    std::vector<std::size_t> seed;
    {
        std::vector<std::vector<Rational>> red;
        std::vector<std::size_t> pivcol;
        for (std::size_t i = 0; i < n && seed.size() < d; ++i) {
            std::vector<Rational> v(M[i].begin(), M[i].end());
            for (std::size_t r = 0; r < red.size(); ++r) {
                if (v[pivcol[r]] == 0) continue;
                const Rational f = v[pivcol[r]] / red[r][pivcol[r]];
                for (std::size_t c = 0; c < d; ++c)
                    if (red[r][c] != 0) v[c] -= f * red[r][c];
            }
            std::size_t c = 0;
            while (c < d && v[c] == 0) ++c;
            if (c == d) continue;
            red.push_back(std::move(v));
            pivcol.push_back(c);
            seed.push_back(i);
        }
        if (seed.size() < d)
            throw std::domain_error("cone_rays: constraint matrix is rank deficient");
    }
    std::vector<bool> seeded(n, false);
    for (auto i : seed) seeded[i] = true;

    std::vector<std::vector<Rational>> B(d, std::vector<Rational>(d));
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) B[r][c] = Rational(M[seed[r]][c]);
    const auto Binv = linalg::invert(std::move(B));

    std::vector<Ray> rays;
    rays.reserve(2 * d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<Rational> col(d);
        for (std::size_t r = 0; r < d; ++r) col[r] = Binv[r][j];
        Ray ray;
        ray.z = to_coprime_integers(col);
        ray.zero = Bits(n);
        for (std::size_t r = 0; r < d; ++r)
            if (r != j) ray.zero.set(seed[r]);
        rays.push_back(std::move(ray));
    }

    std::vector<BigInt> sign;
    for (std::size_t k = 0; k < n; ++k) {
        if (seeded[k]) continue;
        sign.assign(rays.size(), BigInt(0));
        bool any_neg = false;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            sign[i] = dot(M[k], rays[i].z);
            if (sign[i] < 0) any_neg = true;
        }
        if (!any_neg) {
            for (std::size_t i = 0; i < rays.size(); ++i)
                if (sign[i] == 0) rays[i].zero.set(k);
            continue;
        }
        std::vector<std::size_t> pos, neg, zer;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (sign[i] > 0) pos.push_back(i);
            else if (sign[i] < 0) neg.push_back(i);
            else zer.push_back(i);
        }
        std::vector<Ray> created;
        for (auto p : pos) {
            for (auto q : neg) {
                Bits common = Bits::intersect(rays[p].zero, rays[q].zero);
                if (common.count() + 2 < d) continue;
                bool adjacent = true;
                for (std::size_t t = 0; t < rays.size() && adjacent; ++t) {
                    if (t == p || t == q) continue;
                    if (rays[t].zero.contains(common)) adjacent = false;
                }
                if (!adjacent) continue;
                Ray nr;
                nr.z.resize(d);
                for (std::size_t c = 0; c < d; ++c)
                    nr.z[c] = sign[p] * rays[q].z[c] - sign[q] * rays[p].z[c];
                reduce_by_gcd(nr.z);
                nr.zero = common;
                nr.zero.set(k);
                created.push_back(std::move(nr));
            }
        }
        std::vector<Ray> next;
        next.reserve(pos.size() + zer.size() + created.size());
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (sign[i] < 0) continue;
            if (sign[i] == 0) rays[i].zero.set(k);
            next.push_back(std::move(rays[i]));
        }
        for (auto& r : created) next.push_back(std::move(r));
        rays = std::move(next);
    }

    std::vector<std::vector<BigInt>> out;
    out.reserve(rays.size());
    for (auto& r : rays) out.push_back(std::move(r.z));
    return out;
}

}  // namespace detail

/**
 * Facet enumeration of conv(points). Facets are returned within the affine
 * hull (normals supported on the hull's pivot coordinates, jointly reduced
 * integers, inequality direction normal.x <= offset); the affine hull itself
 * is returned as a separate equality basis.
 */
inline FacetDescription dd_facets(const std::vector<std::vector<Rational>>& points) {
    if (points.empty()) throw std::invalid_argument("dd_facets: no points");
    const std::size_t D = points[0].size();
    for (const auto& p : points)
        if (p.size() != D) throw std::invalid_argument("dd_facets: dimension mismatch");

    // affine hull of the input
    std::vector<std::vector<Rational>> diffs;
    diffs.reserve(points.size());
    for (std::size_t i = 1; i < points.size(); ++i) {
        std::vector<Rational> d(D);
        bool nonzero = false;
        for (std::size_t c = 0; c < D; ++c) {
            d[c] = points[i][c] - points[0][c];
            nonzero = nonzero || d[c] != 0;
        }
        if (nonzero) diffs.push_back(std::move(d));
    }
    const auto pivots = linalg::rref(diffs);
    const std::size_t m = pivots.size();

    FacetDescription out;
    // null space of the difference space = equality constraints of the hull
    {
        std::vector<bool> is_pivot(D, false);
        for (auto c : pivots) is_pivot[c] = true;
        for (std::size_t f = 0; f < D; ++f) {
            if (is_pivot[f]) continue;
            std::vector<Rational> c(D + 1, Rational(0));
            c[f] = 1;
            for (std::size_t r = 0; r < m; ++r) c[pivots[r]] = -diffs[r][f];
            Rational rhs(0);
            for (std::size_t i = 0; i < D; ++i) rhs += c[i] * points[0][i];
            c[D] = rhs;
            auto z = to_coprime_integers(c);
            normalize_sign_lex(z);
            Hyperplane h;
            h.rhs = z.back();
            z.pop_back();
            h.normal = std::move(z);
            out.equalities.push_back(std::move(h));
        }
    }
    if (m == 0) return out;  // a single point has no facets

    // homogenized, integer-cleared projected points
    std::vector<std::vector<BigInt>> rows;
    rows.reserve(points.size());
    for (const auto& p : points) {
        std::vector<Rational> v(m + 1);
        v[0] = 1;
        for (std::size_t j = 0; j < m; ++j) v[j + 1] = p[pivots[j]];
        rows.push_back(to_coprime_integers(v));
    }
    const auto rays = detail::cone_rays(rows);
    out.facets.reserve(rays.size());
    for (const auto& z : rays) {
        HalfSpace h;
        h.normal.assign(D, BigInt(0));
        for (std::size_t j = 0; j < m; ++j) h.normal[pivots[j]] = -z[j + 1];
        h.offset = z[0];
        // joint gcd reduction (the inequality direction fixes the sign)
        std::vector<BigInt> all = h.normal;
        all.push_back(h.offset);
        reduce_by_gcd(all);
        h.offset = all.back();
        all.pop_back();
        h.normal = std::move(all);
        out.facets.push_back(std::move(h));
    }
    return out;
}

/**
 * Vertices of the bounded full-dimensional polytope {x : normal.x <= offset}.
 * Throws if the system admits a recession ray (unbounded or degenerate).
 */
inline std::vector<std::vector<Rational>> dd_vertices(const std::vector<HalfSpace>& facets,
                                                      std::size_t dim) {
    if (facets.empty()) throw std::invalid_argument("dd_vertices: no half-spaces");
    std::vector<std::vector<BigInt>> rows;
    rows.reserve(facets.size() + 1);
    for (const auto& f : facets) {
        if (f.normal.size() != dim) throw std::invalid_argument("dd_vertices: dimension mismatch");
        std::vector<BigInt> r(dim + 1);
        r[0] = f.offset;
        for (std::size_t c = 0; c < dim; ++c) r[c + 1] = -f.normal[c];
        rows.push_back(std::move(r));
    }
    std::vector<BigInt> pos(dim + 1, BigInt(0));
    pos[0] = 1;
    rows.push_back(std::move(pos));

    const auto rays = detail::cone_rays(rows);
    std::vector<std::vector<Rational>> verts;
    verts.reserve(rays.size());
    for (const auto& z : rays) {
        if (z[0] == 0)
            throw std::domain_error("dd_vertices: input polytope is unbounded");
        if (z[0] < 0) throw std::logic_error("dd_vertices: negative homogenizing coordinate");
        std::vector<Rational> v(dim);
        for (std::size_t c = 0; c < dim; ++c) v[c] = Rational(z[c + 1], z[0]);
        verts.push_back(std::move(v));
    }
    return verts;
}

}  // namespace seqloc
