#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqloc/rational.hpp"

namespace seqloc {

enum class LpStatus { optimal, infeasible, unbounded };

/**
 * maximize objective.x  subject to  eq_lhs x = eq_rhs,  ub_lhs x <= ub_rhs,
 * x_i >= 0 unless free_vars[i] (then x_i is unbounded below). All data exact.
 */
struct LinearProgram {
    std::vector<Rational> objective;
    std::vector<std::vector<Rational>> eq_lhs;
    std::vector<Rational> eq_rhs;
    std::vector<std::vector<Rational>> ub_lhs;
    std::vector<Rational> ub_rhs;
    std::vector<bool> free_vars;  // empty means all variables >= 0

    std::size_t num_vars() const { return objective.size(); }

    void check() const {
        const std::size_t n = num_vars();
        if (n == 0) throw std::invalid_argument("LP with no variables");
        if (eq_lhs.size() != eq_rhs.size() || ub_lhs.size() != ub_rhs.size())
            throw std::invalid_argument("LP: lhs/rhs row counts disagree");
        for (const auto& r : eq_lhs)
            if (r.size() != n) throw std::invalid_argument("LP: equality row dimension mismatch");
        for (const auto& r : ub_lhs)
            if (r.size() != n) throw std::invalid_argument("LP: inequality row dimension mismatch");
        if (!free_vars.empty() && free_vars.size() != n)
            throw std::invalid_argument("LP: free_vars dimension mismatch");
    }
};

/**
 * Exact result with certificates that re-verify by substitution:
 *  - optimal: primal attains `optimum` and satisfies every constraint;
 *  - infeasible: the Farkas pair proves it (see verify_farkas);
 *  - unbounded: `primal` is feasible and `ray` is an improving direction.
 */
struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational optimum;
    std::vector<Rational> primal;
    std::vector<Rational> farkas_eq;  // free-signed multipliers on equality rows
    std::vector<Rational> farkas_ub;  // nonnegative multipliers on <= rows
    std::vector<Rational> ray;
};

namespace detail {

/** Dense exact simplex tableau, Bland's anti-cycling rule throughout. */
class SimplexTableau {
  public:
    // rows: [A | I_art | b] with b >= 0 (rows pre-flipped by the caller)
    SimplexTableau(std::vector<std::vector<Rational>> rows, std::size_t struct_cols)
        : m_(rows.size()), nstruct_(struct_cols), rows_(std::move(rows)) {
        ntot_ = nstruct_ + m_;
        basis_.resize(m_);
        for (std::size_t r = 0; r < m_; ++r) basis_[r] = nstruct_ + r;
    }

    std::size_t rows() const { return m_; }
    std::size_t struct_cols() const { return nstruct_; }
    const std::vector<std::size_t>& basis() const { return basis_; }
    const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
    const Rational& rhs(std::size_t r) const { return rows_[r][ntot_]; }

    /// objective row for the given per-column costs (reduced-cost form)
    std::vector<Rational> make_obj_row(const std::vector<Rational>& costs) const {
        std::vector<Rational> obj(ntot_ + 1, Rational(0));
        for (std::size_t c = 0; c < costs.size(); ++c) obj[c] = costs[c];
        for (std::size_t r = 0; r < m_; ++r) {
            const Rational f = obj[basis_[r]];
            if (f != 0)
                for (std::size_t c = 0; c <= ntot_; ++c) obj[c] -= f * rows_[r][c];
        }
        return obj;
    }

    void pivot(std::size_t pr, std::size_t pc, std::vector<std::vector<Rational>*>& obj_rows) {
        auto& prow = rows_[pr];
        const Rational piv = prow[pc];
        if (piv == 0) throw std::logic_error("simplex: zero pivot");
        if (piv != 1)
            for (auto& v : prow) v /= piv;
        for (std::size_t r = 0; r < m_; ++r) {
            if (r == pr) continue;
            const Rational f = rows_[r][pc];
            if (f == 0) continue;
            auto& row = rows_[r];
            for (std::size_t c = 0; c <= ntot_; ++c)
                if (prow[c] != 0) row[c] -= f * prow[c];
        }
        for (auto* obj : obj_rows) {
            const Rational f = (*obj)[pc];
            if (f == 0) continue;
            for (std::size_t c = 0; c <= ntot_; ++c)
                if (prow[c] != 0) (*obj)[c] -= f * prow[c];
        }
        basis_[pr] = pc;
    }

    /**
     * Run Bland's rule to optimality over columns [0, col_limit).
     * Returns false when an improving column is unbounded (ray via last_col).
     */
    bool optimize(std::vector<Rational>& obj, std::vector<std::vector<Rational>*>& extra,
                  std::size_t col_limit, std::size_t* unbounded_col = nullptr) {
        std::vector<std::vector<Rational>*> obj_rows = extra;
        obj_rows.push_back(&obj);
        for (;;) {
            std::size_t enter = col_limit;
            for (std::size_t c = 0; c < col_limit; ++c)
                if (obj[c] > 0) { enter = c; break; }  // Bland: lowest index
            if (enter == col_limit) return true;
            std::size_t leave = m_;
            Rational best;
            for (std::size_t r = 0; r < m_; ++r) {
                if (rows_[r][enter] <= 0) continue;
                Rational ratio = rows_[r][ntot_] / rows_[r][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[r] < basis_[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == m_) {
                if (unbounded_col) *unbounded_col = enter;
                return false;
            }
            pivot(leave, enter, obj_rows);
        }
    }

    /// Pivot basic artificials out; drop rows that are redundant (all-zero).
    void purge_artificials(std::vector<std::vector<Rational>*>& obj_rows) {
        for (std::size_t r = 0; r < m_;) {
            if (basis_[r] < nstruct_) { ++r; continue; }
            std::size_t c = 0;
            while (c < nstruct_ && rows_[r][c] == 0) ++c;
            if (c < nstruct_) {
                pivot(r, c, obj_rows);
                ++r;
            } else {
                rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
                --m_;
            }
        }
    }

    std::vector<Rational> basic_solution(std::size_t ncols) const {
        std::vector<Rational> x(ncols, Rational(0));
        for (std::size_t r = 0; r < m_; ++r)
            if (basis_[r] < ncols) x[basis_[r]] = rows_[r][ntot_];
        return x;
    }

  private:
    std::size_t m_, nstruct_, ntot_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> basis_;
};

}  // namespace detail

/**
 * Deterministic exact simplex (two phases, Bland's rule, lowest-index ties).
 * Identical inputs produce bit-identical results.
 */
inline LpResult solve_lp(const LinearProgram& lp) {
    lp.check();
    const std::size_t n = lp.num_vars();
    auto is_free = [&](std::size_t i) { return !lp.free_vars.empty() && lp.free_vars[i]; };

    // column layout: one column per variable, one extra (negated) column per
    // free variable, then one slack column per <= row
    std::vector<std::size_t> neg_col(n, 0);
    std::size_t ncols = n;
    for (std::size_t i = 0; i < n; ++i)
        if (is_free(i)) neg_col[i] = ncols++;
    const std::size_t slack0 = ncols;
    ncols += lp.ub_lhs.size();

    const std::size_t m = lp.eq_lhs.size() + lp.ub_lhs.size();
    std::vector<std::vector<Rational>> rows(m);
    std::vector<int> row_sign(m, 1);
    for (std::size_t r = 0; r < m; ++r) {
        const bool is_eq = r < lp.eq_lhs.size();
        const auto& src = is_eq ? lp.eq_lhs[r] : lp.ub_lhs[r - lp.eq_lhs.size()];
        const Rational& b = is_eq ? lp.eq_rhs[r] : lp.ub_rhs[r - lp.eq_lhs.size()];
        auto& row = rows[r];
        row.assign(ncols + m + 1, Rational(0));
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = src[i];
            if (is_free(i)) row[neg_col[i]] = -src[i];
        }
        if (!is_eq) row[slack0 + (r - lp.eq_lhs.size())] = 1;
        row[ncols + m] = b;
        if (b < 0) {
            row_sign[r] = -1;
            for (auto& v : row) v = -v;
        }
        row[ncols + r] = 1;  // artificial
    }

    detail::SimplexTableau tab(std::move(rows), ncols);

    // Phase I: maximize -sum(artificials)
    std::vector<Rational> phase1_costs(ncols + m, Rational(0));
    for (std::size_t r = 0; r < m; ++r) phase1_costs[ncols + r] = -1;
    std::vector<Rational> phase2_costs(ncols + m, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        phase2_costs[i] = lp.objective[i];
        if (is_free(i)) phase2_costs[neg_col[i]] = -lp.objective[i];
    }
    auto obj1 = tab.make_obj_row(phase1_costs);
    auto obj2 = tab.make_obj_row(phase2_costs);
    std::vector<std::vector<Rational>*> carry{&obj2};
    if (!tab.optimize(obj1, carry, ncols + m))
        throw std::logic_error("simplex: phase one unbounded");

    LpResult res;
    const Rational phase1_value = -obj1[ncols + m];
    if (phase1_value < 0) {
        // infeasible: dual prices of phase one give the Farkas certificate
        res.status = LpStatus::infeasible;
        res.farkas_eq.resize(lp.eq_lhs.size());
        res.farkas_ub.resize(lp.ub_lhs.size());
        for (std::size_t r = 0; r < m; ++r) {
            const Rational y = Rational(-1) - obj1[ncols + r];
            const Rational yo = y * row_sign[r];
            if (r < lp.eq_lhs.size()) res.farkas_eq[r] = yo;
            else res.farkas_ub[r - lp.eq_lhs.size()] = yo;
        }
        return res;
    }

    std::vector<std::vector<Rational>*> carry2{&obj2};
    tab.purge_artificials(carry2);

    // Phase II over structural columns only
    std::vector<std::vector<Rational>*> none;
    std::size_t bad_col = 0;
    const bool optimal = tab.optimize(obj2, none, ncols, &bad_col);

    auto to_original = [&](const std::vector<Rational>& cols) {
        std::vector<Rational> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = cols[i];
            if (is_free(i)) x[i] -= cols[neg_col[i]];
        }
        return x;
    };

    if (!optimal) {
        res.status = LpStatus::unbounded;
        std::vector<Rational> dir(ncols, Rational(0));
        dir[bad_col] = 1;
        for (std::size_t r = 0; r < tab.rows(); ++r)
            if (tab.basis()[r] < ncols) dir[tab.basis()[r]] = -tab.at(r, bad_col);
        res.primal = to_original(tab.basic_solution(ncols));
        res.ray = to_original(dir);
        return res;
    }
    res.status = LpStatus::optimal;
    res.primal = to_original(tab.basic_solution(ncols));
    res.optimum = -obj2[ncols + m];
    return res;
}

/** Check that x is feasible and attains the claimed value. */
inline bool verify_primal(const LinearProgram& lp, const std::vector<Rational>& x,
                          const Rational& value) {
    if (x.size() != lp.num_vars()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if ((lp.free_vars.empty() || !lp.free_vars[i]) && x[i] < 0) return false;
    auto dot = [&](const std::vector<Rational>& row) {
        Rational s(0);
        for (std::size_t i = 0; i < x.size(); ++i) s += row[i] * x[i];
        return s;
    };
    for (std::size_t r = 0; r < lp.eq_lhs.size(); ++r)
        if (dot(lp.eq_lhs[r]) != lp.eq_rhs[r]) return false;
    for (std::size_t r = 0; r < lp.ub_lhs.size(); ++r)
        if (dot(lp.ub_lhs[r]) > lp.ub_rhs[r]) return false;
    return dot(lp.objective) == value;
}

/** Check the Farkas pair: proves the constraint system has no solution. */
inline bool verify_farkas(const LinearProgram& lp, const std::vector<Rational>& y_eq,
                          const std::vector<Rational>& y_ub) {
    if (y_eq.size() != lp.eq_lhs.size() || y_ub.size() != lp.ub_lhs.size()) return false;
    for (const auto& y : y_ub)
        if (y < 0) return false;
    const std::size_t n = lp.num_vars();
    std::vector<Rational> d(n, Rational(0));
    Rational rhs(0);
    for (std::size_t r = 0; r < y_eq.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) d[i] += y_eq[r] * lp.eq_lhs[r][i];
        rhs += y_eq[r] * lp.eq_rhs[r];
    }
    for (std::size_t r = 0; r < y_ub.size(); ++r) {
        for (std::size_t i = 0; i < n; ++i) d[i] += y_ub[r] * lp.ub_lhs[r][i];
        rhs += y_ub[r] * lp.ub_rhs[r];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const bool fv = !lp.free_vars.empty() && lp.free_vars[i];
        if (fv ? d[i] != 0 : d[i] < 0) return false;
    }
    return rhs < 0;
}

}  // namespace seqloc
