#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "seqloc/rational.hpp"
#include "seqloc/scenario.hpp"

namespace seqloc {

enum class Rep : std::uint8_t { rational, floating };
enum class Party : std::uint8_t { A, B };

inline char party_char(Party p) { return p == Party::A ? 'A' : 'B'; }

struct Violation {
    enum class Kind : std::uint8_t { shape, negative_entry, normalization, sequentiality };
    Kind kind;
    std::string detail;   ///< human-readable location (digit tuples involved)
    double magnitude = 0; ///< size of the deviation (0 means structural)
    char party = ' ';     ///< 'A' or 'B' for sequentiality violations
    int step = -1;        ///< retained-prefix length; 0 = cross-party no-signalling
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/**
 * Joint conditional probabilities for a bipartite sequential measurement
 * scenario, stored flat in the mixed-radix order of Indexer. Entries are
 * either exact rationals or doubles; the representation is explicit and is
 * never coerced silently (see rationalize() in the quantum module for the
 * float -> rational bridge).
 */
class SequentialCorrelations {
  public:
    SequentialCorrelations(Scenario sc, std::vector<Rational> values)
        : scenario_(std::move(sc)), rep_(Rep::rational), rat_(std::move(values)) {
        scenario_.check();
        if (rat_.size() != scenario_.size())
            throw std::invalid_argument("value count does not match scenario");
    }
    SequentialCorrelations(Scenario sc, std::vector<double> values, double tolerance = 1e-10)
        : scenario_(std::move(sc)), rep_(Rep::floating), flt_(std::move(values)),
          tolerance_(tolerance) {
        scenario_.check();
        if (flt_.size() != scenario_.size())
            throw std::invalid_argument("value count does not match scenario");
        if (tolerance_ < 0) throw std::invalid_argument("tolerance must be nonnegative");
    }

    const Scenario& scenario() const { return scenario_; }
    Rep rep() const { return rep_; }
    bool is_rational() const { return rep_ == Rep::rational; }
    double tolerance() const { return tolerance_; }

    const std::vector<Rational>& rat() const {
        if (rep_ != Rep::rational) throw std::logic_error("not in rational representation");
        return rat_;
    }
    const std::vector<double>& flt() const {
        if (rep_ != Rep::floating) throw std::logic_error("not in floating representation");
        return flt_;
    }
    std::size_t size() const { return is_rational() ? rat_.size() : flt_.size(); }

    double entry_as_double(std::size_t i) const {
        return is_rational() ? to_double(rat_[i]) : flt_[i];
    }

    /// Uniform distribution: every outcome block is flat.
    static SequentialCorrelations uniform(const Scenario& sc) {
        const Rational p(1, static_cast<long long>(sc.outcome_count()));
        return SequentialCorrelations(sc, std::vector<Rational>(sc.size(), p));
    }

    /// Deterministic box: fixed outcome tuple regardless of settings.
    static SequentialCorrelations point_mass(const Scenario& sc, const std::vector<int>& a,
                                             const std::vector<int>& b) {
        Indexer ix(sc);
        std::vector<Rational> v(sc.size(), Rational(0));
        std::vector<int> setting(sc.s() + sc.t(), 0);
        std::vector<int> setting_cards;
        setting_cards.insert(setting_cards.end(), sc.x_cards.begin(), sc.x_cards.end());
        setting_cards.insert(setting_cards.end(), sc.y_cards.begin(), sc.y_cards.end());
        do {
            std::vector<int> digits = setting;
            digits.insert(digits.end(), a.begin(), a.end());
            digits.insert(digits.end(), b.begin(), b.end());
            v[ix.flatten(digits)] = 1;
        } while (next_tuple(setting, setting_cards));
        return SequentialCorrelations(sc, std::move(v));
    }

  private:
    Scenario scenario_;
    Rep rep_;
    std::vector<Rational> rat_;
    std::vector<double> flt_;
    double tolerance_ = 0.0;
};

namespace detail {

inline std::string tuple_str(const std::vector<int>& d) {
    std::string r = "(";
    for (std::size_t i = 0; i < d.size(); ++i) r += (i ? "," : "") + std::to_string(d[i]);
    return r + ")";
}

/**
 * Core of the sequentiality check, shared by both representations.
 * For party A and step j (0-based) the marginal over outcomes a_j..a_s must
 * not depend on settings x_j..x_s (and symmetrically for B). `get` returns
 * entry i as T, `excess` measures a deviation (max-min) and must be <= tol.
 */
template <typename T, typename Get>
void check_sequentiality(const Scenario& sc, const Get& get, double tol, bool exact,
                         ValidationReport& report) {
    const Indexer ix(sc);
    const auto& cards = ix.cards();
    const std::size_t nd = cards.size();
    for (Party party : {Party::A, Party::B}) {
        const int steps = party == Party::A ? sc.s() : sc.t();
        for (int j = 0; j < steps; ++j) {
            // digit positions summed over / required independent
            std::vector<bool> summed(nd, false), indep(nd, false);
            for (int k = j; k < steps; ++k) {
                summed[party == Party::A ? ix.a_pos(k) : ix.b_pos(k)] = true;
                indep[party == Party::A ? ix.x_pos(k) : ix.y_pos(k)] = true;
            }
            // group index = all remaining digits; cell index = the settings
            // the marginal has to be independent of
            std::size_t n_group = 1, n_cell = 1;
            for (std::size_t p = 0; p < nd; ++p) {
                if (indep[p]) n_cell *= cards[p];
                else if (!summed[p]) n_group *= cards[p];
            }
            std::vector<T> acc(n_group * n_cell, T(0));
            std::vector<int> digits(nd, 0);
            std::size_t flat = 0;
            do {
                std::size_t g = 0, c = 0;
                for (std::size_t p = 0; p < nd; ++p) {
                    if (indep[p]) c = c * cards[p] + digits[p];
                    else if (!summed[p]) g = g * cards[p] + digits[p];
                }
                acc[g * n_cell + c] += get(flat);
                ++flat;
            } while (next_tuple(digits, ix.cards()));

            for (std::size_t g = 0; g < n_group; ++g) {
                T lo = acc[g * n_cell], hi = lo;
                std::size_t lo_at = 0, hi_at = 0;
                for (std::size_t c = 1; c < n_cell; ++c) {
                    const T& v = acc[g * n_cell + c];
                    if (v < lo) { lo = v; lo_at = c; }
                    if (v > hi) { hi = v; hi_at = c; }
                }
                const T dev = hi - lo;
                const bool bad = exact ? (dev != T(0)) : (static_cast<double>(dev) > tol);
                if (bad) {
                    std::ostringstream os;
                    if (j == 0)
                        os << party_char(party) << " step 0: the other party's marginal "
                           << "depends on " << party_char(party) << "'s settings";
                    else
                        os << party_char(party) << " step " << j << ": marginal of the first "
                           << j << " outcome(s) depends on later settings";
                    os << " (group " << g << ", cells " << lo_at << " vs " << hi_at << ")";
                    report.violations.push_back(Violation{Violation::Kind::sequentiality,
                                                          os.str(), static_cast<double>(dev),
                                                          party_char(party), j});
                }
            }
        }
    }
}

template <typename T, typename Get>
void check_normalization(const Scenario& sc, const Get& get, double tol, bool exact,
                         ValidationReport& report) {
    const std::size_t block = sc.outcome_count();
    const std::size_t nsett = sc.setting_count();
    for (std::size_t s = 0; s < nsett; ++s) {
        T sum(0);
        for (std::size_t o = 0; o < block; ++o) sum += get(s * block + o);
        T dev = sum - T(1);
        if (dev < T(0)) dev = -dev;
        const bool bad = exact ? (dev != T(0)) : (static_cast<double>(dev) > tol);
        if (bad)
            report.violations.push_back(
                Violation{Violation::Kind::normalization,
                          "setting block " + std::to_string(s) + " sums to != 1",
                          static_cast<double>(dev)});
    }
}

}  // namespace detail

/**
 * Validate normalization, nonnegativity and the sequentiality (arrow-of-time
 * no-signalling) conditions. Exact in rational mode; within the stored
 * tolerance in floating mode. An empty report means the tensor is a valid
 * sequential correlation.
 */
inline ValidationReport validate_sequential(const SequentialCorrelations& P) {
    ValidationReport report;
    const Scenario& sc = P.scenario();
    if (P.size() != sc.size()) {
        report.violations.push_back(Violation{Violation::Kind::shape,
                                              "tensor size does not match scenario", 0});
        return report;
    }
    if (P.is_rational()) {
        const auto& v = P.rat();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] < 0)
                report.violations.push_back(Violation{Violation::Kind::negative_entry,
                                                      "entry " + std::to_string(i) + " < 0",
                                                      to_double(-v[i])});
        auto get = [&](std::size_t i) { return v[i]; };
        detail::check_normalization<Rational>(sc, get, 0, true, report);
        detail::check_sequentiality<Rational>(sc, get, 0, true, report);
    } else {
        const double tol = P.tolerance();
        const auto& v = P.flt();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] < -tol)
                report.violations.push_back(Violation{Violation::Kind::negative_entry,
                                                      "entry " + std::to_string(i) + " < 0",
                                                      -v[i]});
        auto get = [&](std::size_t i) { return v[i]; };
        detail::check_normalization<double>(sc, get, tol, false, report);
        detail::check_sequentiality<double>(sc, get, tol, false, report);
    }
    return report;
}

/** Thrown when post-selecting on an event of probability zero. */
struct ZeroProbabilityEvent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <typename T>
struct PostselectResultT {
    SequentialCorrelations correlations;
    T event_probability;
};

namespace detail {

template <typename T, typename Get, typename Make, typename ZeroTest>
auto postselect_impl(const SequentialCorrelations& P, Party party, int setting, int outcome,
                     const Get& get, const Make& make, const ZeroTest& is_zero) {
    const Scenario& sc = P.scenario();
    const Indexer ix(sc);
    const std::size_t spos = party == Party::A ? ix.x_pos(0) : ix.y_pos(0);
    const std::size_t opos = party == Party::A ? ix.a_pos(0) : ix.b_pos(0);
    const int scard = ix.cards()[spos], ocard = ix.cards()[opos];
    if (setting < 0 || setting >= scard || outcome < 0 || outcome >= ocard)
        throw std::invalid_argument("post-selection setting/outcome out of range");
    if ((party == Party::A && sc.s() == 1) || (party == Party::B && sc.t() == 1))
        throw std::invalid_argument("cannot post-select away a party's only step");

    // Event probability P(outcome | setting): well defined by sequentiality;
    // averaged over the free settings for robustness in floating mode.
    T mass(0);
    std::vector<int> digits(ix.digit_count(), 0);
    std::size_t flat = 0;
    do {
        if (digits[spos] == setting && digits[opos] == outcome) mass += get(flat);
        ++flat;
    } while (next_tuple(digits, ix.cards()));
    std::size_t free_settings = sc.setting_count() / scard;
    T q = mass / T(static_cast<long long>(free_settings));
    if (is_zero(q))
        throw ZeroProbabilityEvent("post-selected event (" + std::string(1, party_char(party)) +
                                   ", setting " + std::to_string(setting) + ", outcome " +
                                   std::to_string(outcome) + ") has probability zero");

    Scenario nsc = sc;
    if (party == Party::A) {
        nsc.x_cards.erase(nsc.x_cards.begin());
        nsc.a_cards.erase(nsc.a_cards.begin());
    } else {
        nsc.y_cards.erase(nsc.y_cards.begin());
        nsc.b_cards.erase(nsc.b_cards.begin());
    }
    const Indexer nix(nsc);
    std::vector<T> out(nsc.size(), T(0));
    std::vector<int> nd(nix.digit_count(), 0);
    std::size_t nflat = 0;
    do {
        // insert the fixed first setting/outcome back into the digit tuple
        std::vector<int> full;
        full.reserve(ix.digit_count());
        std::size_t k = 0;
        const int s_cnt = nsc.s(), t_cnt = nsc.t();
        auto push_group = [&](int count, bool insert_first, int value) {
            if (insert_first) full.push_back(value);
            for (int i = 0; i < count; ++i) full.push_back(nd[k++]);
        };
        push_group(s_cnt, party == Party::A, setting);
        push_group(t_cnt, party == Party::B, setting);
        push_group(s_cnt, party == Party::A, outcome);
        push_group(t_cnt, party == Party::B, outcome);
        out[nflat] = get(ix.flatten(full)) / q;
        ++nflat;
    } while (next_tuple(nd, nix.cards()));
    return make(nsc, std::move(out), q);
}

}  // namespace detail

/**
 * Condition on the first-step event (setting, outcome) of one party and
 * renormalize; returns the reduced correlations together with the event
 * probability. Only first steps can be post-selected; apply repeatedly for
 * deeper events. Throws ZeroProbabilityEvent on events of probability zero
 * (below tolerance in floating mode).
 */
inline PostselectResultT<Rational> postselect(const SequentialCorrelations& P, Party party,
                                              int setting, int outcome, int step = 0) {
    if (step != 0)
        throw std::invalid_argument(
            "post-selection is supported on the first step only; iterate for deeper events");
    if (!P.is_rational()) throw std::logic_error("postselect: rational representation required");
    const auto& v = P.rat();
    return detail::postselect_impl<Rational>(
        P, party, setting, outcome, [&](std::size_t i) { return v[i]; },
        [&](const Scenario& nsc, std::vector<Rational>&& out, const Rational& q) {
            return PostselectResultT<Rational>{SequentialCorrelations(nsc, std::move(out)), q};
        },
        [](const Rational& q) { return q == 0; });
}

inline PostselectResultT<double> postselect_float(const SequentialCorrelations& P, Party party,
                                                  int setting, int outcome, int step = 0) {
    if (step != 0)
        throw std::invalid_argument(
            "post-selection is supported on the first step only; iterate for deeper events");
    const auto& v = P.flt();
    const double tol = P.tolerance();
    return detail::postselect_impl<double>(
        P, party, setting, outcome, [&](std::size_t i) { return v[i]; },
        [&](const Scenario& nsc, std::vector<double>&& out, double q) {
            return PostselectResultT<double>{SequentialCorrelations(nsc, std::move(out),
                                                                    P.tolerance()),
                                             q};
        },
        [tol](double q) { return q <= tol; });
}

/**
 * Non-adaptive product: each party's steps are the steps of P followed by the
 * steps of Q; the joint tensor is the entrywise product. Adaptive cross-copy
 * measurement ordering is out of scope.
 */
inline SequentialCorrelations product(const SequentialCorrelations& P,
                                      const SequentialCorrelations& Q,
                                      std::size_t entry_cap = 1000000) {
    if (P.rep() != Q.rep())
        throw std::invalid_argument("product: mixed representations (rationalize first)");
    const Scenario &a = P.scenario(), &b = Q.scenario();
    Scenario sc;
    auto cat = [](std::vector<int> u, const std::vector<int>& v) {
        u.insert(u.end(), v.begin(), v.end());
        return u;
    };
    sc.x_cards = cat(a.x_cards, b.x_cards);
    sc.y_cards = cat(a.y_cards, b.y_cards);
    sc.a_cards = cat(a.a_cards, b.a_cards);
    sc.b_cards = cat(a.b_cards, b.b_cards);
    if (sc.size() > entry_cap)
        throw std::length_error("product exceeds the entry-count cap of " +
                                std::to_string(entry_cap));
    const Indexer ix(sc), ixa(a), ixb(b);
    auto split = [&](const std::vector<int>& d) {
        std::vector<int> da, db;
        std::size_t k = 0;
        auto grab = [&](int na, int nb) {
            for (int i = 0; i < na; ++i) da.push_back(d[k++]);
            for (int i = 0; i < nb; ++i) db.push_back(d[k++]);
        };
        grab(a.s(), b.s());
        grab(a.t(), b.t());
        grab(a.s(), b.s());
        grab(a.t(), b.t());
        return std::pair{ixa.flatten(da), ixb.flatten(db)};
    };
    std::vector<int> digits(ix.digit_count(), 0);
    if (P.is_rational()) {
        std::vector<Rational> out(sc.size());
        std::size_t flat = 0;
        do {
            auto [ia, ib] = split(digits);
            out[flat++] = P.rat()[ia] * Q.rat()[ib];
        } while (next_tuple(digits, ix.cards()));
        return SequentialCorrelations(sc, std::move(out));
    }
    std::vector<double> out(sc.size());
    std::size_t flat = 0;
    do {
        auto [ia, ib] = split(digits);
        out[flat++] = P.flt()[ia] * Q.flt()[ib];
    } while (next_tuple(digits, ix.cards()));
    return SequentialCorrelations(sc, std::move(out), P.tolerance() + Q.tolerance());
}

}  // namespace seqloc
