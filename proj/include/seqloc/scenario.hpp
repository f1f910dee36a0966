#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqloc {

/**
 * A bipartite sequential measurement scenario: party A performs s measurement
 * steps, party B performs t steps, each step with its own setting and outcome
 * alphabet. All alphabets are encoded as 0..card-1.
 */
struct Scenario {
    std::vector<int> x_cards;  ///< setting cardinalities for A's steps (size s)
    std::vector<int> y_cards;  ///< setting cardinalities for B's steps (size t)
    std::vector<int> a_cards;  ///< outcome cardinalities for A's steps (size s)
    std::vector<int> b_cards;  ///< outcome cardinalities for B's steps (size t)

    int s() const { return static_cast<int>(x_cards.size()); }
    int t() const { return static_cast<int>(y_cards.size()); }

    void check() const {
        if (x_cards.empty() || y_cards.empty())
            throw std::invalid_argument("scenario needs at least one step per party");
        if (a_cards.size() != x_cards.size() || b_cards.size() != y_cards.size())
            throw std::invalid_argument("per-step setting/outcome lists disagree in length");
        for (const auto& v : {x_cards, y_cards, a_cards, b_cards})
            for (int c : v)
                if (c < 1) throw std::invalid_argument("cardinalities must be >= 1");
    }

    std::size_t setting_count() const {
        std::size_t n = 1;
        for (int c : x_cards) n *= c;
        for (int c : y_cards) n *= c;
        return n;
    }
    std::size_t outcome_count() const {
        std::size_t n = 1;
        for (int c : a_cards) n *= c;
        for (int c : b_cards) n *= c;
        return n;
    }
    /// Total joint-probability entry count.
    std::size_t size() const { return setting_count() * outcome_count(); }

    bool operator==(const Scenario&) const = default;

    /// e.g. "s1t2:x2:y2,2:a2:b2,2" — used as cache key.
    std::string signature() const {
        auto join = [](const std::vector<int>& v) {
            std::string r;
            for (std::size_t i = 0; i < v.size(); ++i)
                r += (i ? "," : "") + std::to_string(v[i]);
            return r;
        };
        return "s" + std::to_string(s()) + "t" + std::to_string(t()) + ":x" + join(x_cards) +
               ":y" + join(y_cards) + ":a" + join(a_cards) + ":b" + join(b_cards);
    }

    /// The scenario of the separation results: one binary measurement for A,
    /// a sequence of two binary measurements for B.
    static Scenario one_two_binary() { return Scenario{{2}, {2, 2}, {2}, {2, 2}}; }

    /// Standard single-shot bipartite scenario with the given alphabets.
    static Scenario single_shot(int nx, int ny, int na, int nb) {
        return Scenario{{nx}, {ny}, {na}, {nb}};
    }

    bool is_one_two_binary() const { return *this == one_two_binary(); }
};

/**
 * Mixed-radix flat indexing into the joint probability tensor, most
 * significant digit first, digit order [x_1..x_s, y_1..y_t, a_1..a_s, b_1..b_t].
 * Settings lead, so the outcome block of each joint setting is contiguous.
 */
class Indexer {
  public:
    explicit Indexer(const Scenario& sc) : sc_(sc) {
        cards_.insert(cards_.end(), sc.x_cards.begin(), sc.x_cards.end());
        cards_.insert(cards_.end(), sc.y_cards.begin(), sc.y_cards.end());
        cards_.insert(cards_.end(), sc.a_cards.begin(), sc.a_cards.end());
        cards_.insert(cards_.end(), sc.b_cards.begin(), sc.b_cards.end());
        strides_.assign(cards_.size(), 1);
        for (int i = static_cast<int>(cards_.size()) - 2; i >= 0; --i)
            strides_[i] = strides_[i + 1] * cards_[i + 1];
    }

    std::size_t digit_count() const { return cards_.size(); }
    const std::vector<int>& cards() const { return cards_; }

    std::size_t flatten(const std::vector<int>& digits) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < digits.size(); ++i) idx += digits[i] * strides_[i];
        return idx;
    }
    std::vector<int> digits(std::size_t flat) const {
        std::vector<int> d(cards_.size());
        for (std::size_t i = 0; i < cards_.size(); ++i) {
            d[i] = static_cast<int>(flat / strides_[i]);
            flat %= strides_[i];
        }
        return d;
    }

    // digit positions of the four groups
    std::size_t x_pos(int j) const { return j; }
    std::size_t y_pos(int j) const { return sc_.s() + j; }
    std::size_t a_pos(int j) const { return sc_.s() + sc_.t() + j; }
    std::size_t b_pos(int j) const { return 2 * sc_.s() + sc_.t() + j; }

  private:
    Scenario sc_;
    std::vector<int> cards_;
    std::vector<std::size_t> strides_;
};

/** Iterate all digit tuples over the given cardinalities in lexicographic
 *  (most-significant-first) order. Returns false when exhausted. */
inline bool next_tuple(std::vector<int>& digits, const std::vector<int>& cards) {
    for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
        if (++digits[i] < cards[i]) return true;
        digits[i] = 0;
    }
    return false;
}

}  // namespace seqloc
