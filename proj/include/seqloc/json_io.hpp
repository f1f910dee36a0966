#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqloc/correlations.hpp"

namespace seqloc {

// Insertion-ordered JSON keeps serialized output byte-stable.
using Json = nlohmann::ordered_json;

inline Json scenario_to_json(const Scenario& sc) {
    return Json{{"s", sc.s()},
                {"t", sc.t()},
                {"x_cards", sc.x_cards},
                {"y_cards", sc.y_cards},
                {"a_cards", sc.a_cards},
                {"b_cards", sc.b_cards}};
}

inline Scenario scenario_from_json(const Json& j) {
    Scenario sc;
    sc.x_cards = j.at("x_cards").get<std::vector<int>>();
    sc.y_cards = j.at("y_cards").get<std::vector<int>>();
    sc.a_cards = j.at("a_cards").get<std::vector<int>>();
    sc.b_cards = j.at("b_cards").get<std::vector<int>>();
    sc.check();
    if (j.contains("s") && j.at("s").get<int>() != sc.s())
        throw std::invalid_argument("scenario: s disagrees with x_cards length");
    if (j.contains("t") && j.at("t").get<int>() != sc.t())
        throw std::invalid_argument("scenario: t disagrees with y_cards length");
    return sc;
}

inline Rational rational_from_json(const Json& v) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long long>(v.get<std::int64_t>()));
    throw std::invalid_argument("expected a rational as \"p/q\" string or integer");
}

/**
 * Serialize correlations to the interchange format:
 * { "scenario": {...}, "representation": "rational"|"float",
 *   "values": [...] }  (rationals as "p/q" strings, floats as numbers;
 * float files carry the validator tolerance).
 */
inline Json correlations_to_json(const SequentialCorrelations& P) {
    Json j;
    j["scenario"] = scenario_to_json(P.scenario());
    if (P.is_rational()) {
        j["representation"] = "rational";
        Json vals = Json::array();
        for (const auto& q : P.rat()) vals.push_back(format_rational(q));
        j["values"] = std::move(vals);
    } else {
        j["representation"] = "float";
        j["tolerance"] = P.tolerance();
        Json vals = Json::array();
        for (double v : P.flt()) vals.push_back(v);
        j["values"] = std::move(vals);
    }
    return j;
}

inline SequentialCorrelations correlations_from_json(const Json& j) {
    const Scenario sc = scenario_from_json(j.at("scenario"));
    const std::string rep = j.at("representation").get<std::string>();
    const Json& vals = j.at("values");
    if (!vals.is_array() || vals.size() != sc.size())
        throw std::invalid_argument("values: expected a flat array of " +
                                    std::to_string(sc.size()) + " entries");
    if (rep == "rational") {
        std::vector<Rational> v;
        v.reserve(vals.size());
        for (const auto& e : vals) v.push_back(rational_from_json(e));
        return SequentialCorrelations(sc, std::move(v));
    }
    if (rep == "float") {
        std::vector<double> v;
        v.reserve(vals.size());
        for (const auto& e : vals) v.push_back(e.get<double>());
        const double tol = j.contains("tolerance") ? j.at("tolerance").get<double>() : 1e-10;
        return SequentialCorrelations(sc, std::move(v), tol);
    }
    throw std::invalid_argument("representation must be \"rational\" or \"float\"");
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    Json j;
    in >> j;
    return j;
}

inline void save_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace seqloc
