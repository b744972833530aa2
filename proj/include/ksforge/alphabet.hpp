#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksforge/errors.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/rational.hpp"

namespace ksforge {

// Finite outcome alphabet: sorted exact rationals in [0,1] containing 0.
// The four-letter family {0, p, 1-p, 1} excludes p = 1/d.
struct Alphabet {
    std::vector<Rational> values;
    std::optional<Rational> p;

    static Alphabet O(const Rational& p, int d) {
        if (p < 0 || p > Rational(1, 2))
            throw AlphabetError("alphabet parameter must lie in [0, 1/2]: " + rational_to_string(p));
        if (d < 3) throw AlphabetError("dimension must be >= 3");
        if (p == Rational(1, d))
            throw AlphabetError("alphabet parameter 1/" + std::to_string(d) + " is excluded");
        Alphabet a;
        a.p = p;
        a.values = {Rational(0), p, Rational(1) - p, Rational(1)};
        a.sort_unique();
        return a;
    }

    // Generic constructor with the four-letter exclusion applied when the
    // value set matches {0, p, 1-p[, 1]}.
    static Alphabet from_values(std::vector<Rational> vals, int d = 3) {
        Alphabet a;
        a.values = std::move(vals);
        a.sort_unique();
        if (a.values.empty()) throw AlphabetError("empty alphabet");
        for (const auto& v : a.values)
            if (v < 0 || v > 1) throw AlphabetError("alphabet value outside [0,1]: " + rational_to_string(v));
        if (a.values.front() != 0) throw AlphabetError("alphabet must contain 0");
        auto rest = a.values;
        rest.erase(rest.begin());
        if (!rest.empty() && rest.back() == 1) rest.pop_back();
        std::optional<Rational> p;
        if (rest.empty()) {
            p = Rational(0);
        } else if (rest.size() == 1 && rest[0] + rest[0] == 1) {
            p = rest[0];
        } else if (rest.size() == 2 && rest[0] + rest[1] == 1) {
            p = rest[0];
        }
        if (p) {
            if (*p == Rational(1, d))
                throw AlphabetError("alphabet parameter 1/" + std::to_string(d) + " is excluded");
            a.p = p;
        }
        return a;
    }

    void sort_unique() {
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
    }

    bool contains(const Rational& v) const {
        return std::find(values.begin(), values.end(), v) != values.end();
    }

    std::size_t index_of(const Rational& v) const {
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] == v) return i;
        throw ValueOutsideAlphabet("value not in alphabet: " + rational_to_string(v));
    }

    bool has_one() const { return contains(Rational(1)); }

    std::size_t size() const { return values.size(); }

    std::string to_string() const {
        std::string s = "{";
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) s += ",";
            s += rational_to_string(values[i]);
        }
        return s + "}";
    }
};

// Total map vertex label -> alphabet value.
struct Assignment {
    std::map<std::string, Rational> values;

    const Rational& at(const std::string& label) const {
        auto it = values.find(label);
        if (it == values.end()) throw PartialAssignment("assignment missing vertex: " + label);
        return it->second;
    }
};

inline void to_json(nlohmann::json& j, const Assignment& a) {
    j = nlohmann::json::object();
    for (const auto& [k, v] : a.values) j[k] = rational_to_string(v);
}

inline void from_json(const nlohmann::json& j, Assignment& a) {
    a.values.clear();
    for (auto it = j.begin(); it != j.end(); ++it)
        a.values[it.key()] = rational_from_string(it.value().get<std::string>());
}

struct Violation {
    std::string rule;                 // "exclusivity", "completeness", ...
    std::vector<std::string> labels;
    std::string detail;
};

struct CheckResult {
    bool ok = true;
    std::vector<Violation> violations;
};

// Direct evaluator of the outcome rules; independent of the search engine.
inline CheckResult check_assignment(const OrthoGraph& g, const Assignment& a,
                                    const Alphabet& alpha) {
    CheckResult res;
    for (const auto& v : g.vertices) {
        const Rational& x = a.at(v.label);  // throws PartialAssignment
        if (!alpha.contains(x))
            throw ValueOutsideAlphabet("vertex " + v.label + " has value outside alphabet: " +
                                       rational_to_string(x));
    }
    auto value = [&](std::size_t i) { return a.at(g.vertices[i].label); };
    auto labels_of = [&](const std::vector<std::size_t>& c) {
        std::vector<std::string> out;
        for (auto i : c) out.push_back(g.vertices[i].label);
        return out;
    };
    for (const auto& c : g.maximal_cliques) {
        Rational sum(0);
        for (auto i : c) sum += value(i);
        if (sum > 1)
            res.violations.push_back({"exclusivity", labels_of(c),
                                      "clique sum " + rational_to_string(sum) + " > 1"});
    }
    for (const auto& b : g.bases) {
        Rational sum(0);
        for (auto i : b) sum += value(i);
        if (sum != 1)
            res.violations.push_back({"completeness", labels_of(b),
                                      "basis sum " + rational_to_string(sum) + " != 1"});
    }
    for (const auto& e : g.edges) {
        if (e.kind == EdgeKind::Forbid11) {
            if (value(e.u) == 1 && value(e.v) == 1)
                res.violations.push_back({"forbid11",
                                          {g.vertices[e.u].label, g.vertices[e.v].label},
                                          "both endpoints take value 1"});
        } else if (e.kind == EdgeKind::ImpliesInterior) {
            if (value(e.u) == 1) {
                const Rational& y = value(e.v);
                if (y <= 0 || y >= 1)
                    res.violations.push_back({"implies_interior",
                                              {g.vertices[e.u].label, g.vertices[e.v].label},
                                              "trigger is 1 but target is " + rational_to_string(y)});
            }
        }
    }
    for (auto i : g.one_excluded) {
        if (value(i) == 1)
            res.violations.push_back({"one_excluded", {g.vertices[i].label}, "vertex takes value 1"});
    }
    res.ok = res.violations.empty();
    return res;
}

}  // namespace ksforge
