#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksforge/errors.hpp"
#include "ksforge/gadgets.hpp"
#include "ksforge/geometry.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/solver.hpp"

namespace ksforge {

// Adds the cross product of every maximal orthogonal pair until each edge
// sits inside a full basis. New accidental orthogonalities trigger further
// rounds; the loop stops at a fixed point.
inline VectorSet complete_bases(const VectorSet& s, const ToleranceBundle& tol = {},
                                int max_rounds = 32) {
    if (s.dim != 3) throw DimMismatch("complete_bases: dimension 3 required");
    VectorSet out = s;
    for (int round = 0; round < max_rounds; ++round) {
        auto g = graph_from_vectors(out, tol);
        std::size_t added = 0;
        for (const auto& c : g.maximal_cliques) {
            if (c.size() != 2) continue;
            auto w = cross(*g.vertices[c[0]].vector, *g.vertices[c[1]].vector, "", tol);
            if (out.find(w) == out.size()) {
                w.label = "c" + std::to_string(out.size() + 1);
                out.add(std::move(w));
                ++added;
            }
        }
        if (added == 0) return out;
    }
    throw Error("complete_bases: no fixed point within round budget");
}

// Two-player game whose inputs are the bases of a completed ray set and
// whose winning pairs are the non-orthogonal outcome combinations (the
// support of the maximally entangled behavior).
struct NonlocalGame {
    VectorSet set;
    OrthoGraph graph;
    std::vector<std::vector<std::string>> inputs;  // X = Y: basis label lists
    ToleranceBundle tol;

    bool wins(const std::string& a, const std::string& b) const {
        const auto* va = set.by_label(a);
        const auto* vb = set.by_label(b);
        if (!va || !vb) throw UnknownVertex("game predicate: unknown outcome label");
        return overlap(*va, *vb) > tol.ortho_tol;
    }
};

inline NonlocalGame build_pt_game(const VectorSet& s, const ToleranceBundle& tol = {}) {
    NonlocalGame g;
    g.set = s;
    g.tol = tol;
    g.graph = graph_from_vectors(s, tol);
    for (const auto& c : g.graph.maximal_cliques)
        if (c.size() != 3)
            throw NotCompleted("build_pt_game: set has a maximal clique of size " +
                               std::to_string(c.size()) + "; complete bases first");
    for (const auto& b : g.graph.bases) {
        std::vector<std::string> labels;
        for (auto i : b) labels.push_back(g.graph.vertices[i].label);
        g.inputs.push_back(std::move(labels));
    }
    return g;
}

// Confirms the maximally entangled behavior wins with certainty: its mass
// sits entirely on winning tuples and each input pair normalizes to 1.
inline bool quantum_value_check(const NonlocalGame& g) {
    for (const auto& x : g.inputs) {
        for (const auto& y : g.inputs) {
            double total = 0;
            for (const auto& a : x) {
                for (const auto& b : y) {
                    double ov = overlap(*g.set.by_label(a), *g.set.by_label(b));
                    double prob = ov * ov / 3.0;
                    total += prob;
                    if (!g.wins(a, b) && prob > g.tol.ortho_tol)
                        throw PredicateLeak("quantum mass on losing tuple (" + a + "," + b + ")");
                }
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw PredicateLeak("behavior row does not normalize");
        }
    }
    return true;
}

enum class StrategyClass { Classical, PrAugmented };
enum class StrategyOutcome { Perfect, NotPerfect, NotRefuted };

struct StrategyVerdict {
    StrategyClass strategy_class;
    StrategyOutcome outcome;
    std::optional<Assignment> witness;      // coloring backing a perfect strategy
    std::optional<SolveResult> refutation;  // UNSAT search backing a refutation
    std::string note;

    bool perfect() const { return outcome == StrategyOutcome::Perfect; }
};

enum class RefuteMode { Coloring, BruteForce };

// A perfect classical strategy for these games is exactly a {0,1}-coloring:
// diagonal inputs force both players onto the same pick, picks must be
// pairwise non-orthogonal, and every basis needs one.
inline StrategyVerdict refute_classical(const NonlocalGame& g,
                                        RefuteMode mode = RefuteMode::Coloring,
                                        const Budget& budget = {}) {
    StrategyVerdict v;
    v.strategy_class = StrategyClass::Classical;
    if (mode == RefuteMode::Coloring) {
        auto alpha = Alphabet::from_values({Rational(0), Rational(1)}, 3);
        auto res = search_assignment(g.graph, alpha, {}, budget);
        if (res.verdict == Verdict::Sat) {
            v.outcome = StrategyOutcome::Perfect;
            v.witness = res.certificate;
        } else if (res.verdict == Verdict::Unsat) {
            v.outcome = StrategyOutcome::NotPerfect;
            v.refutation = res;
        } else {
            v.outcome = StrategyOutcome::NotRefuted;
            v.note = "budget exhausted";
        }
        return v;
    }
    if (g.inputs.size() > 12)
        throw TooLargeForBruteForce("refute_classical: more than 12 inputs");
    // backtracking over per-basis picks; picks must be pairwise non-orthogonal
    std::vector<std::size_t> pick(g.inputs.size(), 0);
    std::vector<std::string> chosen;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == g.inputs.size()) return true;
        for (std::size_t k = 0; k < g.inputs[i].size(); ++k) {
            const auto& cand = g.inputs[i][k];
            bool ok = true;
            for (const auto& c : chosen) {
                if (c == cand) continue;
                if (!g.wins(c, cand)) {  // orthogonal picks lose some round
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            chosen.push_back(cand);
            pick[i] = k;
            if (rec(i + 1)) return true;
            chosen.pop_back();
        }
        return false;
    };
    if (rec(0)) {
        v.outcome = StrategyOutcome::Perfect;
        Assignment a;
        for (const auto& vert : g.graph.vertices) a.values[vert.label] = Rational(0);
        for (std::size_t i = 0; i < g.inputs.size(); ++i)
            a.values[g.inputs[i][pick[i]]] = Rational(1);
        v.witness = a;
    } else {
        v.outcome = StrategyOutcome::NotPerfect;
    }
    return v;
}

// One-directional reduction: a perfect strategy with a single extremal
// no-signaling box forces a {0,1/2,1}-coloring, so an UNSAT search refutes
// it. A satisfiable search only shows the necessary condition holds; the
// verdict upgrades to Perfect when a classical perfect strategy exists.
inline StrategyVerdict refute_pr_augmented(const NonlocalGame& g, const Budget& budget = {}) {
    StrategyVerdict v;
    v.strategy_class = StrategyClass::PrAugmented;
    auto alpha = Alphabet::from_values({Rational(0), Rational(1, 2), Rational(1)}, 3);
    auto res = search_assignment(g.graph, alpha, {}, budget);
    if (res.verdict == Verdict::Unsat) {
        v.outcome = StrategyOutcome::NotPerfect;
        v.refutation = res;
        return v;
    }
    if (res.verdict == Verdict::Timeout) {
        v.outcome = StrategyOutcome::NotRefuted;
        v.note = "budget exhausted";
        return v;
    }
    auto classical = refute_classical(g, RefuteMode::Coloring, budget);
    if (classical.outcome == StrategyOutcome::Perfect) {
        v.outcome = StrategyOutcome::Perfect;
        v.witness = classical.witness;
    } else {
        v.outcome = StrategyOutcome::NotRefuted;
        v.witness = res.certificate;
        v.note = "necessary condition holds: a {0,1/2,1}-coloring exists";
    }
    return v;
}

// Conditional probability table P(a,b|x,y) keyed by basis indices and
// outcome labels. Rational tables evaluate exactly.
template <typename T>
struct Behavior {
    // table[x][y] maps (a,b) -> probability
    std::vector<std::vector<std::map<std::pair<std::string, std::string>, T>>> table;

    static Behavior uniform(const NonlocalGame& g) {
        Behavior b;
        std::size_t n = g.inputs.size();
        b.table.assign(n, std::vector<std::map<std::pair<std::string, std::string>, T>>(n));
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (const auto& a : g.inputs[x])
                    for (const auto& bb : g.inputs[y]) b.table[x][y][{a, bb}] = T(1) / T(9);
        return b;
    }
};

inline Behavior<double> quantum_behavior(const NonlocalGame& g) {
    Behavior<double> b;
    std::size_t n = g.inputs.size();
    b.table.assign(n, std::vector<std::map<std::pair<std::string, std::string>, double>>(n));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (const auto& a : g.inputs[x])
                for (const auto& bb : g.inputs[y]) {
                    double ov = overlap(*g.set.by_label(a), *g.set.by_label(bb));
                    b.table[x][y][{a, bb}] = ov * ov / 3.0;
                }
    return b;
}

// Deterministic strategy as a behavior: both players answer with their
// fixed picks.
template <typename T>
Behavior<T> strategy_behavior(const NonlocalGame& g, const std::vector<std::size_t>& picks) {
    Behavior<T> b;
    std::size_t n = g.inputs.size();
    b.table.assign(n, std::vector<std::map<std::pair<std::string, std::string>, T>>(n));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            b.table[x][y][{g.inputs[x][picks[x]], g.inputs[y][picks[y]]}] = T(1);
    return b;
}

template <typename T>
T evaluate_behavior(const NonlocalGame& g, const Behavior<T>& b, double ns_tol = 1e-9) {
    std::size_t n = g.inputs.size();
    if (b.table.size() != n) throw MalformedBehavior("behavior table shape mismatch");
    // normalization and no-signaling audit
    for (std::size_t x = 0; x < n; ++x) {
        if (b.table[x].size() != n) throw MalformedBehavior("behavior table shape mismatch");
        for (std::size_t y = 0; y < n; ++y) {
            T total(0);
            for (const auto& [ab, p] : b.table[x][y]) total += p;
            double t = [&] {
                if constexpr (std::is_same_v<T, double>) return total;
                else return rational_to_double(total);
            }();
            if (std::abs(t - 1.0) > ns_tol) throw MalformedBehavior("behavior row not normalized");
        }
    }
    auto marginal_a = [&](std::size_t x, std::size_t y, const std::string& a) {
        T m(0);
        for (const auto& [ab, p] : b.table[x][y])
            if (ab.first == a) m += p;
        return m;
    };
    for (std::size_t x = 0; x < n; ++x)
        for (const auto& a : g.inputs[x])
            for (std::size_t y1 = 0; y1 < n; ++y1)
                for (std::size_t y2 = y1 + 1; y2 < n; ++y2) {
                    T m1 = marginal_a(x, y1, a), m2 = marginal_a(x, y2, a);
                    double d = [&] {
                        if constexpr (std::is_same_v<T, double>) return m1 - m2;
                        else return rational_to_double(m1 - m2);
                    }();
                    if (std::abs(d) > ns_tol)
                        throw MalformedBehavior("behavior signals across inputs");
                }
    T omega(0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (const auto& [ab, p] : b.table[x][y])
                if (g.wins(ab.first, ab.second)) omega += p;
    return omega / (T(long(n)) * T(long(n)));
}

}  // namespace ksforge
