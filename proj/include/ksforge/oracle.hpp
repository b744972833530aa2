#pragma once

#include <cmath>
#include <vector>

#include "ksforge/alphabet.hpp"
#include "ksforge/errors.hpp"
#include "ksforge/orthograph.hpp"

namespace ksforge {

// Exhaustive enumeration of all valid assignments, checked by the direct
// evaluator. Independent of the backtracking engine: a plain odometer over
// |alphabet|^n candidates. Prefix sums only skip candidates whose partial
// clique sum already exceeds 1, which no completion can repair.
inline std::vector<Assignment> exhaustive_oracle(const OrthoGraph& g, const Alphabet& alpha,
                                                 bool prune = true) {
    const std::size_t n = g.vertices.size();
    const double space = std::pow(double(alpha.size()), double(n));
    if (space > 1e8) throw TooLarge("exhaustive_oracle: assignment space exceeds 1e8");

    std::vector<Assignment> out;
    std::vector<std::size_t> idx(n, 0);
    // sum constraints indexed by the highest member for prefix pruning
    struct Sum {
        std::vector<std::size_t> members;
        bool eq;
    };
    std::vector<Sum> sums;
    for (const auto& c : g.maximal_cliques) sums.push_back({c, false});
    for (const auto& b : g.bases) sums.push_back({b, true});
    std::vector<std::vector<std::size_t>> closing(n);  // constraints fully decided at vertex i
    std::vector<std::vector<std::size_t>> touching(n);
    for (std::size_t s = 0; s < sums.size(); ++s) {
        std::size_t hi = 0;
        for (auto v : sums[s].members) hi = std::max(hi, v);
        closing[hi].push_back(s);
        for (auto v : sums[s].members) touching[v].push_back(s);
    }
    Rational one(1);

    std::size_t level = 0;
    while (true) {
        bool ok = true;
        if (prune) {
            // after fixing idx[level], test constraints touching this vertex
            for (auto s : touching[level]) {
                Rational sum(0);
                bool complete = true;
                for (auto v : sums[s].members) {
                    if (v > level) {
                        complete = false;
                        continue;
                    }
                    sum += alpha.values[idx[v]];
                }
                if (sum > one) {
                    ok = false;
                    break;
                }
                if (complete && sums[s].eq && sum != one) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok && level + 1 < n) {
            ++level;
            idx[level] = 0;
            continue;
        }
        if (ok) {
            Assignment a;
            for (std::size_t v = 0; v < n; ++v)
                a.values[g.vertices[v].label] = alpha.values[idx[v]];
            if (prune) {
                // prefix pruning already enforced cliques/bases over full prefixes;
                // typed edges and one_excluded still need the direct evaluator
                if (check_assignment(g, a, alpha).ok) out.push_back(std::move(a));
            } else {
                if (check_assignment(g, a, alpha).ok) out.push_back(std::move(a));
            }
        }
        // advance odometer at current level
        while (true) {
            if (++idx[level] < alpha.size()) break;
            if (level == 0) return out;
            --level;
        }
    }
}

}  // namespace ksforge
