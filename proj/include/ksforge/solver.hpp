#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ksforge/alphabet.hpp"
#include "ksforge/errors.hpp"
#include "ksforge/orthograph.hpp"

namespace ksforge {

enum class Verdict { Sat, Unsat, Timeout };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Sat: return "SAT";
        case Verdict::Unsat: return "UNSAT";
        case Verdict::Timeout: return "TIMEOUT";
    }
    return "?";
}

struct Budget {
    std::uint64_t max_nodes = 100000000;
    double max_seconds = 1800.0;
};

struct ConflictRecord {
    int depth = 0;
    std::string rule;
    std::vector<std::string> labels;
};

struct SolveStats {
    std::uint64_t nodes = 0;
    double seconds = 0.0;
};

struct SolveResult {
    Verdict verdict = Verdict::Timeout;
    std::optional<Assignment> certificate;
    SolveStats stats;
    std::vector<ConflictRecord> conflicts;  // capped log of constraint failures
    bool root_conflict = false;             // UNSAT established by propagation alone

    bool conflict_on(const std::vector<std::string>& labels) const {
        std::vector<std::string> want = labels;
        std::sort(want.begin(), want.end());
        for (const auto& c : conflicts) {
            auto got = c.labels;
            std::sort(got.begin(), got.end());
            if (got == want) return true;
        }
        return false;
    }
};

namespace detail {

struct SolverContext {
    // constraint kinds
    enum Kind : std::uint8_t { LE, EQ, F11, IMP };
    struct Constraint {
        Kind kind;
        std::vector<std::size_t> members;  // vertices (LE/EQ) or {u, v} (F11/IMP)
    };

    const OrthoGraph& g;
    std::vector<long long> numer;   // alphabet values scaled by denom
    long long denom = 1;
    std::uint8_t interior_mask = 0;
    int one_index = -1;             // index of value 1, or -1
    std::vector<Constraint> cons;
    std::vector<std::vector<std::size_t>> cons_of;  // vertex -> constraint ids
    std::vector<std::size_t> order;                 // static branching order

    explicit SolverContext(const OrthoGraph& graph, const Alphabet& alpha) : g(graph) {
        mpz_class d(1);
        for (const auto& v : alpha.values) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den_mpz_t());
        if (!d.fits_slong_p()) throw AlphabetError("alphabet denominators too large");
        denom = d.get_si();
        for (std::size_t i = 0; i < alpha.values.size(); ++i) {
            Rational scaled = alpha.values[i] * Rational(static_cast<long>(denom));
            numer.push_back(mpz_class(scaled.get_num()).get_si());
            if (alpha.values[i] > 0 && alpha.values[i] < 1) interior_mask |= std::uint8_t(1u << i);
            if (alpha.values[i] == 1) one_index = int(i);
        }
        cons_of.assign(g.vertices.size(), {});
        auto push = [&](Kind k, std::vector<std::size_t> m) {
            std::size_t id = cons.size();
            cons.push_back({k, std::move(m)});
            for (auto v : cons.back().members) cons_of[v].push_back(id);
        };
        for (const auto& c : g.maximal_cliques)
            if (c.size() >= 2) push(LE, c);
        for (const auto& b : g.bases) push(EQ, b);
        for (const auto& e : g.edges) {
            if (e.kind == EdgeKind::Forbid11) push(F11, {e.u, e.v});
            if (e.kind == EdgeKind::ImpliesInterior) push(IMP, {e.u, e.v});
        }
        order.resize(g.vertices.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::vector<std::size_t> deg(g.vertices.size());
        for (std::size_t i = 0; i < deg.size(); ++i) deg[i] = g.ortho_degree(i);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (deg[a] != deg[b]) return deg[a] > deg[b];
            return g.vertices[a].label < g.vertices[b].label;
        });
    }

    int value_count(std::uint8_t mask) const { return __builtin_popcount(mask); }
};

}  // namespace detail

// Backtracking search with per-constraint domain filtering.
//
// Deterministic reference semantics: branching follows descending Ortho
// degree with label tie-break, values are tried in descending order.
// A budget overrun reports TIMEOUT, never UNSAT.
class AssignmentSearch {
  public:
    AssignmentSearch(const OrthoGraph& g, const Alphabet& alpha)
        : g_(g), alpha_(alpha), ctx_(g, alpha) {}

    SolveResult solve(const std::map<std::string, Rational>& pins = {},
                      const Budget& budget = {}, bool find_all = false,
                      std::vector<Assignment>* all_out = nullptr) {
        start_ = std::chrono::steady_clock::now();
        budget_ = budget;
        find_all_ = find_all;
        all_out_ = all_out;
        result_ = SolveResult{};
        timed_out_ = false;

        const std::size_t n = g_.vertices.size();
        std::vector<std::uint8_t> dom(n, std::uint8_t((1u << alpha_.size()) - 1));
        for (auto v : g_.one_excluded)
            if (ctx_.one_index >= 0) dom[v] &= std::uint8_t(~(1u << ctx_.one_index));
        for (const auto& [label, val] : pins) {
            std::size_t v = g_.index_of(label);
            dom[v] = std::uint8_t(1u << alpha_.index_of(val));  // throws if outside alphabet
        }
        for (std::size_t v = 0; v < n; ++v)
            if (dom[v] == 0) {
                record_conflict(0, "pin", {g_.vertices[v].label});
                finish(Verdict::Unsat, nullptr);
                result_.root_conflict = true;
                return result_;
            }

        std::vector<std::size_t> all_cons(ctx_.cons.size());
        for (std::size_t i = 0; i < all_cons.size(); ++i) all_cons[i] = i;
        if (!propagate(dom, all_cons, 0)) {
            finish(Verdict::Unsat, nullptr);
            result_.root_conflict = true;
            return result_;
        }
        bool sat = dfs(dom, 1);
        if (timed_out_) {
            finish(Verdict::Timeout, nullptr);
        } else if (sat || (find_all_ && all_out_ && !all_out_->empty())) {
            finish(Verdict::Sat, nullptr);
        } else {
            finish(Verdict::Unsat, nullptr);
        }
        return result_;
    }

  private:
    void record_conflict(int depth, const std::string& rule, std::vector<std::string> labels) {
        if (result_.conflicts.size() < 4096)
            result_.conflicts.push_back({depth, rule, std::move(labels)});
    }

    bool out_of_budget() {
        if (result_.stats.nodes > budget_.max_nodes) return true;
        if ((result_.stats.nodes & 0x3ff) == 0) {
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (secs > budget_.max_seconds) return true;
        }
        return false;
    }

    // Generalized arc consistency by support enumeration for small sum
    // constraints, interval reasoning for larger ones.
    bool filter_sum(const detail::SolverContext::Constraint& c, std::vector<std::uint8_t>& dom,
                    int depth, bool& changed) {
        const bool eq = c.kind == detail::SolverContext::EQ;
        const std::size_t k = c.members.size();
        const long long target = ctx_.denom;
        if (k <= 6) {
            std::vector<std::uint8_t> support(k, 0);
            std::vector<int> choice(k, -1);
            // depth-first over member domains with sum bound pruning
            std::vector<long long> minrest(k + 1, 0), maxrest(k + 1, 0);
            std::vector<long long> vmin(k), vmax(k);
            for (std::size_t i = 0; i < k; ++i) {
                long long lo = LLONG_MAX, hi = LLONG_MIN;
                std::uint8_t m = dom[c.members[i]];
                for (std::size_t b = 0; b < ctx_.numer.size(); ++b)
                    if (m & (1u << b)) {
                        lo = std::min(lo, ctx_.numer[b]);
                        hi = std::max(hi, ctx_.numer[b]);
                    }
                vmin[i] = lo;
                vmax[i] = hi;
            }
            for (std::size_t i = k; i-- > 0;) {
                minrest[i] = minrest[i + 1] + vmin[i];
                maxrest[i] = maxrest[i + 1] + vmax[i];
            }
            std::function<bool(std::size_t, long long)> rec = [&](std::size_t i, long long sum) {
                if (i == k) return eq ? sum == target : sum <= target;
                std::uint8_t m = dom[c.members[i]];
                bool any = false;
                for (int b = int(ctx_.numer.size()) - 1; b >= 0; --b) {
                    if (!(m & (1u << b))) continue;
                    long long s2 = sum + ctx_.numer[b];
                    if (s2 + minrest[i + 1] > target) continue;
                    if (eq && s2 + maxrest[i + 1] < target) continue;
                    if (rec(i + 1, s2)) {
                        support[i] |= std::uint8_t(1u << b);
                        any = true;
                    }
                }
                return any;
            };
            if (!rec(0, 0)) {
                std::vector<std::string> labels;
                for (auto v : c.members) labels.push_back(g_.vertices[v].label);
                record_conflict(depth, eq ? "completeness" : "exclusivity", std::move(labels));
                return false;
            }
            for (std::size_t i = 0; i < k; ++i) {
                if (dom[c.members[i]] != support[i]) {
                    dom[c.members[i]] = support[i];
                    changed = true;
                }
            }
            return true;
        }
        // interval filtering
        long long minsum = 0, maxsum = 0;
        for (auto v : c.members) {
            long long lo = LLONG_MAX, hi = LLONG_MIN;
            for (std::size_t b = 0; b < ctx_.numer.size(); ++b)
                if (dom[v] & (1u << b)) {
                    lo = std::min(lo, ctx_.numer[b]);
                    hi = std::max(hi, ctx_.numer[b]);
                }
            minsum += lo;
            maxsum += hi;
        }
        if (minsum > target || (eq && maxsum < target)) {
            std::vector<std::string> labels;
            for (auto v : c.members) labels.push_back(g_.vertices[v].label);
            record_conflict(depth, eq ? "completeness" : "exclusivity", std::move(labels));
            return false;
        }
        for (auto v : c.members) {
            long long lo = LLONG_MAX, hi = LLONG_MIN;
            for (std::size_t b = 0; b < ctx_.numer.size(); ++b)
                if (dom[v] & (1u << b)) {
                    lo = std::min(lo, ctx_.numer[b]);
                    hi = std::max(hi, ctx_.numer[b]);
                }
            std::uint8_t keep = 0;
            for (std::size_t b = 0; b < ctx_.numer.size(); ++b) {
                if (!(dom[v] & (1u << b))) continue;
                long long others_min = minsum - lo, others_max = maxsum - hi;
                long long s_lo = others_min + ctx_.numer[b], s_hi = others_max + ctx_.numer[b];
                if (s_lo > target) continue;
                if (eq && s_hi < target) continue;
                keep |= std::uint8_t(1u << b);
            }
            if (keep != dom[v]) {
                dom[v] = keep;
                changed = true;
                if (!keep) {
                    record_conflict(depth, eq ? "completeness" : "exclusivity",
                                    {g_.vertices[v].label});
                    return false;
                }
            }
        }
        return true;
    }

    bool filter_one(std::size_t ci, std::vector<std::uint8_t>& dom, int depth, bool& changed) {
        const auto& c = ctx_.cons[ci];
        using SC = detail::SolverContext;
        if (c.kind == SC::LE || c.kind == SC::EQ) return filter_sum(c, dom, depth, changed);
        const std::size_t u = c.members[0], v = c.members[1];
        if (ctx_.one_index < 0) return true;
        const std::uint8_t one_bit = std::uint8_t(1u << ctx_.one_index);
        if (c.kind == SC::F11) {
            for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
                if (dom[a] == one_bit && (dom[b] & one_bit)) {
                    dom[b] &= std::uint8_t(~one_bit);
                    changed = true;
                    if (!dom[b]) {
                        record_conflict(depth, "forbid11",
                                        {g_.vertices[u].label, g_.vertices[v].label});
                        return false;
                    }
                }
            }
        } else {  // IMP: u = 1 forces v interior; no interior value forces u != 1
            if (dom[u] == one_bit) {
                std::uint8_t nd = dom[v] & ctx_.interior_mask;
                if (nd != dom[v]) {
                    dom[v] = nd;
                    changed = true;
                }
                if (!dom[v]) {
                    record_conflict(depth, "implies_interior",
                                    {g_.vertices[u].label, g_.vertices[v].label});
                    return false;
                }
            }
            if ((dom[v] & ctx_.interior_mask) == 0 && (dom[u] & one_bit)) {
                dom[u] &= std::uint8_t(~one_bit);
                changed = true;
                if (!dom[u]) {
                    record_conflict(depth, "implies_interior",
                                    {g_.vertices[u].label, g_.vertices[v].label});
                    return false;
                }
            }
        }
        return true;
    }

    bool propagate(std::vector<std::uint8_t>& dom, const std::vector<std::size_t>& seed, int depth) {
        std::vector<std::size_t> queue = seed;
        std::vector<char> inq(ctx_.cons.size(), 0);
        for (auto c : queue) inq[c] = 1;
        while (!queue.empty()) {
            std::size_t ci = queue.back();
            queue.pop_back();
            inq[ci] = 0;
            std::vector<std::uint8_t> before;
            before.reserve(ctx_.cons[ci].members.size());
            for (auto v : ctx_.cons[ci].members) before.push_back(dom[v]);
            bool changed = false;
            if (!filter_one(ci, dom, depth, changed)) return false;
            if (changed) {
                const auto& mem = ctx_.cons[ci].members;
                for (std::size_t i = 0; i < mem.size(); ++i) {
                    if (dom[mem[i]] != before[i]) {
                        for (auto c2 : ctx_.cons_of[mem[i]]) {
                            if (!inq[c2]) {
                                inq[c2] = 1;
                                queue.push_back(c2);
                            }
                        }
                    }
                }
            }
        }
        return true;
    }

    bool dfs(std::vector<std::uint8_t>& dom, int depth) {
        ++result_.stats.nodes;
        if (out_of_budget()) {
            timed_out_ = true;
            return false;
        }
        std::size_t pick = g_.vertices.size();
        for (auto v : ctx_.order) {
            if (ctx_.value_count(dom[v]) > 1) {
                pick = v;
                break;
            }
        }
        if (pick == g_.vertices.size()) {
            emit_solution(dom);
            return !find_all_;
        }
        for (int b = int(ctx_.numer.size()) - 1; b >= 0; --b) {
            if (!(dom[pick] & (1u << b))) continue;
            std::vector<std::uint8_t> nd = dom;
            nd[pick] = std::uint8_t(1u << b);
            if (propagate(nd, ctx_.cons_of[pick], depth)) {
                if (dfs(nd, depth + 1)) return true;
                if (timed_out_) return false;
            }
        }
        return false;
    }

    void emit_solution(const std::vector<std::uint8_t>& dom) {
        Assignment a;
        for (std::size_t v = 0; v < g_.vertices.size(); ++v) {
            int b = __builtin_ctz(dom[v]);
            a.values[g_.vertices[v].label] = alpha_.values[std::size_t(b)];
        }
        auto check = check_assignment(g_, a, alpha_);
        if (!check.ok) throw CertificationFailed("solver produced an invalid certificate");
        if (!result_.certificate) result_.certificate = a;
        if (find_all_ && all_out_) all_out_->push_back(std::move(a));
    }

    void finish(Verdict v, const Assignment*) {
        result_.verdict = v;
        result_.stats.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (v != Verdict::Sat) result_.certificate.reset();
    }

    const OrthoGraph& g_;
    const Alphabet& alpha_;
    detail::SolverContext ctx_;
    Budget budget_;
    bool find_all_ = false;
    bool timed_out_ = false;
    std::vector<Assignment>* all_out_ = nullptr;
    SolveResult result_;
    std::chrono::steady_clock::time_point start_;
};

inline SolveResult search_assignment(const OrthoGraph& g, const Alphabet& alpha,
                                     const std::map<std::string, Rational>& pins = {},
                                     const Budget& budget = {}) {
    AssignmentSearch s(g, alpha);
    return s.solve(pins, budget);
}

}  // namespace ksforge
