#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ksforge/alphabet.hpp"
#include "ksforge/errors.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/rational.hpp"

namespace ksforge {

// Exact-rational constraint system over [0,1] vertex variables.
//
// Typed edges enter only through pins, as open bounds handled by case
// analysis (never epsilon rows): a Forbid11 partner of a value-1 pin gets
// x < 1, an ImpliesInterior successor gets 0 < x < 1, and one-excluded
// vertices get x < 1 unconditionally.
struct LinearSystem {
    struct Row {
        std::map<std::size_t, Rational> coeff;
        bool eq = false;
        Rational rhs;
        std::string tag;
    };
    struct StrictBound {
        std::size_t var;
        bool upper;  // true: x < 1, false: x > 0
    };

    std::vector<std::string> vars;
    std::vector<Row> rows;
    std::vector<StrictBound> stricts;

    std::size_t var_index(const std::string& label) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == label) return i;
        throw UnknownVertex("LinearSystem: unknown variable " + label);
    }

    static LinearSystem from_graph(const OrthoGraph& g,
                                   const std::map<std::string, Rational>& pins = {}) {
        LinearSystem sys;
        for (const auto& v : g.vertices) sys.vars.push_back(v.label);
        for (std::size_t i = 0; i < sys.vars.size(); ++i) {
            Row r;
            r.coeff[i] = 1;
            r.eq = false;
            r.rhs = 1;
            r.tag = "box:" + sys.vars[i];
            sys.rows.push_back(std::move(r));
        }
        for (const auto& c : g.maximal_cliques) {
            if (c.size() < 2 || c.size() == g.dim) continue;
            Row r;
            for (auto i : c) r.coeff[i] = 1;
            r.eq = false;
            r.rhs = 1;
            r.tag = "clique";
            sys.rows.push_back(std::move(r));
        }
        for (const auto& b : g.bases) {
            Row r;
            for (auto i : b) r.coeff[i] = 1;
            r.eq = true;
            r.rhs = 1;
            r.tag = "basis";
            sys.rows.push_back(std::move(r));
        }
        std::map<std::size_t, Rational> pinned;
        for (const auto& [label, val] : pins) {
            std::size_t i = g.index_of(label);
            pinned[i] = val;
            Row r;
            r.coeff[i] = 1;
            r.eq = true;
            r.rhs = val;
            r.tag = "pin:" + label;
            sys.rows.push_back(std::move(r));
        }
        for (const auto& e : g.edges) {
            if (e.kind == EdgeKind::Forbid11) {
                for (auto [a, b] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
                    auto it = pinned.find(a);
                    if (it != pinned.end() && it->second == 1)
                        sys.stricts.push_back({b, true});
                }
            } else if (e.kind == EdgeKind::ImpliesInterior) {
                auto it = pinned.find(e.u);
                if (it != pinned.end() && it->second == 1) {
                    sys.stricts.push_back({e.v, true});
                    sys.stricts.push_back({e.v, false});
                }
            }
        }
        for (auto i : g.one_excluded) sys.stricts.push_back({i, true});
        return sys;
    }
};

struct FeasibilityResult {
    bool feasible = false;
    std::map<std::string, Rational> witness;  // valid point when feasible
};

struct ExtremizeResult {
    Rational lo, hi;
    bool lo_attained = true, hi_attained = true;

    // Certified strict bounds over the valid set: x > lo when not attained.
    bool strictly_above(const Rational& v) const { return lo > v || (lo == v && !lo_attained); }
    bool strictly_below(const Rational& v) const { return hi < v || (hi == v && !hi_attained); }
};

namespace detail {

// Dense exact simplex, Bland's anti-cycling rule throughout.
class Simplex {
  public:
    // minimize c.x  s.t. rows (<= / =), x >= 0
    Simplex(const LinearSystem& sys) : n_(sys.vars.size()) {
        for (const auto& r : sys.rows) {
            rows_.push_back(r);
        }
    }

    // returns false when infeasible; on success fills point with the
    // optimal basic solution and opt with the optimal value
    bool minimize(const std::vector<Rational>& c, std::vector<Rational>& point, Rational& opt) {
        build();
        // phase 1
        std::vector<Rational> obj(cols_, Rational(0));
        for (std::size_t j : artificials_) obj[j] = 1;
        price_out(obj);
        run(obj);
        Rational phase1 = objective_value(obj);
        if (phase1 != 0) return false;
        purge_artificials();
        // phase 2
        std::vector<Rational> obj2(cols_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) obj2[j] = c[j];
        price_out(obj2);
        run(obj2, /*forbid_artificials=*/true);
        point.assign(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i)
            if (basis_[i] < n_) point[basis_[i]] = tab_[i][cols_];
        opt = objective_value(obj2);
        return true;
    }

  private:
    void build() {
        m_ = rows_.size();
        std::size_t slacks = 0;
        for (const auto& r : rows_)
            if (!r.eq) ++slacks;
        cols_ = n_ + slacks + m_;  // reserve an artificial per row (some unused)
        tab_.assign(m_, std::vector<Rational>(cols_ + 1, Rational(0)));
        basis_.assign(m_, 0);
        artificials_.clear();
        std::size_t slack_at = n_, art_at = n_ + slacks;
        for (std::size_t i = 0; i < m_; ++i) {
            for (const auto& [j, a] : rows_[i].coeff) tab_[i][j] = a;
            tab_[i][cols_] = rows_[i].rhs;
            if (tab_[i][cols_] < 0)
                for (auto& x : tab_[i]) x = -x;
            if (!rows_[i].eq) {
                // slack sign matches the (possibly negated) row
                Rational s = rows_[i].rhs < 0 ? Rational(-1) : Rational(1);
                tab_[i][slack_at] = s;
                if (s == 1) {
                    basis_[i] = slack_at;
                } else {
                    tab_[i][art_at] = 1;
                    basis_[i] = art_at;
                    artificials_.push_back(art_at);
                    ++art_at;
                }
                ++slack_at;
            } else {
                tab_[i][art_at] = 1;
                basis_[i] = art_at;
                artificials_.push_back(art_at);
                ++art_at;
            }
        }
        art_begin_ = n_ + slacks;
    }

    void price_out(std::vector<Rational>& obj) {
        // reduced costs stored implicitly: z row = obj - sum over basics
        zrow_.assign(cols_ + 1, Rational(0));
        for (std::size_t j = 0; j <= cols_; ++j) zrow_[j] = 0;
        for (std::size_t j = 0; j < cols_; ++j) zrow_[j] = obj[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (obj[basis_[i]] == 0) continue;
            Rational f = obj[basis_[i]];
            for (std::size_t j = 0; j <= cols_; ++j) zrow_[j] -= f * tab_[i][j];
        }
    }

    Rational objective_value(const std::vector<Rational>& obj) {
        Rational v(0);
        for (std::size_t i = 0; i < m_; ++i) v += obj[basis_[i]] * tab_[i][cols_];
        return v;
    }

    void run(const std::vector<Rational>& obj, bool forbid_artificials = false) {
        (void)obj;
        for (;;) {
            // Bland: entering = lowest-index column with negative reduced cost
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (forbid_artificials && j >= art_begin_) break;
                if (zrow_[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) return;  // optimal
            // ratio test; Bland tie-break on basic variable index
            std::size_t leave = m_;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (tab_[i][enter] <= 0) continue;
                Rational ratio = tab_[i][cols_] / tab_[i][enter];
                if (leave == m_ || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave == m_) throw Error("simplex: unbounded (box rows missing?)");
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        Rational inv = tab_[r][c];
        for (auto& x : tab_[r]) x /= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || tab_[i][c] == 0) continue;
            Rational f = tab_[i][c];
            for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * tab_[r][j];
        }
        if (zrow_[c] != 0) {
            Rational f = zrow_[c];
            for (std::size_t j = 0; j <= cols_; ++j) zrow_[j] -= f * tab_[r][j];
        }
        basis_[r] = c;
    }

    void purge_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < art_begin_) continue;
            std::size_t piv = cols_;
            for (std::size_t j = 0; j < art_begin_; ++j)
                if (tab_[i][j] != 0) {
                    piv = j;
                    break;
                }
            if (piv != cols_) pivot(i, piv);
            // else: redundant row, leave the artificial basic at value 0
        }
    }

    std::size_t n_, m_ = 0, cols_ = 0, art_begin_ = 0;
    std::vector<std::size_t> artificials_;
    std::vector<LinearSystem::Row> rows_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<Rational> zrow_;
    std::vector<std::size_t> basis_;
};

inline bool solve_min(const LinearSystem& sys, const std::vector<Rational>& c,
                      std::vector<Rational>& point, Rational& opt) {
    Simplex s(sys);
    return s.minimize(c, point, opt);
}

// Feasibility of the valid set (closed rows plus open strict bounds).
// A convex-combination witness satisfies every strict bound strictly as
// soon as each bound is satisfiable somewhere in the closed polytope.
inline bool strict_feasible(const LinearSystem& sys, std::vector<Rational>* witness_out) {
    std::vector<Rational> zero(sys.vars.size(), Rational(0));
    std::vector<Rational> base;
    Rational opt;
    if (!solve_min(sys, zero, base, opt)) return false;
    std::vector<std::vector<Rational>> points;
    points.push_back(base);
    for (const auto& sb : sys.stricts) {
        std::vector<Rational> c(sys.vars.size(), Rational(0));
        c[sb.var] = sb.upper ? Rational(1) : Rational(-1);
        std::vector<Rational> pt;
        Rational v;
        if (!solve_min(sys, c, pt, v)) return false;
        Rational value = sb.upper ? v : -v;
        if (sb.upper && value >= 1) return false;   // min x = 1: x < 1 empty
        if (!sb.upper && value <= 0) return false;  // max x = 0: x > 0 empty
        points.push_back(pt);
    }
    if (witness_out) {
        std::vector<Rational> avg(sys.vars.size(), Rational(0));
        Rational w(1, long(points.size()));
        for (const auto& p : points)
            for (std::size_t j = 0; j < avg.size(); ++j) avg[j] += w * p[j];
        *witness_out = std::move(avg);
    }
    return true;
}

}  // namespace detail

inline FeasibilityResult lp_feasible(const LinearSystem& sys) {
    FeasibilityResult res;
    std::vector<Rational> witness;
    if (!detail::strict_feasible(sys, &witness)) return res;
    res.feasible = true;
    for (std::size_t j = 0; j < sys.vars.size(); ++j) res.witness[sys.vars[j]] = witness[j];
    return res;
}

inline ExtremizeResult lp_extremize(const LinearSystem& sys, const std::string& var) {
    std::size_t idx = sys.var_index(var);
    if (!detail::strict_feasible(sys, nullptr))
        throw InfeasibleSystem("lp_extremize: system infeasible");
    std::vector<Rational> c(sys.vars.size(), Rational(0));
    std::vector<Rational> pt;
    ExtremizeResult out;
    c[idx] = 1;
    Rational lo;
    detail::solve_min(sys, c, pt, lo);
    c[idx] = -1;
    Rational neghi;
    detail::solve_min(sys, c, pt, neghi);
    out.lo = lo;
    out.hi = -neghi;
    auto attained = [&](const Rational& bound) {
        LinearSystem fixed = sys;
        LinearSystem::Row r;
        r.coeff[idx] = 1;
        r.eq = true;
        r.rhs = bound;
        r.tag = "extremize-face";
        fixed.rows.push_back(std::move(r));
        return detail::strict_feasible(fixed, nullptr);
    };
    out.lo_attained = attained(out.lo);
    out.hi_attained = attained(out.hi);
    return out;
}

}  // namespace ksforge
