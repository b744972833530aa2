#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ksforge/alphabet.hpp"
#include "ksforge/errors.hpp"
#include "ksforge/gadgets.hpp"
#include "ksforge/geometry.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/solver.hpp"

namespace ksforge {

struct CorpusEntry {
    std::string name;
    std::size_t dim;
    VectorSet set;
    bool expect_ks_set;         // no {0,1}-coloring
    bool expect_half_colorable; // admits a {0,1/2,1}-coloring
    std::string provenance;
    std::string data_hash;
};

namespace detail {

inline VectorSet peres33_set(const ToleranceBundle& tol) {
    const double r2 = std::sqrt(2.0);
    VectorSet s;
    s.name = "peres33";
    s.tol = tol.ortho_tol;
    int k = 0;
    auto add = [&](double a, double b, double c) {
        s.add(normalize({a, b, c}, "p" + std::to_string(++k), tol));
    };
    // coordinate axes
    add(1, 0, 0);
    add(0, 1, 0);
    add(0, 0, 1);
    // in-plane diagonals
    add(0, 1, 1);
    add(0, 1, -1);
    add(1, 0, 1);
    add(1, 0, -1);
    add(1, 1, 0);
    add(1, -1, 0);
    // {0, 1, sqrt2} family: six position patterns, sign on the sqrt2 entry
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& perm : perms) {
        for (int sign : {1, -1}) {
            double v[3] = {0, 0, 0};
            v[perm[1]] = 1;
            v[perm[2]] = sign * r2;
            add(v[0], v[1], v[2]);
        }
    }
    // {1, 1, sqrt2} family: sqrt2 position and the two unit signs
    for (int pos = 0; pos < 3; ++pos) {
        for (int s1 : {1, -1}) {
            for (int s2 : {1, -1}) {
                double v[3];
                int o1 = (pos + 1) % 3, o2 = (pos + 2) % 3;
                if (o1 > o2) std::swap(o1, o2);
                v[pos] = r2;
                v[o1] = s1;
                v[o2] = s2;
                add(v[0], v[1], v[2]);
            }
        }
    }
    return s;
}

inline VectorSet cabello18_set(const ToleranceBundle& tol) {
    const int raw[18][4] = {
        {0, 0, 0, 1}, {0, 0, 1, 0}, {1, 1, 0, 0},  {1, -1, 0, 0}, {0, 1, 0, 0},  {1, 0, 1, 0},
        {1, 0, -1, 0}, {1, -1, 1, -1}, {1, -1, -1, 1}, {0, 0, 1, 1}, {1, 1, 1, 1}, {0, 1, 0, -1},
        {1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, -1, 0}, {1, 1, -1, 1}, {1, 1, 1, -1}, {-1, 1, 1, 1}};
    VectorSet s;
    s.name = "cabello18";
    s.dim = 4;
    s.tol = tol.ortho_tol;
    for (int i = 0; i < 18; ++i) {
        std::string expr = "(" + std::to_string(raw[i][0]) + "," + std::to_string(raw[i][1]) +
                           "," + std::to_string(raw[i][2]) + "," + std::to_string(raw[i][3]) + ")";
        s.add(normalize({double(raw[i][0]), double(raw[i][1]), double(raw[i][2]),
                         double(raw[i][3])},
                        "q" + std::to_string(i + 1), tol, expr));
    }
    return s;
}

}  // namespace detail

inline CorpusEntry load_corpus(const std::string& name, const ToleranceBundle& tol = {}) {
    CorpusEntry e;
    if (name == "peres33") {
        e.name = name;
        e.dim = 3;
        e.set = detail::peres33_set(tol);
        e.expect_ks_set = true;
        e.expect_half_colorable = true;
        e.provenance = "33 rays over {0,±1,±sqrt2} in dimension three";
    } else if (name == "cabello18") {
        e.name = name;
        e.dim = 4;
        e.set = detail::cabello18_set(tol);
        e.expect_ks_set = true;
        e.expect_half_colorable = true;
        e.provenance = "18 rays in dimension four, nine bases, each ray in two bases";
    } else if (name == "ks117") {
        throw UnknownEntry(
            "ks117 is not shipped: the original 117-ray set has no published coordinate list in "
            "this corpus's sources; use peres33 or cabello18");
    } else {
        throw UnknownEntry("unknown corpus entry: " + name);
    }
    e.data_hash = set_hash(e.set);
    return e;
}

struct CorpusReport {
    std::string name;
    Verdict binary_verdict;     // {0,1} search
    Verdict half_verdict;       // {0,1/2,1} search
    std::optional<Assignment> half_certificate;
    bool matches_expectations = false;
    SolveStats binary_stats, half_stats;
};

inline CorpusReport verify_corpus_entry(const CorpusEntry& e, const Budget& budget = {},
                                        const ToleranceBundle& tol = {}) {
    CorpusReport rep;
    rep.name = e.name;
    auto g = graph_from_vectors(e.set, tol);
    auto binary = Alphabet::from_values({Rational(0), Rational(1)}, int(e.dim));
    auto half = Alphabet::from_values({Rational(0), Rational(1, 2), Rational(1)}, int(e.dim));
    auto r1 = search_assignment(g, binary, {}, budget);
    auto r2 = search_assignment(g, half, {}, budget);
    rep.binary_verdict = r1.verdict;
    rep.half_verdict = r2.verdict;
    rep.binary_stats = r1.stats;
    rep.half_stats = r2.stats;
    rep.half_certificate = r2.certificate;
    bool ks_ok = (r1.verdict == Verdict::Unsat) == e.expect_ks_set;
    bool half_ok = (r2.verdict == Verdict::Sat) == e.expect_half_colorable;
    rep.matches_expectations = ks_ok && half_ok &&
                               r1.verdict != Verdict::Timeout && r2.verdict != Verdict::Timeout;
    if (!rep.matches_expectations)
        throw ExpectationMismatch("corpus entry " + e.name + " failed expected verdicts");
    return rep;
}

}  // namespace ksforge
