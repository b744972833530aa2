#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksforge/alphabet.hpp"
#include "ksforge/errors.hpp"
#include "ksforge/geometry.hpp"
#include "ksforge/lp.hpp"
#include "ksforge/oracle.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/solver.hpp"

namespace ksforge {

inline std::string fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct GadgetCertificate {
    std::string gadget;
    std::string property;  // FORBID11 | IMPLIES_INTERIOR | ONE_EXCLUDED |
                           // ZERO_TRIPLE_FORCED | ZERO_TRIPLE_CONTRADICTION
    std::string method;    // "lp-case-analysis" | "exhaustive" | "backtracking"
    std::string inputs_hash;
    nlohmann::json details;
};

inline void to_json(nlohmann::json& j, const GadgetCertificate& c) {
    j = {{"gadget", c.gadget},
         {"property", c.property},
         {"method", c.method},
         {"inputs_hash", c.inputs_hash},
         {"details", c.details}};
}

inline void from_json(const nlohmann::json& j, GadgetCertificate& c) {
    j.at("gadget").get_to(c.gadget);
    j.at("property").get_to(c.property);
    j.at("method").get_to(c.method);
    j.at("inputs_hash").get_to(c.inputs_hash);
    c.details = j.value("details", nlohmann::json::object());
}

struct Gadget {
    VectorSet set;
    OrthoGraph graph;
    std::map<std::string, std::string> distinguished;  // role -> vertex label
    std::vector<GadgetCertificate> certificates;
};

inline void to_json(nlohmann::json& j, const Gadget& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.graph.edges)
        if (e.kind != EdgeKind::Ortho)
            edges.push_back({{"u", g.graph.vertices[e.u].label},
                             {"v", g.graph.vertices[e.v].label},
                             {"kind", edge_kind_name(e.kind)}});
    nlohmann::json oe = nlohmann::json::array();
    for (auto i : g.graph.one_excluded) oe.push_back(g.graph.vertices[i].label);
    j = {{"set", g.set},
         {"typed_edges", edges},
         {"one_excluded", oe},
         {"distinguished", g.distinguished},
         {"certificates", g.certificates}};
}

inline void from_json(const nlohmann::json& j, Gadget& g) {
    g.set = j.at("set").get<VectorSet>();
    g.graph = graph_from_vectors(g.set);
    for (const auto& je : j.at("typed_edges"))
        add_typed_edge(g.graph, je.at("u").get<std::string>(), je.at("v").get<std::string>(),
                       edge_kind_from_name(je.at("kind").get<std::string>()));
    for (const auto& jl : j.value("one_excluded", nlohmann::json::array()))
        g.graph.one_excluded.insert(g.graph.index_of(jl.get<std::string>()));
    if (j.contains("distinguished"))
        g.distinguished = j["distinguished"].get<std::map<std::string, std::string>>();
    for (const auto& jc : j.value("certificates", nlohmann::json::array()))
        g.certificates.push_back(jc.get<GadgetCertificate>());
}

inline std::string set_hash(const VectorSet& s) {
    nlohmann::json j = s;
    return fnv1a64(j.dump());
}

// Default rational grid exercising each case branch of the finite alphabet;
// every entry avoids the excluded value 1/3.
inline std::vector<Rational> default_p_grid() {
    return {Rational(1, 10), Rational(1, 4), Rational(2, 5), Rational(1, 2)};
}

// ---------------------------------------------------------------------------
// pair-exclusion gadget: fourteen rays whose distinguished non-orthogonal
// pair can never both take value 1 in any [0,1] assignment
// ---------------------------------------------------------------------------

inline Gadget build_lip_a(const ToleranceBundle& tol = {}) {
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    struct Raw {
        const char* label;
        std::array<double, 3> c;
        const char* expr;
    };
    const std::vector<Raw> raw = {
        {"v1", {-r2, -1, 1}, "(-sqrt2,-1,1)"},
        {"v2", {r2, 1, 1}, "(sqrt2,1,1)"},
        {"v3", {0, 1, 1}, "(0,1,1)"},
        {"v4", {-2 * r2, 1, -3}, "(-2sqrt2,1,-3)"},
        {"v5", {0, -1, 1}, "(0,-1,1)"},
        {"v6", {2 * r2, -1, -3}, "(2sqrt2,-1,-3)"},
        {"v7", {1, 0, 0}, "(1,0,0)"},
        {"v8", {1, 2 * r2, 0}, "(1,2sqrt2,0)"},
        {"v9", {0, r3, -1}, "(0,sqrt3,-1)"},
        {"v10", {-2 * r2, 1, r3}, "(-2sqrt2,1,sqrt3)"},
        {"v11", {0, r3, 1}, "(0,sqrt3,1)"},
        {"v12", {2 * r2, -1, r3}, "(2sqrt2,-1,sqrt3)"},
        {"v13", {r2, 1, r3}, "(sqrt2,1,sqrt3)"},
        {"v14", {-r2, -1, r3}, "(-sqrt2,-1,sqrt3)"},
    };
    Gadget g;
    g.set.name = "lip-a";
    g.set.tol = tol.ortho_tol;
    for (const auto& r : raw)
        g.set.add(normalize({r.c[0], r.c[1], r.c[2]}, r.label, tol, r.expr));
    if (g.set.size() != 14) throw CertificationFailed("lip-a: ray collapse");
    g.graph = graph_from_vectors(g.set, tol);
    g.distinguished = {{"v1", "v1"}, {"v2", "v2"}};

    auto sys11 = LinearSystem::from_graph(g.graph, {{"v1", Rational(1)}, {"v2", Rational(1)}});
    if (lp_feasible(sys11).feasible)
        throw CertificationFailed("lip-a: joint value-1 pins unexpectedly feasible");
    auto sys1 = LinearSystem::from_graph(g.graph, {{"v1", Rational(1)}});
    auto f1 = lp_feasible(sys1);
    auto sys2 = LinearSystem::from_graph(g.graph, {{"v2", Rational(1)}});
    auto f2 = lp_feasible(sys2);
    if (!f1.feasible || !f2.feasible)
        throw CertificationFailed("lip-a: single pin unexpectedly infeasible");

    GadgetCertificate cert;
    cert.gadget = "lip-a";
    cert.property = "FORBID11";
    cert.method = "lp-case-analysis";
    cert.inputs_hash = set_hash(g.set);
    cert.details = {{"pair", {"v1", "v2"}},
                    {"overlap", overlap(*g.set.by_label("v1"), *g.set.by_label("v2"))},
                    {"joint_pin_feasible", false},
                    {"single_pin_feasible", true}};
    g.certificates.push_back(std::move(cert));
    return g;
}

// ---------------------------------------------------------------------------
// gadget synthesis: numerical embedding of the fourteen-vertex template with
// prescribed endpoints, certified post hoc by the exact LP
// ---------------------------------------------------------------------------

struct SynthesisOptions {
    int restarts = 60;
    int max_iterations = 300;
    std::uint64_t seed = 1;
    double residual_tol = 1e-9;
};

namespace detail {

// Gauss-Newton with adaptive damping on the template embedding problem.
// Unknowns: rays 3..14 (endpoints fixed); residuals: unit norms and the
// template's orthogonality list.
inline bool refine_embedding(const std::vector<std::array<double, 3>>& fixed,
                             std::vector<double>& x,
                             const std::vector<std::pair<int, int>>& edges,
                             int max_iter, double tol) {
    const int nfree = 12;
    auto vec = [&](int i, const std::vector<double>& xs) -> std::array<double, 3> {
        if (i < 2) return fixed[i];
        int k = (i - 2) * 3;
        return {xs[k], xs[k + 1], xs[k + 2]};
    };
    auto residuals = [&](const std::vector<double>& xs, std::vector<double>& r) {
        r.clear();
        for (int i = 2; i < 14; ++i) {
            auto v = vec(i, xs);
            r.push_back(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0);
        }
        for (auto [a, b] : edges) {
            auto u = vec(a, xs), v = vec(b, xs);
            r.push_back(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]);
        }
    };
    const int nvar = nfree * 3;
    std::vector<double> r, rtry, xtry(x.size());
    residuals(x, r);
    const int nres = int(r.size());
    double lambda = 1e-3;
    for (int iter = 0; iter < max_iter; ++iter) {
        double worst = 0;
        for (double ri : r) worst = std::max(worst, std::abs(ri));
        if (worst < tol) return true;
        // Jacobian
        std::vector<double> J(std::size_t(nres) * nvar, 0.0);
        int row = 0;
        for (int i = 2; i < 14; ++i, ++row) {
            auto v = vec(i, x);
            int k = (i - 2) * 3;
            for (int d = 0; d < 3; ++d) J[std::size_t(row) * nvar + k + d] = 2 * v[d];
        }
        for (auto [a, b] : edges) {
            auto u = vec(a, x), v = vec(b, x);
            if (a >= 2) {
                int k = (a - 2) * 3;
                for (int d = 0; d < 3; ++d) J[std::size_t(row) * nvar + k + d] = v[d];
            }
            if (b >= 2) {
                int k = (b - 2) * 3;
                for (int d = 0; d < 3; ++d) J[std::size_t(row) * nvar + k + d] += u[d];
            }
            ++row;
        }
        // normal equations with damping
        std::vector<double> A(std::size_t(nvar) * nvar, 0.0), g(nvar, 0.0);
        for (int rr = 0; rr < nres; ++rr) {
            for (int i = 0; i < nvar; ++i) {
                double ji = J[std::size_t(rr) * nvar + i];
                if (ji == 0) continue;
                g[i] += ji * r[rr];
                for (int j = i; j < nvar; ++j)
                    A[std::size_t(i) * nvar + j] += ji * J[std::size_t(rr) * nvar + j];
            }
        }
        for (int i = 0; i < nvar; ++i)
            for (int j = 0; j < i; ++j) A[std::size_t(i) * nvar + j] = A[std::size_t(j) * nvar + i];
        bool improved = false;
        for (int attempt = 0; attempt < 8 && !improved; ++attempt) {
            std::vector<double> M = A, rhs(nvar);
            for (int i = 0; i < nvar; ++i) {
                M[std::size_t(i) * nvar + i] += lambda;
                rhs[i] = -g[i];
            }
            // gaussian elimination with partial pivoting
            std::vector<int> piv(nvar);
            for (int i = 0; i < nvar; ++i) piv[i] = i;
            bool singular = false;
            for (int c = 0; c < nvar && !singular; ++c) {
                int best = c;
                for (int rr2 = c + 1; rr2 < nvar; ++rr2)
                    if (std::abs(M[std::size_t(rr2) * nvar + c]) >
                        std::abs(M[std::size_t(best) * nvar + c]))
                        best = rr2;
                if (std::abs(M[std::size_t(best) * nvar + c]) < 1e-14) {
                    singular = true;
                    break;
                }
                if (best != c) {
                    for (int j = 0; j < nvar; ++j)
                        std::swap(M[std::size_t(c) * nvar + j], M[std::size_t(best) * nvar + j]);
                    std::swap(rhs[c], rhs[best]);
                }
                for (int rr2 = c + 1; rr2 < nvar; ++rr2) {
                    double f = M[std::size_t(rr2) * nvar + c] / M[std::size_t(c) * nvar + c];
                    if (f == 0) continue;
                    for (int j = c; j < nvar; ++j)
                        M[std::size_t(rr2) * nvar + j] -= f * M[std::size_t(c) * nvar + j];
                    rhs[rr2] -= f * rhs[c];
                }
            }
            if (singular) {
                lambda *= 10;
                continue;
            }
            std::vector<double> delta(nvar);
            for (int i = nvar - 1; i >= 0; --i) {
                double s = rhs[i];
                for (int j = i + 1; j < nvar; ++j) s -= M[std::size_t(i) * nvar + j] * delta[j];
                delta[i] = s / M[std::size_t(i) * nvar + i];
            }
            for (std::size_t i = 0; i < x.size(); ++i) xtry[i] = x[i] + delta[i];
            residuals(xtry, rtry);
            double n0 = 0, n1 = 0;
            for (double ri : r) n0 += ri * ri;
            for (double ri : rtry) n1 += ri * ri;
            if (n1 < n0) {
                x = xtry;
                r = rtry;
                lambda = std::max(lambda * 0.3, 1e-12);
                improved = true;
            } else {
                lambda *= 10;
            }
        }
        if (!improved) return false;
    }
    double worst = 0;
    for (double ri : r) worst = std::max(worst, std::abs(ri));
    return worst < tol;
}

inline const std::vector<std::pair<int, int>>& template_edges() {
    // orthogonality pattern of the fourteen-ray pair-exclusion gadget
    static const std::vector<std::pair<int, int>> edges = {
        {0, 2},  {0, 3},  {1, 4},  {1, 5},  {2, 4},   {2, 6},   {3, 5},
        {3, 7},  {4, 6},  {5, 7},  {6, 8},  {6, 10},  {7, 9},   {7, 11},
        {8, 9},  {8, 12}, {9, 12}, {10, 11}, {10, 13}, {11, 13}, {12, 13}};
    return edges;
}

}  // namespace detail

// Best-effort embedding of the fourteen-vertex template graph with the given
// endpoints. Success requires sub-tolerance residuals, fourteen distinct
// rays reproducing the template graph, and an exact-LP proof that the joint
// value-1 pin is infeasible.
inline Gadget synthesize_forbid11(const UnitVector& a, const UnitVector& b,
                                  const SynthesisOptions& opts = {},
                                  const ToleranceBundle& tol = {}) {
    double t = overlap(a, b);
    if (t <= tol.norm_tol || t >= 1 - tol.norm_tol)
        throw Error("synthesize_forbid11: endpoints must be distinct and non-orthogonal");
    const auto& edges = detail::template_edges();
    std::vector<std::array<double, 3>> fixed = {{a[0], a[1], a[2]}, {b[0], b[1], b[2]}};

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    auto lipa = build_lip_a(tol);

    for (int start = 0; start < opts.restarts; ++start) {
        std::vector<double> x(36);
        if (start == 0 && std::abs(t - 0.5) < 1e-9) {
            // align the published coordinates with the requested endpoints
            auto frame = [&](const UnitVector& p, const UnitVector& q) {
                std::array<std::array<double, 3>, 3> F;
                F[0] = {p[0], p[1], p[2]};
                double d = dot(p, q);
                std::array<double, 3> r{q[0] - d * p[0], q[1] - d * p[1], q[2] - d * p[2]};
                double nr = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
                for (auto& c : r) c /= nr;
                F[1] = r;
                F[2] = {F[0][1] * F[1][2] - F[0][2] * F[1][1],
                        F[0][2] * F[1][0] - F[0][0] * F[1][2],
                        F[0][0] * F[1][1] - F[0][1] * F[1][0]};
                return F;
            };
            const auto& pv1 = *lipa.set.by_label("v1");
            auto pv2 = *lipa.set.by_label("v2");
            if (dot(pv1, pv2) * dot(a, b) < 0)
                for (auto& c : pv2.components) c = -c;
            auto F1 = frame(pv1, pv2), F2 = frame(a, b);
            // rotation R = F2^T applied after F1 projection: w -> F2 * (F1 . w)
            for (int i = 2; i < 14; ++i) {
                const auto& w = lipa.set.vectors[std::size_t(i)];
                std::array<double, 3> coeff{}, out{};
                for (int k = 0; k < 3; ++k)
                    coeff[k] = F1[k][0] * w[0] + F1[k][1] * w[1] + F1[k][2] * w[2];
                for (int d = 0; d < 3; ++d)
                    out[d] = F2[0][d] * coeff[0] + F2[1][d] * coeff[1] + F2[2][d] * coeff[2];
                for (int d = 0; d < 3; ++d) x[std::size_t(i - 2) * 3 + d] = out[d];
            }
        } else {
            for (auto& c : x) c = N(rng);
        }
        if (!detail::refine_embedding(fixed, x, edges, opts.max_iterations, opts.residual_tol))
            continue;
        VectorSet s;
        s.name = "forbid11-synth";
        s.tol = tol.ortho_tol;
        try {
            s.add(normalize({a[0], a[1], a[2]}, "v1", tol));
            s.add(normalize({b[0], b[1], b[2]}, "v2", tol));
            for (int i = 2; i < 14; ++i)
                s.add(normalize({x[std::size_t(i - 2) * 3], x[std::size_t(i - 2) * 3 + 1],
                                 x[std::size_t(i - 2) * 3 + 2]},
                                "v" + std::to_string(i + 1), tol));
        } catch (const Error&) {
            continue;
        }
        if (s.size() != 14) continue;  // rays collapsed
        auto g = graph_from_vectors(s, tol);
        // embedding must reproduce the template graph exactly
        std::size_t ortho = 0;
        for (const auto& e : g.edges)
            if (e.kind == EdgeKind::Ortho) ++ortho;
        if (ortho != edges.size()) continue;
        auto sys = LinearSystem::from_graph(g, {{"v1", Rational(1)}, {"v2", Rational(1)}});
        if (lp_feasible(sys).feasible)
            throw CertificationFailed("synthesize_forbid11: embedding found but LP feasible");
        Gadget out;
        out.set = std::move(s);
        out.graph = std::move(g);
        out.distinguished = {{"v1", "v1"}, {"v2", "v2"}};
        GadgetCertificate cert;
        cert.gadget = "forbid11-synth";
        cert.property = "FORBID11";
        cert.method = "lp-case-analysis";
        cert.inputs_hash = set_hash(out.set);
        cert.details = {{"target_overlap", t}, {"restarts_used", start + 1}};
        out.certificates.push_back(std::move(cert));
        return out;
    }
    throw SynthesisFailed("synthesize_forbid11: no embedding within restart budget (overlap " +
                          std::to_string(t) + ")");
}

// ---------------------------------------------------------------------------
// interior-forcing gadget: value 1 on the trigger forces the target strictly
// between 0 and 1
// ---------------------------------------------------------------------------

inline Gadget build_lip_b(const ToleranceBundle& tol = {}) {
    const double r2 = std::sqrt(2.0);
    Gadget g = build_lip_a(tol);
    g.set.name = "lip-b";
    g.set.add(normalize({-1, r2, 0}, "v15", tol, "(-1,sqrt2,0)"));
    g.set.add(normalize({r2, 1, -3}, "v16", tol, "(sqrt2,1,-3)"));
    g.graph = graph_from_vectors(g.set, tol);
    g.distinguished = {{"v1", "v1"}, {"v2", "v2"}, {"v15", "v15"}, {"v16", "v16"}};
    g.certificates.clear();

    // the (v1,v2) pair exclusion is embedded concretely; the (v1,v16) pair
    // (overlap sqrt(3)/2) has no known fourteen-ray embedding, so it rides
    // as a typed edge
    add_typed_edge(g.graph, "v1", "v2", EdgeKind::Forbid11);
    add_typed_edge(g.graph, "v1", "v16", EdgeKind::Forbid11);

    auto sys = LinearSystem::from_graph(g.graph, {{"v1", Rational(1)}});
    auto ext = lp_extremize(sys, "v2");
    if (!ext.strictly_above(Rational(0)) || !ext.strictly_below(Rational(1)))
        throw CertificationFailed("lip-b: interior property not certified");

    GadgetCertificate cert;
    cert.gadget = "lip-b";
    cert.property = "IMPLIES_INTERIOR";
    cert.method = "lp-case-analysis";
    cert.inputs_hash = set_hash(g.set);
    cert.details = {{"pair", {"v1", "v2"}},
                    {"lo", rational_to_string(ext.lo)},
                    {"lo_attained", ext.lo_attained},
                    {"hi", rational_to_string(ext.hi)},
                    {"hi_attained", ext.hi_attained}};
    g.certificates.push_back(std::move(cert));
    add_typed_edge(g.graph, "v1", "v2", EdgeKind::ImpliesInterior);
    return g;
}

// ---------------------------------------------------------------------------
// one-exclusion gadget: six core rays plus interior-forcing edges; value 1
// on the anchor is impossible for every alphabet on the grid
// ---------------------------------------------------------------------------

inline Gadget build_s1(const UnitVector& anchor, const ToleranceBundle& tol = {},
                       const std::vector<Rational>& p_grid = default_p_grid()) {
    if (anchor.dim() != 3) throw DimMismatch("build_s1: dimension 3 required");
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0), r6 = std::sqrt(6.0);
    struct Raw {
        const char* label;
        std::array<double, 3> c;
        const char* expr;
    };
    const std::vector<Raw> raw = {
        {"v1", {1, 0, 0}, "(1,0,0)"},
        {"v2", {0, 0, 1}, "(0,0,1)"},
        {"v3", {1 / r2, 1 / r2, 0}, "(1,1,0)/sqrt2"},
        {"v4", {-1 / r2, 1 / r2, 0}, "(-1,1,0)/sqrt2"},
        {"v5", {1 / r6, 1 / r6, 2 / r6}, "(1,1,2)/sqrt6"},
        {"v6", {1 / r3, 1 / r3, -1 / r3}, "(1,1,-1)/sqrt3"},
    };
    // orthogonal map sending e1 to the anchor (deterministic completion)
    std::array<std::array<double, 3>, 3> R;
    R[0] = {anchor[0], anchor[1], anchor[2]};
    {
        std::array<double, 3> h = std::abs(anchor[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                            : std::array<double, 3>{0, 1, 0};
        double d = h[0] * R[0][0] + h[1] * R[0][1] + h[2] * R[0][2];
        std::array<double, 3> b{h[0] - d * R[0][0], h[1] - d * R[0][1], h[2] - d * R[0][2]};
        double nb = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        for (auto& c : b) c /= nb;
        R[1] = b;
        R[2] = {R[0][1] * R[1][2] - R[0][2] * R[1][1], R[0][2] * R[1][0] - R[0][0] * R[1][2],
                R[0][0] * R[1][1] - R[0][1] * R[1][0]};
    }
    Gadget g;
    g.set.name = "s1";
    g.set.tol = tol.ortho_tol;
    for (const auto& r : raw) {
        std::vector<double> v(3);
        for (int d = 0; d < 3; ++d)
            v[std::size_t(d)] = R[0][d] * r.c[0] + R[1][d] * r.c[1] + R[2][d] * r.c[2];
        g.set.add(normalize(std::move(v), r.label, tol, r.expr));
    }
    if (g.set.size() != 6) throw CertificationFailed("s1: ray collapse");
    g.graph = graph_from_vectors(g.set, tol);
    g.distinguished = {{"anchor", "v1"}};
    for (const char* target : {"v3", "v5", "v6"})
        add_typed_edge(g.graph, "v1", target, EdgeKind::ImpliesInterior);

    GadgetCertificate cert;
    cert.gadget = "s1";
    cert.property = "ONE_EXCLUDED";
    cert.method = "backtracking";
    cert.inputs_hash = set_hash(g.set);
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& p : p_grid) {
        auto alpha = Alphabet::O(p, 3);
        auto res = search_assignment(g.graph, alpha, {{"v1", Rational(1)}});
        if (res.verdict != Verdict::Unsat)
            throw CertificationFailed("s1: anchor pin should be UNSAT for p=" +
                                      rational_to_string(p));
        runs.push_back({{"p", rational_to_string(p)},
                        {"verdict", verdict_name(res.verdict)},
                        {"nodes", res.stats.nodes},
                        {"root_conflict", res.root_conflict}});
    }
    cert.details = {{"anchor", "v1"}, {"runs", runs}};
    g.certificates.push_back(std::move(cert));
    g.graph.one_excluded.insert(g.graph.index_of("v1"));
    return g;
}

inline Gadget build_s1(const ToleranceBundle& tol = {}) {
    return build_s1(normalize({1, 0, 0}, "e1", tol), tol);
}

// ---------------------------------------------------------------------------
// zero-triple-forcing gadget: nine rays in three interlocking bases plus a
// column; every assignment without value 1 zeroes one of twelve triples
// ---------------------------------------------------------------------------

inline const std::vector<std::array<const char*, 3>>& s2_zero_triples() {
    static const std::vector<std::array<const char*, 3>> triples = {
        {"u1", "u5", "u8"}, {"u1", "u5", "u9"}, {"u1", "u6", "u8"}, {"u1", "u6", "u9"},
        {"u4", "u2", "u9"}, {"u4", "u2", "u8"}, {"u4", "u3", "u9"}, {"u4", "u3", "u8"},
        {"u7", "u2", "u6"}, {"u7", "u2", "u5"}, {"u7", "u3", "u6"}, {"u7", "u3", "u5"}};
    return triples;
}

inline Gadget build_s2(double theta = M_PI / 3, const ToleranceBundle& tol = {}) {
    if (theta <= 0 || theta >= M_PI / 2) throw Error("build_s2: theta must lie in (0, pi/2)");
    const double c = std::cos(theta), s = std::sin(theta);
    Gadget g;
    g.set.name = "s2";
    g.set.tol = tol.ortho_tol;
    g.set.add(normalize({1, 0, 0}, "u1", tol, "(1,0,0)"));
    g.set.add(normalize({0, c, s}, "u2", tol, "(0,cos,sin)"));
    g.set.add(normalize({0, -s, c}, "u3", tol, "(0,-sin,cos)"));
    g.set.add(normalize({0, 1, 0}, "u4", tol, "(0,1,0)"));
    g.set.add(normalize({c, 0, s}, "u5", tol, "(cos,0,sin)"));
    g.set.add(normalize({-s, 0, c}, "u6", tol, "(-sin,0,cos)"));
    g.set.add(normalize({0, 0, 1}, "u7", tol, "(0,0,1)"));
    g.set.add(normalize({c, s, 0}, "u8", tol, "(cos,sin,0)"));
    g.set.add(normalize({-s, c, 0}, "u9", tol, "(-sin,cos,0)"));
    g.graph = graph_from_vectors(g.set, tol);
    if (g.graph.bases.size() != 4)
        throw CertificationFailed("s2: expected exactly four bases");
    return g;
}

// Exhaustive confirmation that every valid assignment over {0, p, 1-p}
// zeroes one of the twelve triples; returns the number of valid assignments.
inline std::size_t certify_s2_triples(Gadget& g, const Rational& p) {
    auto alpha = Alphabet::from_values({Rational(0), p, Rational(1) - p}, 3);
    auto all = exhaustive_oracle(g.graph, alpha);
    for (const auto& a : all) {
        bool hit = false;
        for (const auto& t : s2_zero_triples()) {
            if (a.at(t[0]) == 0 && a.at(t[1]) == 0 && a.at(t[2]) == 0) {
                hit = true;
                break;
            }
        }
        if (!hit)
            throw CertificationFailed("s2: assignment misses all twelve zero triples at p=" +
                                      rational_to_string(p));
    }
    GadgetCertificate cert;
    cert.gadget = "s2";
    cert.property = "ZERO_TRIPLE_FORCED";
    cert.method = "exhaustive";
    cert.inputs_hash = set_hash(g.set);
    cert.details = {{"p", rational_to_string(p)}, {"valid_assignments", all.size()}};
    g.certificates.push_back(std::move(cert));
    return all.size();
}

}  // namespace ksforge

#include "ksforge/gadgets_s3.hpp"
