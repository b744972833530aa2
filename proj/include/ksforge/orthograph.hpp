#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksforge/errors.hpp"
#include "ksforge/geometry.hpp"
#include "ksforge/rational.hpp"

namespace ksforge {

enum class EdgeKind { Ortho, Forbid11, ImpliesInterior };

inline std::string edge_kind_name(EdgeKind k) {
    switch (k) {
        case EdgeKind::Ortho: return "ORTHO";
        case EdgeKind::Forbid11: return "FORBID11";
        case EdgeKind::ImpliesInterior: return "IMPLIES_INTERIOR";
    }
    return "?";
}

inline EdgeKind edge_kind_from_name(const std::string& s) {
    if (s == "ORTHO") return EdgeKind::Ortho;
    if (s == "FORBID11") return EdgeKind::Forbid11;
    if (s == "IMPLIES_INTERIOR") return EdgeKind::ImpliesInterior;
    throw Error("unknown edge kind: " + s);
}

// Undirected for Ortho/Forbid11 (stored with u <= v); directed for
// ImpliesInterior (u is the value-1 trigger, v the forced-interior end).
struct TypedEdge {
    std::size_t u, v;
    EdgeKind kind;
};

struct CliqueReport {
    std::vector<std::vector<std::size_t>> maximal_cliques;  // sorted members, sorted list
    std::size_t clique_number = 0;
};

struct GraphVertex {
    std::string label;
    std::optional<UnitVector> vector;
};

struct OrthoGraph {
    std::size_t dim = 3;
    ToleranceBundle tol;
    std::string name;
    std::vector<GraphVertex> vertices;
    std::vector<TypedEdge> edges;
    std::vector<std::vector<std::size_t>> bases;           // maximal Ortho cliques of size dim
    std::vector<std::vector<std::size_t>> maximal_cliques; // all maximal Ortho cliques
    std::set<std::size_t> one_excluded;                    // vertices certified to never take value 1

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i].label == label) return i;
        throw UnknownVertex("unknown vertex: " + label);
    }

    bool has_vertex(const std::string& label) const {
        for (const auto& v : vertices)
            if (v.label == label) return true;
        return false;
    }

    std::vector<std::vector<std::size_t>> ortho_adjacency() const {
        std::vector<std::vector<std::size_t>> adj(vertices.size());
        for (const auto& e : edges) {
            if (e.kind != EdgeKind::Ortho) continue;
            adj[e.u].push_back(e.v);
            adj[e.v].push_back(e.u);
        }
        for (auto& a : adj) std::sort(a.begin(), a.end());
        return adj;
    }

    std::size_t ortho_degree(std::size_t v) const {
        std::size_t d = 0;
        for (const auto& e : edges)
            if (e.kind == EdgeKind::Ortho && (e.u == v || e.v == v)) ++d;
        return d;
    }

    bool has_edge(std::size_t u, std::size_t v, EdgeKind kind) const {
        for (const auto& e : edges) {
            if (e.kind != kind) continue;
            if (kind == EdgeKind::ImpliesInterior) {
                if (e.u == u && e.v == v) return true;
            } else if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) {
                return true;
            }
        }
        return false;
    }
};

namespace detail {

// Bron-Kerbosch with pivoting; deterministic output order.
inline void bron_kerbosch(const std::vector<std::vector<std::size_t>>& adj,
                          std::vector<std::size_t>& R, std::set<std::size_t>& P,
                          std::set<std::size_t>& X,
                          std::vector<std::vector<std::size_t>>& out) {
    if (P.empty() && X.empty()) {
        out.push_back(R);
        return;
    }
    std::size_t pivot = 0, best = 0;
    bool have = false;
    for (auto s : {&P, &X})
        for (std::size_t u : *s) {
            std::size_t k = 0;
            for (std::size_t w : adj[u])
                if (P.count(w)) ++k;
            if (!have || k > best) {
                have = true;
                best = k;
                pivot = u;
            }
        }
    std::vector<std::size_t> cands;
    for (std::size_t v : P) {
        bool adjacent = std::binary_search(adj[pivot].begin(), adj[pivot].end(), v);
        if (!adjacent) cands.push_back(v);
    }
    for (std::size_t v : cands) {
        std::set<std::size_t> P2, X2;
        for (std::size_t w : adj[v]) {
            if (P.count(w)) P2.insert(w);
            if (X.count(w)) X2.insert(w);
        }
        R.push_back(v);
        bron_kerbosch(adj, R, P2, X2, out);
        R.pop_back();
        P.erase(v);
        X.insert(v);
    }
}

}  // namespace detail

inline CliqueReport enumerate_maximal_cliques(const OrthoGraph& g, std::size_t cap = 10000) {
    if (g.vertices.size() > cap)
        throw SizeLimit("enumerate_maximal_cliques: vertex count exceeds cap");
    auto adj = g.ortho_adjacency();
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> R;
    std::set<std::size_t> P, X;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) P.insert(i);
    detail::bron_kerbosch(adj, R, P, X, out);
    for (auto& c : out) std::sort(c.begin(), c.end());
    std::sort(out.begin(), out.end());
    CliqueReport rep;
    rep.maximal_cliques = std::move(out);
    for (const auto& c : rep.maximal_cliques) rep.clique_number = std::max(rep.clique_number, c.size());
    return rep;
}

inline void refresh_cliques(OrthoGraph& g) {
    auto rep = enumerate_maximal_cliques(g);
    g.maximal_cliques = rep.maximal_cliques;
    g.bases.clear();
    for (const auto& c : g.maximal_cliques)
        if (c.size() == g.dim) g.bases.push_back(c);
}

inline OrthoGraph graph_from_vectors(const VectorSet& s, const ToleranceBundle& tol = {}) {
    if (s.vectors.empty()) throw Error("graph_from_vectors: empty set");
    OrthoGraph g;
    g.dim = s.dim;
    g.tol = tol;
    g.name = s.name;
    for (const auto& v : s.vectors) g.vertices.push_back({v.label, v});
    for (std::size_t i = 0; i < s.vectors.size(); ++i)
        for (std::size_t j = i + 1; j < s.vectors.size(); ++j)
            if (overlap(s.vectors[i], s.vectors[j]) < tol.ortho_tol)
                g.edges.push_back({i, j, EdgeKind::Ortho});
    refresh_cliques(g);
    return g;
}

inline void add_typed_edge(OrthoGraph& g, const std::string& ul, const std::string& vl,
                           EdgeKind kind) {
    std::size_t u = g.index_of(ul), v = g.index_of(vl);
    if (u == v) throw Error("add_typed_edge: self loop");
    if (g.has_edge(u, v, kind)) throw DuplicateEdge("add_typed_edge: duplicate " + edge_kind_name(kind));
    if (kind == EdgeKind::Ortho && g.vertices[u].vector && g.vertices[v].vector) {
        if (overlap(*g.vertices[u].vector, *g.vertices[v].vector) >= g.tol.ortho_tol)
            throw NotOrthogonal("add_typed_edge: vectors not orthogonal: " + ul + ", " + vl);
    }
    if (kind != EdgeKind::ImpliesInterior && u > v) std::swap(u, v);
    g.edges.push_back({u, v, kind});
    if (kind == EdgeKind::Ortho) refresh_cliques(g);
}

inline void to_json(nlohmann::json& j, const OrthoGraph& g) {
    j = nlohmann::json::object();
    j["name"] = g.name;
    j["dim"] = g.dim;
    j["tol"] = g.tol.ortho_tol;
    auto verts = nlohmann::json::array();
    for (const auto& v : g.vertices) {
        nlohmann::json jv{{"label", v.label}};
        if (v.vector) jv["vector"] = v.vector->components;
        verts.push_back(jv);
    }
    j["vertices"] = verts;
    auto edges = nlohmann::json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"u", g.vertices[e.u].label},
                         {"v", g.vertices[e.v].label},
                         {"kind", edge_kind_name(e.kind)}});
    j["edges"] = edges;
    auto bases = nlohmann::json::array();
    for (const auto& b : g.bases) {
        auto jb = nlohmann::json::array();
        for (auto i : b) jb.push_back(g.vertices[i].label);
        bases.push_back(jb);
    }
    j["bases"] = bases;
    if (!g.one_excluded.empty()) {
        auto oe = nlohmann::json::array();
        for (auto i : g.one_excluded) oe.push_back(g.vertices[i].label);
        j["one_excluded"] = oe;
    }
}

inline void from_json(const nlohmann::json& j, OrthoGraph& g) {
    g = OrthoGraph{};
    g.name = j.value("name", "");
    j.at("dim").get_to(g.dim);
    if (j.contains("tol")) g.tol.ortho_tol = j["tol"].get<double>();
    for (const auto& jv : j.at("vertices")) {
        GraphVertex v;
        v.label = jv.at("label").get<std::string>();
        if (jv.contains("vector")) {
            UnitVector uv;
            uv.label = v.label;
            jv.at("vector").get_to(uv.components);
            v.vector = uv;
        }
        g.vertices.push_back(std::move(v));
    }
    for (const auto& je : j.at("edges"))
        g.edges.push_back({g.index_of(je.at("u").get<std::string>()),
                           g.index_of(je.at("v").get<std::string>()),
                           edge_kind_from_name(je.at("kind").get<std::string>())});
    refresh_cliques(g);
    if (j.contains("one_excluded"))
        for (const auto& jl : j["one_excluded"]) g.one_excluded.insert(g.index_of(jl.get<std::string>()));
}

enum class GraphFormat { Json, Dimacs };

// DIMACS col holds Ortho edges only; labels ride along as comments so the
// import can restore them.
inline std::string export_graph(const OrthoGraph& g, GraphFormat format) {
    if (format == GraphFormat::Json) {
        nlohmann::json j = g;
        return j.dump(2);
    }
    std::ostringstream os;
    std::size_t m = 0;
    for (const auto& e : g.edges)
        if (e.kind == EdgeKind::Ortho) ++m;
    for (std::size_t i = 0; i < g.vertices.size(); ++i)
        os << "c label " << (i + 1) << " " << g.vertices[i].label << "\n";
    os << "p edge " << g.vertices.size() << " " << m << "\n";
    for (const auto& e : g.edges)
        if (e.kind == EdgeKind::Ortho) os << "e " << (e.u + 1) << " " << (e.v + 1) << "\n";
    return os.str();
}

inline OrthoGraph import_graph_json(const std::string& text) {
    return nlohmann::json::parse(text).get<OrthoGraph>();
}

inline OrthoGraph import_graph_dimacs(const std::string& text, std::size_t dim = 3) {
    OrthoGraph g;
    g.dim = dim;
    std::istringstream is(text);
    std::string line;
    std::map<std::size_t, std::string> labels;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string t;
        ls >> t;
        if (t == "c") {
            std::string what;
            ls >> what;
            if (what == "label") {
                std::size_t i;
                std::string lab;
                ls >> i >> lab;
                labels[i] = lab;
            }
        } else if (t == "p") {
            std::string fmt;
            std::size_t m;
            ls >> fmt >> n >> m;
        } else if (t == "e") {
            std::size_t a, b;
            ls >> a >> b;
            edges.emplace_back(a, b);
        }
    }
    if (n == 0) throw ParseError("dimacs: missing problem line");
    for (std::size_t i = 1; i <= n; ++i) {
        auto it = labels.find(i);
        g.vertices.push_back({it != labels.end() ? it->second : std::to_string(i), std::nullopt});
    }
    for (auto [a, b] : edges) {
        if (a < 1 || b < 1 || a > n || b > n) throw ParseError("dimacs: edge out of range");
        std::size_t u = a - 1, v = b - 1;
        if (u > v) std::swap(u, v);
        g.edges.push_back({u, v, EdgeKind::Ortho});
    }
    refresh_cliques(g);
    return g;
}

}  // namespace ksforge
