#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "ksforge/gadgets.hpp"
#include "ksforge/orthograph.hpp"

using namespace ksforge;

namespace {

OrthoGraph triangle() {
    VectorSet s;
    s.name = "k3";
    s.add(normalize({1, 0, 0}, "e1"));
    s.add(normalize({0, 1, 0}, "e2"));
    s.add(normalize({0, 0, 1}, "e3"));
    return graph_from_vectors(s);
}

// all-subsets maximal clique oracle
std::vector<std::vector<std::size_t>> clique_oracle(std::size_t n,
                                                    const std::set<std::pair<std::size_t, std::size_t>>& edges) {
    auto connected = [&](std::size_t a, std::size_t b) {
        return edges.count({std::min(a, b), std::max(a, b)}) > 0;
    };
    std::vector<std::vector<std::size_t>> cliques;
    for (std::size_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> mem;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) mem.push_back(i);
        bool clique = true;
        for (std::size_t i = 0; i < mem.size() && clique; ++i)
            for (std::size_t j = i + 1; j < mem.size(); ++j)
                if (!connected(mem[i], mem[j])) {
                    clique = false;
                    break;
                }
        if (!clique) continue;
        bool maximal = true;
        for (std::size_t v = 0; v < n && maximal; ++v) {
            if (mask & (1u << v)) continue;
            bool all = true;
            for (auto m : mem)
                if (!connected(v, m)) {
                    all = false;
                    break;
                }
            if (all) maximal = false;
        }
        if (maximal) cliques.push_back(mem);
    }
    std::sort(cliques.begin(), cliques.end());
    return cliques;
}

}  // namespace

TEST_CASE("triangle graph has one basis") {
    auto g = triangle();
    REQUIRE(g.bases.size() == 1);
    CHECK(g.bases[0].size() == 3);
    CHECK(g.maximal_cliques.size() == 1);
}

TEST_CASE("two-edge path cliques") {
    OrthoGraph g;
    g.dim = 3;
    g.vertices = {{"u", std::nullopt}, {"v", std::nullopt}, {"w", std::nullopt}};
    g.edges = {{0, 1, EdgeKind::Ortho}, {1, 2, EdgeKind::Ortho}};
    refresh_cliques(g);
    REQUIRE(g.maximal_cliques.size() == 2);
    CHECK(g.bases.empty());
}

TEST_CASE("nine-ray gadget graph has four bases") {
    auto s2 = build_s2();
    auto g = graph_from_vectors(s2.set);
    CHECK(g.vertices.size() == 9);
    REQUIRE(g.bases.size() == 4);
    // rows (u1,u2,u3), (u4,u5,u6), (u7,u8,u9) and the column (u1,u4,u7)
    auto has_basis = [&](std::vector<std::string> labels) {
        std::vector<std::size_t> want;
        for (auto& l : labels) want.push_back(g.index_of(l));
        std::sort(want.begin(), want.end());
        for (const auto& b : g.bases)
            if (b == want) return true;
        return false;
    };
    CHECK(has_basis({"u1", "u2", "u3"}));
    CHECK(has_basis({"u4", "u5", "u6"}));
    CHECK(has_basis({"u7", "u8", "u9"}));
    CHECK(has_basis({"u1", "u4", "u7"}));
}

TEST_CASE("pair-exclusion gadget graph structure") {
    auto lipa = build_lip_a();
    auto g = graph_from_vectors(lipa.set);
    CHECK(g.vertices.size() == 14);
    std::size_t ortho_edges = 0;
    for (const auto& e : g.edges)
        if (e.kind == EdgeKind::Ortho) ++ortho_edges;
    CHECK(ortho_edges == 21);
    // the distinguished pair is NOT an edge
    CHECK_FALSE(g.has_edge(g.index_of("v1"), g.index_of("v2"), EdgeKind::Ortho));
    CHECK(g.bases.size() == 4);
    CHECK(g.maximal_cliques.size() == 13);
}

TEST_CASE("typed edges validate and reject duplicates") {
    auto lipb = build_lip_b();
    auto g = lipb.graph;
    // FORBID11 accepted between non-orthogonal rays
    CHECK(g.has_edge(g.index_of("v1"), g.index_of("v2"), EdgeKind::Forbid11));
    CHECK_THROWS_AS(add_typed_edge(g, "v1", "v2", EdgeKind::Forbid11), DuplicateEdge);

    auto tri = triangle();
    // near-parallel rays are not orthogonal
    VectorSet s;
    s.add(normalize({1, 0, 0}, "a"));
    s.add(normalize({1, 1e-6, 0}, "b"));
    auto g2 = graph_from_vectors(s);
    CHECK_THROWS_AS(add_typed_edge(g2, "a", "b", EdgeKind::Ortho), NotOrthogonal);

    add_typed_edge(tri, "e1", "e2", EdgeKind::ImpliesInterior);
    CHECK(tri.has_edge(tri.index_of("e1"), tri.index_of("e2"), EdgeKind::ImpliesInterior));
    // directed: reverse direction is a distinct edge
    add_typed_edge(tri, "e2", "e1", EdgeKind::ImpliesInterior);
}

TEST_CASE("clique enumeration agrees with all-subsets oracle") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 4 + rng() % 9;  // 4..12
        double p = 0.2 + 0.6 * (rng() % 100) / 100.0;
        OrthoGraph g;
        g.dim = 3;
        std::set<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < n; ++i) g.vertices.push_back({"x" + std::to_string(i), std::nullopt});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if ((rng() % 1000) < p * 1000) {
                    edges.insert({i, j});
                    g.edges.push_back({i, j, EdgeKind::Ortho});
                }
        refresh_cliques(g);
        auto expect = clique_oracle(n, edges);
        CHECK(g.maximal_cliques == expect);
    }
}

TEST_CASE("graph construction is invariant under sign flips and global rotation") {
    auto s2 = build_s2();
    auto g0 = graph_from_vectors(s2.set);
    // flip signs of a few members; rotate everything about X
    VectorSet flipped;
    flipped.name = "f";
    std::mt19937 rng(7);
    for (const auto& v : s2.set.vectors) {
        auto c = v.components;
        if (rng() % 2)
            for (auto& x : c) x = -x;
        flipped.add(normalize(c, v.label));
    }
    VectorSet rotated;
    rotated.name = "r";
    for (const auto& v : flipped.vectors) rotated.add(rotate_about_axis(v, Axis::X, v.label));
    auto g1 = graph_from_vectors(rotated);
    REQUIRE(g0.vertices.size() == g1.vertices.size());
    auto edge_set = [](const OrthoGraph& g) {
        std::set<std::pair<std::string, std::string>> s;
        for (const auto& e : g.edges)
            if (e.kind == EdgeKind::Ortho)
                s.insert({std::min(g.vertices[e.u].label, g.vertices[e.v].label),
                          std::max(g.vertices[e.u].label, g.vertices[e.v].label)});
        return s;
    };
    CHECK(edge_set(g0) == edge_set(g1));
}

TEST_CASE("every basis is a maximal clique of size dim") {
    auto s3 = build_s3(solve_s3_angles());
    auto g = graph_from_vectors(s3.set);
    std::set<std::vector<std::size_t>> cliques(g.maximal_cliques.begin(), g.maximal_cliques.end());
    for (const auto& b : g.bases) {
        CHECK(b.size() == g.dim);
        CHECK(cliques.count(b) == 1);
    }
    for (const auto& c : g.maximal_cliques)
        if (c.size() == g.dim) CHECK(std::find(g.bases.begin(), g.bases.end(), c) != g.bases.end());
}

TEST_CASE("dimacs export and json round-trip") {
    auto g = triangle();
    auto dim = export_graph(g, GraphFormat::Dimacs);
    CHECK(dim.find("p edge 3 3") != std::string::npos);
    std::size_t elines = 0;
    for (std::size_t pos = 0; (pos = dim.find("\ne ", pos)) != std::string::npos; ++pos) ++elines;
    CHECK(elines == 3);
    auto gd = import_graph_dimacs(dim);
    CHECK(gd.vertices.size() == 3);
    CHECK(gd.vertices[0].label == "e1");
    CHECK(gd.bases.size() == 1);

    auto lipb = build_lip_b();
    auto text = export_graph(lipb.graph, GraphFormat::Json);
    auto g2 = import_graph_json(text);
    CHECK(export_graph(g2, GraphFormat::Json) == text);  // bit-exact round-trip
    CHECK(g2.edges.size() == lipb.graph.edges.size());
    CHECK(g2.bases == lipb.graph.bases);
}

TEST_CASE("size cap on clique enumeration") {
    OrthoGraph g;
    g.dim = 3;
    for (std::size_t i = 0; i < 50; ++i) g.vertices.push_back({"x" + std::to_string(i), std::nullopt});
    CHECK_THROWS_AS(enumerate_maximal_cliques(g, 10), SizeLimit);
}
