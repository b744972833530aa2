#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "ksforge/geometry.hpp"

using namespace ksforge;

namespace {
const double RT2 = std::sqrt(2.0), RT3 = std::sqrt(3.0);
}

TEST_CASE("normalize canonicalizes sign and scale") {
    auto v = normalize({-RT2, -1, 1}, "v1");
    CHECK(std::abs(norm(v.components) - 1.0) < 1e-12);
    // (-sqrt2,-1,1)/2 flips to (sqrt2,1,-1)/2
    CHECK(v[0] == Catch::Approx(RT2 / 2));
    CHECK(v[1] == Catch::Approx(0.5));
    CHECK(v[2] == Catch::Approx(-0.5));

    auto e1 = normalize({1, 0, 0});
    CHECK(e1[0] == 1.0);
    CHECK(e1[1] == 0.0);

    CHECK_THROWS_AS(normalize({0, 0, 0}), ZeroVector);
}

TEST_CASE("normalize is idempotent") {
    auto v = normalize({0.3, -1.7, 2.2}, "a");
    auto w = normalize(v.components, "a");
    CHECK(v.components == w.components);
}

TEST_CASE("overlap matches published pair value") {
    auto v1 = normalize({-RT2, -1, 1});
    auto v2 = normalize({RT2, 1, 1});
    CHECK(overlap(v1, v2) == Catch::Approx(0.5).margin(1e-12));
    auto e1 = normalize({1, 0, 0});
    auto e2 = normalize({0, 1, 0});
    CHECK(overlap(e1, e1) == Catch::Approx(1.0));
    CHECK(overlap(e1, e2) == Catch::Approx(0.0).margin(1e-15));
    UnitVector bad{"b", {1, 0, 0, 0}, ""};
    CHECK_THROWS_AS(overlap(e1, bad), DimMismatch);
}

TEST_CASE("cross product basics") {
    auto e1 = normalize({1, 0, 0});
    auto e2 = normalize({0, 1, 0});
    auto e3 = cross(e1, e2);
    CHECK(e3[2] == Catch::Approx(1.0));
    CHECK_THROWS_AS(cross(e1, e1), ParallelInput);
}

TEST_CASE("cross output is orthogonal to both inputs (random rays)") {
    std::mt19937 rng(12345);
    std::normal_distribution<double> N(0, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        auto u = normalize({N(rng), N(rng), N(rng)});
        auto v = normalize({N(rng), N(rng), N(rng)});
        if (overlap(u, v) > 1 - 1e-6) continue;
        auto w = cross(u, v);
        CHECK(overlap(w, u) < 1e-9);
        CHECK(overlap(w, v) < 1e-9);
    }
}

TEST_CASE("quarter-turn rotations are exact") {
    auto e2 = normalize({0, 1, 0});
    auto e3 = normalize({0, 0, 1});
    auto r = rotate_about_axis(e2, Axis::X);
    CHECK(r.components == e3.components);
    // e3 about e1 gives -e2, canonicalized back to e2 as a ray
    auto r2 = rotate_about_axis(e3, Axis::X);
    CHECK(r2.components == e2.components);
    double th = 0.7;
    auto v = normalize({std::cos(th), std::sin(th), 0});
    auto rv = rotate_about_axis(v, Axis::Z);
    auto expect = normalize({-std::sin(th), std::cos(th), 0});
    CHECK(ray_equal(rv, expect, 1e-12));
}

TEST_CASE("rotations preserve overlaps") {
    std::mt19937 rng(99);
    std::normal_distribution<double> N(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
        auto u = normalize({N(rng), N(rng), N(rng)});
        auto v = normalize({N(rng), N(rng), N(rng)});
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
            auto ru = rotate_about_axis(u, ax);
            auto rv = rotate_about_axis(v, ax);
            CHECK(std::abs(overlap(ru, rv) - overlap(u, v)) < 1e-12);
        }
    }
}

TEST_CASE("ray identification: v and -v coincide") {
    auto a = normalize({0.2, -0.5, 0.8});
    auto b = normalize({-0.2, 0.5, -0.8});
    CHECK(a.components == b.components);
}

TEST_CASE("vector sets deduplicate up to sign") {
    VectorSet s;
    s.name = "t";
    s.add(normalize({1, 0, 0}, "e1"));
    s.add(normalize({-1, 0, 0}, "e1neg"));
    CHECK(s.size() == 1);

    VectorSet a, b;
    a.add(normalize({1, 0, 0}, "e1"));
    b.add(normalize({-1, 0, 0}, "e1"));
    auto u = union_sets({a, b});
    CHECK(u.size() == 1);
}

TEST_CASE("vector set json round-trip") {
    VectorSet s;
    s.name = "demo";
    s.add(normalize({-RT2, -1, 1}, "v1", {}, "(-sqrt2,-1,1)"));
    s.add(normalize({0, 1, 1}, "v3"));
    nlohmann::json j = s;
    auto s2 = j.get<VectorSet>();
    REQUIRE(s2.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s2.vectors[i].label == s.vectors[i].label);
        CHECK(s2.vectors[i].components == s.vectors[i].components);  // bit-exact
    }
    CHECK(s2.vectors[0].expr == "(-sqrt2,-1,1)");
}
