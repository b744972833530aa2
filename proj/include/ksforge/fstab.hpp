#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ksforge/errors.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/rational.hpp"

namespace ksforge {

struct FstabReport {
    std::vector<std::vector<Rational>> vertices;  // polytope vertices, one coord per graph vertex
    std::size_t recession_rays = 0;               // unbounded directions (isolated vertices)
    bool all_half_integral = true;
};

namespace detail {

struct TightSet {
    std::array<std::uint64_t, 4> bits{};
    void set(std::size_t i) { bits[i >> 6] |= std::uint64_t(1) << (i & 63); }
    bool subset_of(const TightSet& o) const {
        for (std::size_t k = 0; k < 4; ++k)
            if (bits[k] & ~o.bits[k]) return false;
        return true;
    }
    TightSet intersect(const TightSet& o) const {
        TightSet t;
        for (std::size_t k = 0; k < 4; ++k) t.bits[k] = bits[k] & o.bits[k];
        return t;
    }
};

struct Ray {
    std::vector<mpz_class> coords;  // homogeneous, coord 0 is the homogenizing var
    TightSet tight;
};

inline void normalize_ray(Ray& r) {
    mpz_class g(0);
    for (const auto& c : r.coords) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g > 1)
        for (auto& c : r.coords) c /= g;
}

}  // namespace detail

// Enumerates the vertices of {x >= 0, x_u + x_v <= 1 per Ortho edge} by the
// double description method over the homogenized cone, then checks whether
// every vertex coordinate lies in {0, 1/2, 1}.
inline FstabReport half_integrality_probe(const OrthoGraph& g, std::size_t max_vertices = 20) {
    const std::size_t n = g.vertices.size();
    if (n > max_vertices) throw TooLarge("half_integrality_probe: too many vertices");

    using detail::Ray;
    using detail::TightSet;

    std::vector<std::vector<long>> rows;  // a . x >= 0 over (x0, x1..xn)
    // initial orthant rows
    for (std::size_t i = 0; i <= n; ++i) {
        std::vector<long> a(n + 1, 0);
        a[i] = 1;
        rows.push_back(std::move(a));
    }
    std::vector<std::vector<long>> edge_rows;
    for (const auto& e : g.edges) {
        if (e.kind != EdgeKind::Ortho) continue;
        std::vector<long> a(n + 1, 0);
        a[0] = 1;
        a[e.u + 1] = -1;
        a[e.v + 1] = -1;
        edge_rows.push_back(std::move(a));
    }
    if (n + 1 + edge_rows.size() > 256)
        throw TooLarge("half_integrality_probe: too many constraints");

    std::vector<Ray> rays;
    for (std::size_t i = 0; i <= n; ++i) {
        Ray r;
        r.coords.assign(n + 1, 0);
        r.coords[i] = 1;
        for (std::size_t j = 0; j <= n; ++j)
            if (j != i) r.tight.set(j);
        rays.push_back(std::move(r));
    }

    auto dotrow = [&](const std::vector<long>& a, const Ray& r) {
        mpz_class s(0);
        for (std::size_t j = 0; j <= n; ++j)
            if (a[j]) s += a[j] * r.coords[j];
        return s;
    };

    std::vector<const std::vector<long>*> processed;
    for (const auto& a : rows) processed.push_back(&a);

    std::size_t row_index = n + 1;
    for (const auto& a : edge_rows) {
        std::vector<mpz_class> val(rays.size());
        for (std::size_t i = 0; i < rays.size(); ++i) val[i] = dotrow(a, rays[i]);
        std::vector<Ray> next;
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (val[i] > 0) {
                pos.push_back(i);
                next.push_back(rays[i]);
            } else if (val[i] == 0) {
                Ray r = rays[i];
                r.tight.set(row_index);
                next.push_back(std::move(r));
            } else {
                neg.push_back(i);
            }
        }
        for (std::size_t p : pos) {
            for (std::size_t q : neg) {
                // combinatorial adjacency: no third ray's tight set contains
                // the intersection
                TightSet common = rays[p].tight.intersect(rays[q].tight);
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size(); ++r) {
                    if (r == p || r == q) continue;
                    if (common.subset_of(rays[r].tight)) {
                        adjacent = false;
                        break;
                    }
                }
                if (!adjacent) continue;
                Ray nr;
                nr.coords.assign(n + 1, 0);
                for (std::size_t j = 0; j <= n; ++j)
                    nr.coords[j] = val[p] * rays[q].coords[j] - val[q] * rays[p].coords[j];
                detail::normalize_ray(nr);
                // exact tight set against every processed row plus this one
                for (std::size_t t = 0; t < processed.size(); ++t)
                    if (dotrow(*processed[t], nr) == 0) nr.tight.set(t);
                nr.tight.set(row_index);
                next.push_back(std::move(nr));
            }
        }
        rays = std::move(next);
        processed.push_back(&a);
        ++row_index;
    }

    FstabReport rep;
    for (const auto& r : rays) {
        if (r.coords[0] == 0) {
            ++rep.recession_rays;
            continue;
        }
        std::vector<Rational> v;
        for (std::size_t j = 1; j <= n; ++j) {
            Rational q(r.coords[j], r.coords[0]);
            q.canonicalize();
            v.push_back(q);
        }
        for (const auto& q : v)
            if (q != 0 && q != 1 && q != Rational(1, 2)) rep.all_half_integral = false;
        rep.vertices.push_back(std::move(v));
    }
    std::sort(rep.vertices.begin(), rep.vertices.end(),
              [](const auto& a, const auto& b) {
                  for (std::size_t i = 0; i < a.size(); ++i) {
                      if (a[i] != b[i]) return a[i] < b[i];
                  }
                  return false;
              });
    rep.vertices.erase(std::unique(rep.vertices.begin(), rep.vertices.end()), rep.vertices.end());
    return rep;
}

}  // namespace ksforge
