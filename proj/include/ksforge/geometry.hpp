#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksforge/errors.hpp"

namespace ksforge {

struct ToleranceBundle {
    double ortho_tol = 1e-9;
    double norm_tol = 1e-9;
    double root_tol = 1e-9;

    void validate() const {
        if (ortho_tol <= 0 || norm_tol <= 0 || root_tol <= 0)
            throw Error("tolerances must be strictly positive");
        if (ortho_tol < norm_tol)
            throw Error("ortho_tol must be >= norm_tol");
    }
};

// A labeled unit ray. Sign is canonical: the first component larger than
// tol in magnitude is positive, so v and -v normalize to the same object.
struct UnitVector {
    std::string label;
    std::vector<double> components;
    std::string expr;  // optional human-readable construction note

    std::size_t dim() const { return components.size(); }
    double operator[](std::size_t i) const { return components[i]; }
};

inline double dot(const UnitVector& u, const UnitVector& v) {
    if (u.dim() != v.dim()) throw DimMismatch("dot: dimension mismatch");
    double s = 0;
    for (std::size_t i = 0; i < u.dim(); ++i) s += u.components[i] * v.components[i];
    return s;
}

inline double norm(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline void canonicalize_sign(std::vector<double>& v, double tol) {
    for (double x : v) {
        if (std::abs(x) > tol) {
            if (x < 0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

inline UnitVector normalize(std::vector<double> raw, std::string label = "",
                            const ToleranceBundle& tol = {}, std::string expr = "") {
    if (raw.size() < 3) throw DimMismatch("normalize: need dimension >= 3");
    double n = norm(raw);
    if (n <= tol.norm_tol) throw ZeroVector("normalize: zero vector" + (label.empty() ? "" : " '" + label + "'"));
    for (double& x : raw) x /= n;
    canonicalize_sign(raw, tol.norm_tol);
    return UnitVector{std::move(label), std::move(raw), std::move(expr)};
}

// |<u|v>|, symmetric, in [0,1] for unit inputs.
inline double overlap(const UnitVector& u, const UnitVector& v) {
    return std::abs(dot(u, v));
}

// Rays are identified up to global sign.
inline bool ray_equal(const UnitVector& u, const UnitVector& v, double tol) {
    if (u.dim() != v.dim()) return false;
    double dplus = 0, dminus = 0;
    for (std::size_t i = 0; i < u.dim(); ++i) {
        dplus = std::max(dplus, std::abs(u.components[i] - v.components[i]));
        dminus = std::max(dminus, std::abs(u.components[i] + v.components[i]));
    }
    return dplus < tol || dminus < tol;
}

inline UnitVector cross(const UnitVector& u, const UnitVector& v, std::string label = "",
                        const ToleranceBundle& tol = {}) {
    if (u.dim() != 3 || v.dim() != 3) throw DimMismatch("cross: dimension 3 required");
    if (overlap(u, v) >= 1.0 - tol.norm_tol)
        throw ParallelInput("cross: parallel input rays");
    std::vector<double> w = {
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    };
    return normalize(std::move(w), std::move(label), tol);
}

enum class Axis { X = 0, Y = 1, Z = 2 };

// Quarter turn about a coordinate axis; matrix entries are exactly 0/1/-1,
// so components are permuted and negated without rounding. The result is
// sign-canonicalized (ray semantics).
inline UnitVector rotate_about_axis(const UnitVector& v, Axis axis, std::string label = "",
                                    const ToleranceBundle& tol = {}) {
    if (v.dim() != 3) throw DimMismatch("rotate_about_axis: dimension 3 required");
    const double x = v[0], y = v[1], z = v[2];
    std::vector<double> out;
    switch (axis) {
        case Axis::X: out = {x, -z, y}; break;
        case Axis::Y: out = {z, y, -x}; break;
        case Axis::Z: out = {-y, x, z}; break;
    }
    canonicalize_sign(out, tol.norm_tol);
    return UnitVector{label.empty() ? v.label : std::move(label), std::move(out), ""};
}

// Ordered, deduplicated (up to sign) collection of rays of one dimension.
struct VectorSet {
    std::string name;
    std::size_t dim = 3;
    double tol = 1e-9;
    std::vector<UnitVector> vectors;

    bool contains(const UnitVector& v) const {
        return find(v) != vectors.size();
    }

    std::size_t find(const UnitVector& v) const {
        for (std::size_t i = 0; i < vectors.size(); ++i)
            if (ray_equal(vectors[i], v, tol)) return i;
        return vectors.size();
    }

    const UnitVector* by_label(const std::string& label) const {
        for (const auto& v : vectors)
            if (v.label == label) return &v;
        return nullptr;
    }

    // Adds v unless an equal ray is present; returns the index either way.
    std::size_t add(UnitVector v) {
        if (v.dim() != dim) throw DimMismatch("VectorSet::add: dimension mismatch");
        std::size_t i = find(v);
        if (i != vectors.size()) return i;
        if (v.label.empty()) v.label = "r" + std::to_string(vectors.size() + 1);
        for (const auto& w : vectors)
            if (w.label == v.label) throw Error("VectorSet::add: duplicate label " + v.label);
        vectors.push_back(std::move(v));
        return vectors.size() - 1;
    }

    std::size_t size() const { return vectors.size(); }
};

inline VectorSet union_sets(const std::vector<VectorSet>& sets, std::string name = "union") {
    if (sets.empty()) throw Error("union_sets: no sets");
    VectorSet out;
    out.name = std::move(name);
    out.dim = sets.front().dim;
    out.tol = sets.front().tol;
    for (const auto& s : sets) {
        if (s.dim != out.dim) throw DimMismatch("union_sets: dimension mismatch");
        for (const auto& v : s.vectors) {
            if (out.find(v) == out.vectors.size()) {
                UnitVector copy = v;
                for (const auto& w : out.vectors)
                    if (w.label == copy.label) {
                        copy.label = s.name.empty() ? copy.label + "'" : s.name + ":" + copy.label;
                        break;
                    }
                out.add(std::move(copy));
            }
        }
    }
    return out;
}

inline void to_json(nlohmann::json& j, const UnitVector& v) {
    j = nlohmann::json{{"label", v.label}, {"components", v.components}};
    if (!v.expr.empty()) j["expr"] = v.expr;
}

inline void from_json(const nlohmann::json& j, UnitVector& v) {
    j.at("label").get_to(v.label);
    j.at("components").get_to(v.components);
    v.expr = j.value("expr", "");
}

inline void to_json(nlohmann::json& j, const VectorSet& s) {
    j = nlohmann::json{{"name", s.name}, {"dim", s.dim}, {"tol", s.tol}, {"vectors", s.vectors}};
}

inline void from_json(const nlohmann::json& j, VectorSet& s) {
    j.at("name").get_to(s.name);
    j.at("dim").get_to(s.dim);
    j.at("tol").get_to(s.tol);
    s.vectors.clear();
    for (const auto& jv : j.at("vectors")) s.vectors.push_back(jv.get<UnitVector>());
}

}  // namespace ksforge
