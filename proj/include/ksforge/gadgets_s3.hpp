#pragma once

// Third-stage gadget: the 36-ray set whose zero-pinned distinguished triples
// contradict the outcome rules, the angle solver behind it, and the full
// rotation-union assembly. Included at the end of gadgets.hpp.

#include <cmath>

namespace ksforge {

struct GadgetAngles {
    double theta = M_PI / 3;
    double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0, phi5 = 0, theta5 = 0;
};

inline void to_json(nlohmann::json& j, const GadgetAngles& a) {
    j = {{"theta", a.theta}, {"phi1", a.phi1}, {"phi2", a.phi2}, {"phi3", a.phi3},
         {"phi4", a.phi4}, {"phi5", a.phi5}, {"theta5", a.theta5}};
}

inline void from_json(const nlohmann::json& j, GadgetAngles& a) {
    j.at("theta").get_to(a.theta);
    j.at("phi1").get_to(a.phi1);
    j.at("phi2").get_to(a.phi2);
    j.at("phi3").get_to(a.phi3);
    j.at("phi4").get_to(a.phi4);
    j.at("phi5").get_to(a.phi5);
    j.at("theta5").get_to(a.theta5);
}

namespace detail {

using Vec3 = std::array<double, 3>;

inline Vec3 vcross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double vdot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Vec3 vnrm(Vec3 a) {
    double n = std::sqrt(vdot(a, a));
    for (auto& c : a) c /= n;
    return a;
}

inline Vec3 plane_vec(double phi) { return {0, std::cos(phi), std::sin(phi)}; }
inline Vec3 plane_vec_perp(double phi) { return {0, -std::sin(phi), std::cos(phi)}; }

// All roots of f on (lo, hi) by sign-change scan plus bisection.
inline std::vector<double> bracket_roots(const std::function<double(double)>& f, double lo,
                                         double hi, int samples = 4000) {
    std::vector<double> roots;
    double prev_x = lo, prev_y = f(lo);
    for (int i = 1; i <= samples; ++i) {
        double x = lo + (hi - lo) * i / samples;
        double y = f(x);
        if (prev_y == 0) roots.push_back(prev_x);
        if (prev_y * y < 0) {
            double a = prev_x, b = x, fa = prev_y;
            for (int it = 0; it < 200; ++it) {
                double m = 0.5 * (a + b), fm = f(m);
                if (fm == 0 || (b - a) < 1e-16) {
                    a = b = m;
                    break;
                }
                if (fa * fm < 0) {
                    b = m;
                } else {
                    a = m;
                    fa = fm;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        prev_x = x;
        prev_y = y;
    }
    return roots;
}

inline double nearest_root(const std::vector<double>& roots, double target,
                           const char* what) {
    if (roots.empty()) throw NoRootInBracket(std::string("no root found for ") + what);
    double best = roots.front();
    for (double r : roots)
        if (std::abs(r - target) < std::abs(best - target)) best = r;
    return best;
}

struct S3Frame {
    Vec3 w2, w3, w9, w12, w14;
};

inline S3Frame s3_frame(double theta, double phi1, double phi2) {
    S3Frame f;
    double ct = std::cos(theta), st = std::sin(theta);
    f.w2 = {ct, st, 0};
    f.w3 = {ct, 0, st};
    Vec3 w4 = plane_vec(phi1), w5 = plane_vec_perp(phi1), w6 = plane_vec(phi2);
    Vec3 w8 = vnrm(vcross(f.w2, w4));
    f.w9 = vnrm(vcross(f.w2, w6));
    f.w12 = vnrm(vcross(w4, w8));
    f.w14 = vnrm(vcross(w5, vnrm(vcross(f.w3, w5))));
    return f;
}

struct S3Chain {
    double phi3, phi5, residual_a, residual_b, residual_c, residual_d;
};

// Given phi4 (and the first-stage frame), the remaining angles follow in
// closed form: phi3 zeroes <w24|w16>, phi5 (at theta5 = 0) zeroes <w26|w28>,
// and the returned residual_d = <w9|w30> is the outer root function.
inline S3Chain s3_chain(const S3Frame& f, double phi4) {
    S3Chain out{};
    Vec3 w18 = plane_vec(phi4), w19 = plane_vec_perp(phi4);
    Vec3 w20 = vnrm(vcross(f.w12, w18));
    Vec3 w24 = vnrm(vcross(f.w12, w20));
    out.phi3 = std::atan2(-w24[1], w24[2]);
    Vec3 w16 = plane_vec(out.phi3), w17 = plane_vec_perp(out.phi3);
    Vec3 w22 = vnrm(vcross(f.w14, w17));
    Vec3 w25 = vnrm(vcross(f.w14, w22));
    Vec3 w26 = vnrm(vcross(w16, w24));
    Vec3 w27 = vnrm(vcross(w19, w25));
    out.phi5 = std::atan2(-w26[0], w26[1]);
    Vec3 w28 = {std::cos(out.phi5), std::sin(out.phi5), 0};
    Vec3 w29 = vnrm(vcross(w27, w28));
    Vec3 w30 = vnrm(vcross(w28, w29));
    out.residual_a = vdot(w24, w16);
    out.residual_b = vdot(w19, w25);
    out.residual_c = vdot(w26, w28);
    out.residual_d = vdot(f.w9, w30);
    return out;
}

}  // namespace detail

// Published reference values steering root-branch selection.
struct S3AngleTargets {
    double phi1 = 5.7036, phi2 = 3.5065, phi3 = 5.0234, phi4 = 0.5886, phi5 = 2.1829;
};

// Solves the orthogonality constraints of the third-stage gadget by
// one-dimensional root bracketing in dependency order: phi2 from <w13|w3>,
// phi1 from <w8|w9> given phi2, then phi4 by an outer bracket on <w9|w30>
// with phi3/phi5 in closed form and theta5 pinned to 0 (the second-stage
// system is one equation short of full rank: <w19|w25> coincides with
// <w24|w16> because w14 is the quarter-turn image of w12).
inline GadgetAngles solve_s3_angles(double theta = M_PI / 3, const ToleranceBundle& tol = {},
                                    const S3AngleTargets& targets = {}) {
    using namespace detail;
    const double ct = std::cos(theta), st = std::sin(theta);
    GadgetAngles ang;
    ang.theta = theta;
    auto f2 = [&](double phi) { return ct * ct - st * st * std::sin(phi) * std::cos(phi); };
    ang.phi2 = nearest_root(bracket_roots(f2, 0.0, 2 * M_PI), targets.phi2, "phi2");
    auto f1 = [&](double phi) {
        return std::sin(phi) * std::sin(ang.phi2) + ct * ct * std::cos(phi) * std::cos(ang.phi2);
    };
    ang.phi1 = nearest_root(bracket_roots(f1, 0.0, 2 * M_PI), targets.phi1, "phi1");

    auto frame = s3_frame(theta, ang.phi1, ang.phi2);
    auto fd = [&](double phi4) { return s3_chain(frame, phi4).residual_d; };
    // phi4 and phi4 + pi give the same rays; scan a single period
    ang.phi4 = nearest_root(bracket_roots(fd, 0.02, M_PI - 0.02), targets.phi4, "phi4");
    auto chain = s3_chain(frame, ang.phi4);
    ang.phi3 = std::fmod(chain.phi3 + 2 * M_PI, 2 * M_PI);
    if (std::abs(ang.phi3 - targets.phi3) > M_PI / 2)
        ang.phi3 = std::fmod(ang.phi3 + M_PI, 2 * M_PI);
    ang.phi5 = std::fmod(chain.phi5 + 2 * M_PI, 2 * M_PI);
    if (std::abs(ang.phi5 - targets.phi5) > M_PI / 2)
        ang.phi5 = std::fmod(ang.phi5 + M_PI, 2 * M_PI);
    ang.theta5 = 0.0;

    for (double r : {chain.residual_a, chain.residual_b, chain.residual_c, chain.residual_d})
        if (std::abs(r) > tol.root_tol)
            throw ResidualTooLarge("solve_s3_angles: constraint residual above tolerance");
    return ang;
}

// Residuals of the seven enforced inner products at the solved angles,
// in the order w8.w9, w10.w11, w13.w3, w24.w16, w19.w25, w26.w28, w9.w30.
inline std::vector<double> s3_angle_residuals(const GadgetAngles& a) {
    using namespace detail;
    double ct = std::cos(a.theta), st = std::sin(a.theta);
    Vec3 w2 = {ct, st, 0}, w3 = {ct, 0, st};
    Vec3 w4 = plane_vec(a.phi1), w5 = plane_vec_perp(a.phi1);
    Vec3 w6 = plane_vec(a.phi2), w7 = plane_vec_perp(a.phi2);
    Vec3 w8 = vnrm(vcross(w2, w4)), w9 = vnrm(vcross(w2, w6));
    Vec3 w10 = vnrm(vcross(w3, w5)), w11 = vnrm(vcross(w3, w7));
    Vec3 w12 = vnrm(vcross(w4, w8)), w13 = vnrm(vcross(w6, w9));
    Vec3 w14 = vnrm(vcross(w5, w10));
    Vec3 w16 = plane_vec(a.phi3), w17 = plane_vec_perp(a.phi3);
    Vec3 w18 = plane_vec(a.phi4), w19 = plane_vec_perp(a.phi4);
    Vec3 w20 = vnrm(vcross(w12, w18));
    Vec3 w22 = vnrm(vcross(w14, w17));
    Vec3 w24 = vnrm(vcross(w12, w20)), w25 = vnrm(vcross(w14, w22));
    Vec3 w26 = vnrm(vcross(w16, w24)), w27 = vnrm(vcross(w19, w25));
    Vec3 w28 = {std::cos(a.theta5) * std::cos(a.phi5), std::cos(a.theta5) * std::sin(a.phi5),
                std::sin(a.theta5)};
    Vec3 w29 = vnrm(vcross(w27, w28)), w30 = vnrm(vcross(w28, w29));
    return {vdot(w8, w9),  vdot(w10, w11), vdot(w13, w3), vdot(w24, w16),
            vdot(w19, w25), vdot(w26, w28), vdot(w9, w30)};
}

namespace detail {

inline VectorSet s3_rays(const GadgetAngles& a, const ToleranceBundle& tol) {
    const double ct = std::cos(a.theta), st = std::sin(a.theta);
    std::map<std::string, Vec3> w;
    w["w1"] = {1, 0, 0};
    w["w2"] = {ct, st, 0};
    w["w2p"] = {-st, ct, 0};
    w["w3"] = {ct, 0, st};
    w["w4"] = plane_vec(a.phi1);
    w["w5"] = plane_vec_perp(a.phi1);
    w["w6"] = plane_vec(a.phi2);
    w["w7"] = plane_vec_perp(a.phi2);
    w["w8"] = vcross(w["w2"], w["w4"]);
    w["w9"] = vcross(w["w2"], w["w6"]);
    w["w10"] = vcross(w["w3"], w["w5"]);
    w["w11"] = vcross(w["w3"], w["w7"]);
    w["w12"] = vcross(w["w4"], w["w8"]);
    w["w13"] = vcross(w["w6"], w["w9"]);
    w["w14"] = vcross(w["w5"], w["w10"]);
    w["w15"] = vcross(w["w7"], w["w11"]);
    w["w34"] = vcross(w["w3"], w["w13"]);
    w["w16"] = plane_vec(a.phi3);
    w["w17"] = plane_vec_perp(a.phi3);
    w["w18"] = plane_vec(a.phi4);
    w["w19"] = plane_vec_perp(a.phi4);
    w["w20"] = vcross(w["w12"], w["w18"]);
    w["w21"] = vcross(w["w18"], w["w20"]);
    w["w22"] = vcross(w["w14"], w["w17"]);
    w["w23"] = vcross(w["w17"], w["w22"]);
    w["w24"] = vcross(w["w12"], w["w20"]);
    w["w25"] = vcross(w["w14"], w["w22"]);
    w["w26"] = vcross(w["w16"], w["w24"]);
    w["w27"] = vcross(w["w19"], w["w25"]);
    w["w28"] = {std::cos(a.theta5) * std::cos(a.phi5), std::cos(a.theta5) * std::sin(a.phi5),
                std::sin(a.theta5)};
    w["w29"] = vcross(w["w27"], w["w28"]);
    w["w30"] = vcross(w["w28"], w["w29"]);
    w["w31"] = vcross(w["w26"], w["w28"]);
    w["w32"] = vcross(w["w27"], w["w29"]);
    w["w33"] = vcross(w["w9"], w["w30"]);
    w["w35"] = vcross(w["w2"], w["w2p"]);

    // deterministic label order w1, w2, w2p, w3, ..., w35
    std::vector<std::string> order = {"w1", "w2", "w2p", "w3"};
    for (int i = 4; i <= 35; ++i) order.push_back("w" + std::to_string(i));
    VectorSet s;
    s.name = "s3";
    s.tol = tol.ortho_tol;
    for (const auto& label : order) {
        const auto& v = w.at(label);
        s.add(normalize({v[0], v[1], v[2]}, label, tol));
    }
    return s;
}

inline const std::vector<std::string>& s3_first_stage_labels() {
    static const std::vector<std::string> labels = {"w1", "w2", "w3",  "w4",  "w5",  "w6",
                                                    "w7", "w8", "w9",  "w10", "w11", "w12",
                                                    "w13", "w14", "w15", "w34"};
    return labels;
}

}  // namespace detail

// Full 36-ray third-stage gadget with both zero-pinned contradiction cases
// certified on the grid.
inline Gadget build_s3(const GadgetAngles& angles, const ToleranceBundle& tol = {},
                       const std::vector<Rational>& p_grid = default_p_grid()) {
    for (double r : s3_angle_residuals(angles))
        if (std::abs(r) > tol.ortho_tol)
            throw ResidualTooLarge("build_s3: angle residual above tolerance");
    Gadget g;
    g.set = detail::s3_rays(angles, tol);
    if (g.set.size() != 36) throw CertificationFailed("s3: expected 36 distinct rays");
    g.graph = graph_from_vectors(g.set, tol);
    g.distinguished = {{"w1", "w1"}, {"w2", "w2"}, {"w2p", "w2p"}, {"w3", "w3"}};

    // first-stage induced subset for case (i)
    VectorSet first;
    first.name = "s3-first";
    first.tol = tol.ortho_tol;
    for (const auto& label : detail::s3_first_stage_labels())
        first.add(*g.set.by_label(label));
    auto first_graph = graph_from_vectors(first, tol);

    GadgetCertificate cert;
    cert.gadget = "s3";
    cert.property = "ZERO_TRIPLE_CONTRADICTION";
    cert.method = "backtracking";
    cert.inputs_hash = set_hash(g.set);
    nlohmann::json runs = nlohmann::json::array();
    const std::map<std::string, Rational> pins_i = {
        {"w1", Rational(0)}, {"w2", Rational(0)}, {"w3", Rational(0)}};
    const std::map<std::string, Rational> pins_ii = {
        {"w1", Rational(0)}, {"w2p", Rational(0)}, {"w3", Rational(0)}};
    for (const auto& p : p_grid) {
        auto alpha = Alphabet::from_values({Rational(0), p, Rational(1) - p}, 3);
        auto res_i = search_assignment(first_graph, alpha, pins_i);
        auto res_ii = search_assignment(g.graph, alpha, pins_ii);
        if (res_i.verdict != Verdict::Unsat || res_ii.verdict != Verdict::Unsat)
            throw CertificationFailed("s3: pinned zero-triple unexpectedly satisfiable at p=" +
                                      rational_to_string(p));
        runs.push_back({{"p", rational_to_string(p)},
                        {"case_i", verdict_name(res_i.verdict)},
                        {"case_i_conflict_basis", res_i.conflict_on({"w3", "w13", "w34"})},
                        {"case_ii", verdict_name(res_ii.verdict)},
                        {"case_ii_conflict_basis", res_ii.conflict_on({"w30", "w9", "w33"})}});
    }
    cert.details = {{"runs", runs}};
    g.certificates.push_back(std::move(cert));
    return g;
}

// First-stage induced subgraph: the smallest subset reproducing case (i).
inline Gadget build_s3_minimal(const GadgetAngles& angles, const ToleranceBundle& tol = {}) {
    auto full = detail::s3_rays(angles, tol);
    Gadget g;
    g.set.name = "s3-min";
    g.set.tol = tol.ortho_tol;
    for (const auto& label : detail::s3_first_stage_labels()) g.set.add(*full.by_label(label));
    g.graph = graph_from_vectors(g.set, tol);
    g.distinguished = {{"w1", "w1"}, {"w2", "w2"}, {"w3", "w3"}};
    auto alpha = Alphabet::from_values({Rational(0), Rational(1, 2)}, 3);
    auto res = search_assignment(g.graph, alpha,
                                 {{"w1", Rational(0)}, {"w2", Rational(0)}, {"w3", Rational(0)}});
    if (res.verdict != Verdict::Unsat)
        throw CertificationFailed("s3-min: pinned zero triple unexpectedly satisfiable");
    GadgetCertificate cert;
    cert.gadget = "s3-min";
    cert.property = "ZERO_TRIPLE_CONTRADICTION";
    cert.method = "backtracking";
    cert.inputs_hash = set_hash(g.set);
    cert.details = {{"p", "1/2"},
                    {"verdict", "UNSAT"},
                    {"conflict_basis", res.conflict_on({"w3", "w13", "w34"})}};
    g.certificates.push_back(std::move(cert));
    return g;
}

// ---------------------------------------------------------------------------
// assembly: rotation closure of the third-stage gadget, the zero-triple
// forcer, and one-exclusion constraints on every vertex
// ---------------------------------------------------------------------------

enum class GadgetPolicy { TypedEdges, ConcreteRequired };

struct AssemblyResult {
    Gadget gadget;
    SolveResult solve;
    std::vector<std::string> witness_zero_rays;  // zero-valued forcer rays in a SAT witness
    bool expected_unsat = true;
    bool confirmed = false;  // solve verdict matched the expectation
    std::string warning;
};

inline VectorSet rotate_set(const VectorSet& s, Axis axis, const std::string& name,
                            const ToleranceBundle& tol = {}) {
    VectorSet out;
    out.name = name;
    out.dim = s.dim;
    out.tol = s.tol;
    for (const auto& v : s.vectors) out.add(rotate_about_axis(v, axis, v.label, tol));
    return out;
}

inline AssemblyResult assemble_gks(const Rational& p, const Budget& budget = {},
                                   GadgetPolicy policy = GadgetPolicy::TypedEdges,
                                   const ToleranceBundle& tol = {}) {
    auto alpha = Alphabet::O(p, 3);  // validates p

    AssemblyResult out;
    if (policy == GadgetPolicy::ConcreteRequired)
        throw GadgetUnavailable(
            "assemble_gks: concrete one-exclusion gadgets need pair-exclusion embeddings at "
            "overlaps with no known fourteen-ray realization; use typed-edge mode");
    out.warning =
        "one-exclusion gadgets attached as typed constraints (concrete embeddings unavailable "
        "for the required overlaps)";

    auto angles = solve_s3_angles(M_PI / 3, tol);
    auto s3 = build_s3(angles, tol, {p});
    auto s2 = build_s2(M_PI / 3, tol);

    VectorSet s3x = rotate_set(s3.set, Axis::X, "s3x", tol);
    VectorSet t = union_sets({s3.set, s3x}, "t");
    VectorSet tz = rotate_set(t, Axis::Z, "tz", tol);
    VectorSet ty = rotate_set(t, Axis::Y, "ty", tol);
    VectorSet sf = union_sets({t, tz, ty}, "sf");
    VectorSet full = union_sets({sf, s2.set}, "gks");
    full.name = "gks";

    out.gadget.set = full;
    out.gadget.graph = graph_from_vectors(full, tol);
    // one-exclusion on every vertex, certified once at the anchor and
    // carried to the rest by rotation covariance of the construction
    auto s1 = build_s1(tol);
    for (std::size_t i = 0; i < out.gadget.graph.vertices.size(); ++i)
        out.gadget.graph.one_excluded.insert(i);
    out.gadget.certificates = s1.certificates;
    for (auto& c : s3.certificates) out.gadget.certificates.push_back(c);

    out.solve = search_assignment(out.gadget.graph, alpha, {}, budget);
    out.confirmed = out.solve.verdict == Verdict::Unsat;
    if (out.solve.verdict == Verdict::Sat && out.solve.certificate) {
        for (const auto& u : s2.set.vectors) {
            std::size_t idx = full.find(u);
            if (idx == full.size()) continue;
            const auto& label = full.vectors[idx].label;
            if (out.solve.certificate->at(label) == 0)
                out.witness_zero_rays.push_back(u.label + "=" + label);
        }
    }

    GadgetCertificate cert;
    cert.gadget = "gks";
    cert.property = "ZERO_TRIPLE_CONTRADICTION";
    cert.method = "backtracking";
    cert.inputs_hash = set_hash(full);
    cert.details = {{"p", rational_to_string(p)},
                    {"verdict", verdict_name(out.solve.verdict)},
                    {"expected", "UNSAT"},
                    {"nodes", out.solve.stats.nodes},
                    {"witness_zero_rays", out.witness_zero_rays}};
    out.gadget.certificates.push_back(std::move(cert));
    return out;
}

}  // namespace ksforge
