#pragma once

#include <string>

#include <json.hpp>

#include "ksforge/alphabet.hpp"
#include "ksforge/gadgets.hpp"
#include "ksforge/orthograph.hpp"
#include "ksforge/solver.hpp"

namespace ksforge {

// Search-certificate schema: verdict plus the data an independent checker
// needs to re-establish it without solver state.
inline nlohmann::json make_certificate_json(const OrthoGraph& g, const Alphabet& alpha,
                                            const std::map<std::string, Rational>& pins,
                                            const SolveResult& res) {
    nlohmann::json j;
    j["graph"] = g.name.empty() ? fnv1a64(export_graph(g, GraphFormat::Json)) : g.name;
    j["graph_hash"] = fnv1a64(export_graph(g, GraphFormat::Json));
    auto av = nlohmann::json::array();
    for (const auto& v : alpha.values) av.push_back(rational_to_string(v));
    j["alphabet"] = av;
    auto pj = nlohmann::json::object();
    for (const auto& [k, v] : pins) pj[k] = rational_to_string(v);
    j["pins"] = pj;
    j["verdict"] = verdict_name(res.verdict);
    j["nodes"] = res.stats.nodes;
    j["seconds"] = res.stats.seconds;
    if (res.certificate) j["assignment"] = *res.certificate;
    return j;
}

// Re-verifies a stored certificate against its graph: SAT assignments are
// re-checked by the direct evaluator; UNSAT/TIMEOUT verdicts are reproduced
// by a fresh run of the stated method.
inline bool verify_certificate_json(const nlohmann::json& cert, const OrthoGraph& g,
                                    const Budget& budget = {}, std::string* why = nullptr) {
    std::vector<Rational> vals;
    for (const auto& s : cert.at("alphabet")) vals.push_back(rational_from_string(s.get<std::string>()));
    auto alpha = Alphabet::from_values(vals, int(g.dim));
    std::map<std::string, Rational> pins;
    if (cert.contains("pins"))
        for (auto it = cert["pins"].begin(); it != cert["pins"].end(); ++it)
            pins[it.key()] = rational_from_string(it.value().get<std::string>());
    const std::string verdict = cert.at("verdict").get<std::string>();
    if (cert.contains("graph_hash") &&
        cert["graph_hash"].get<std::string>() != fnv1a64(export_graph(g, GraphFormat::Json))) {
        if (why) *why = "graph hash mismatch";
        return false;
    }
    if (verdict == "SAT") {
        if (!cert.contains("assignment")) {
            if (why) *why = "SAT certificate missing assignment";
            return false;
        }
        Assignment a = cert["assignment"].get<Assignment>();
        for (const auto& [k, v] : pins) {
            if (a.at(k) != v) {
                if (why) *why = "assignment contradicts pin " + k;
                return false;
            }
        }
        auto check = check_assignment(g, a, alpha);
        if (!check.ok && why) *why = "assignment violates " + check.violations.front().rule;
        return check.ok;
    }
    auto res = search_assignment(g, alpha, pins, budget);
    bool ok = verdict_name(res.verdict) == verdict;
    if (!ok && why) *why = "re-run verdict " + verdict_name(res.verdict) + " != " + verdict;
    return ok;
}

}  // namespace ksforge
