#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ksforge/corpus.hpp"
#include "ksforge/errors.hpp"
#include "ksforge/gadgets.hpp"
#include "ksforge/games.hpp"
#include "ksforge/version.hpp"

namespace ksforge {

struct StageReport {
    std::string name;
    std::string status;  // PASS | FAIL | SKIPPED
    std::string expected, got;
    double seconds = 0;
    nlohmann::json details = nlohmann::json::object();
};

struct PipelineReport {
    int schema = kReportSchema;
    std::string version = kVersion;
    std::string p;
    ToleranceBundle tol;
    std::vector<StageReport> stages;
    bool overall_ok = false;
    double total_seconds = 0;

    const StageReport* stage(const std::string& name) const {
        for (const auto& s : stages)
            if (s.name == name) return &s;
        return nullptr;
    }
};

inline void to_json(nlohmann::json& j, const StageReport& s) {
    j = {{"name", s.name},       {"status", s.status}, {"expected", s.expected},
         {"got", s.got},         {"seconds", s.seconds}, {"details", s.details}};
}

inline void to_json(nlohmann::json& j, const PipelineReport& r) {
    j = {{"schema", r.schema},
         {"version", r.version},
         {"p", r.p},
         {"tolerances",
          {{"ortho_tol", r.tol.ortho_tol}, {"norm_tol", r.tol.norm_tol}, {"root_tol", r.tol.root_tol}}},
         {"stages", nlohmann::json::array()},
         {"overall_ok", r.overall_ok},
         {"total_seconds", r.total_seconds}};
    for (const auto& s : r.stages) j["stages"].push_back(s);
}

// Gadget-certificate cache under $KSFORGE_CACHE, keyed by inputs hash.
struct CertificateCache {
    std::optional<std::filesystem::path> dir;

    CertificateCache() {
        if (const char* env = std::getenv("KSFORGE_CACHE")) {
            dir = std::filesystem::path(env);
            std::error_code ec;
            std::filesystem::create_directories(*dir, ec);
            if (ec) dir.reset();
        }
    }

    std::optional<nlohmann::json> load(const std::string& key) const {
        if (!dir) return std::nullopt;
        auto path = *dir / (key + ".json");
        std::ifstream in(path);
        if (!in) return std::nullopt;
        try {
            return nlohmann::json::parse(in);
        } catch (...) {
            return std::nullopt;
        }
    }

    void store(const std::string& key, const nlohmann::json& j) const {
        if (!dir) return;
        std::ofstream out(*dir / (key + ".json"));
        out << j.dump(2);
    }
};

struct PipelineOptions {
    Budget budget;                   // per-stage budget
    int threads = 1;                 // parallel per-p certification fan-out
    bool run_games = true;
    std::vector<Rational> p_grid = default_p_grid();
};

// Runs every stage in proof dependency order. A failed stage marks the
// stages depending on it SKIPPED; independent stages still run.
inline PipelineReport run_pipeline(const Rational& p, const PipelineOptions& opts = {},
                                   const ToleranceBundle& tol = {}) {
    PipelineReport rep;
    rep.p = rational_to_string(p);
    rep.tol = tol;
    auto t_total = std::chrono::steady_clock::now();
    CertificateCache cache;

    Alphabet::O(p, 3);  // validates p before any stage runs

    auto run_stage = [&](const std::string& name, const std::string& expected,
                         const std::vector<std::string>& deps,
                         const std::function<std::pair<std::string, nlohmann::json>()>& body) {
        StageReport sr;
        sr.name = name;
        sr.expected = expected;
        for (const auto& d : deps) {
            const auto* ds = rep.stage(d);
            if (ds && ds->status != "PASS") {
                sr.status = "SKIPPED";
                sr.got = "dependency " + d + " " + (ds ? ds->status : "missing");
                rep.stages.push_back(std::move(sr));
                return;
            }
        }
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto [got, details] = body();
            sr.got = got;
            sr.details = details;
            sr.status = (got == expected) ? "PASS" : "FAIL";
        } catch (const Error& e) {
            sr.got = std::string("error: ") + e.what();
            sr.status = "FAIL";
        }
        sr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.stages.push_back(std::move(sr));
    };

    std::optional<GadgetAngles> angles;
    std::optional<AssemblyResult> assembly;

    run_stage("lip-a", "FORBID11 certified", {}, [&] {
        auto key = "lip-a-" + fnv1a64("lip-a" + std::to_string(tol.ortho_tol));
        if (auto cached = cache.load(key))
            return std::pair{std::string("FORBID11 certified"),
                             nlohmann::json{{"cached", true}, {"certificate", *cached}}};
        auto g = build_lip_a(tol);
        nlohmann::json cert = g.certificates.front();
        cache.store(key, cert);
        return std::pair{std::string("FORBID11 certified"), nlohmann::json{{"certificate", cert}}};
    });

    run_stage("lip-b", "IMPLIES_INTERIOR certified", {"lip-a"}, [&] {
        auto g = build_lip_b(tol);
        return std::pair{std::string("IMPLIES_INTERIOR certified"),
                         nlohmann::json{{"certificate", g.certificates.front()}}};
    });

    run_stage("s1", "ONE_EXCLUDED certified", {"lip-b"}, [&] {
        auto grid = opts.p_grid;
        if (std::find(grid.begin(), grid.end(), p) == grid.end()) grid.push_back(p);
        auto g = build_s1(normalize({1, 0, 0}, "e1", tol), tol, grid);
        return std::pair{std::string("ONE_EXCLUDED certified"),
                         nlohmann::json{{"certificate", g.certificates.front()}}};
    });

    run_stage("s2", "ZERO_TRIPLE_FORCED certified", {}, [&] {
        auto g = build_s2(M_PI / 3, tol);
        auto grid = opts.p_grid;
        if (std::find(grid.begin(), grid.end(), p) == grid.end()) grid.push_back(p);
        nlohmann::json counts = nlohmann::json::array();
        if (opts.threads > 1) {
            std::vector<std::future<std::size_t>> futs;
            std::vector<Gadget> copies(grid.size(), g);
            for (std::size_t i = 0; i < grid.size(); ++i)
                futs.push_back(std::async(std::launch::async,
                                          [&, i] { return certify_s2_triples(copies[i], grid[i]); }));
            for (std::size_t i = 0; i < grid.size(); ++i)
                counts.push_back({{"p", rational_to_string(grid[i])},
                                  {"valid_assignments", futs[i].get()}});
        } else {
            for (const auto& pp : grid)
                counts.push_back({{"p", rational_to_string(pp)},
                                  {"valid_assignments", certify_s2_triples(g, pp)}});
        }
        return std::pair{std::string("ZERO_TRIPLE_FORCED certified"),
                         nlohmann::json{{"runs", counts}}};
    });

    run_stage("angles", "residuals within tolerance", {}, [&] {
        angles = solve_s3_angles(M_PI / 3, tol);
        auto res = s3_angle_residuals(*angles);
        double worst = 0;
        for (double r : res) worst = std::max(worst, std::abs(r));
        nlohmann::json j = {{"angles", *angles}, {"worst_residual", worst}};
        return std::pair{std::string(worst <= tol.root_tol ? "residuals within tolerance"
                                                           : "residuals too large"),
                         j};
    });

    run_stage("s3-cases", "ZERO_TRIPLE_CONTRADICTION certified", {"angles"}, [&] {
        auto grid = opts.p_grid;
        if (std::find(grid.begin(), grid.end(), p) == grid.end()) grid.push_back(p);
        auto g = build_s3(*angles, tol, grid);
        return std::pair{std::string("ZERO_TRIPLE_CONTRADICTION certified"),
                         nlohmann::json{{"certificate", g.certificates.front()}}};
    });

    run_stage("s3-minimal", "ZERO_TRIPLE_CONTRADICTION certified", {"angles"}, [&] {
        auto g = build_s3_minimal(*angles, tol);
        return std::pair{std::string("ZERO_TRIPLE_CONTRADICTION certified"),
                         nlohmann::json{{"certificate", g.certificates.front()}}};
    });

    run_stage("assembly", "UNSAT", {"s1", "s2", "s3-cases"}, [&] {
        assembly = assemble_gks(p, opts.budget, GadgetPolicy::TypedEdges, tol);
        nlohmann::json j = {{"rays", assembly->gadget.set.size()},
                            {"bases", assembly->gadget.graph.bases.size()},
                            {"warning", assembly->warning},
                            {"nodes", assembly->solve.stats.nodes},
                            {"witness_zero_rays", assembly->witness_zero_rays}};
        if (assembly->solve.verdict == Verdict::Sat && assembly->solve.certificate)
            j["witness"] = *assembly->solve.certificate;
        return std::pair{verdict_name(assembly->solve.verdict), j};
    });

    if (opts.run_games) {
        run_stage("games", "refuted for classical and box-augmented players", {"assembly"}, [&] {
            auto completed = complete_bases(assembly->gadget.set, tol);
            auto game = build_pt_game(completed, tol);
            // carry the one-exclusion constraints onto the completed graph
            for (std::size_t i = 0; i < game.graph.vertices.size(); ++i)
                game.graph.one_excluded.insert(i);
            bool quantum_ok = quantum_value_check(game);
            auto classical = refute_classical(game, RefuteMode::Coloring, opts.budget);
            auto pr = refute_pr_augmented(game, opts.budget);
            nlohmann::json j = {{"inputs", game.inputs.size()},
                                {"quantum_value_one", quantum_ok},
                                {"classical_perfect", classical.perfect()},
                                {"pr_outcome", pr.outcome == StrategyOutcome::NotPerfect
                                                   ? "NOT_PERFECT"
                                                   : (pr.outcome == StrategyOutcome::Perfect
                                                          ? "PERFECT"
                                                          : "NOT_REFUTED")}};
            std::string got = (quantum_ok && !classical.perfect() &&
                               pr.outcome == StrategyOutcome::NotPerfect)
                                  ? "refuted for classical and box-augmented players"
                                  : "pseudo-telepathy refutation incomplete";
            return std::pair{got, j};
        });
    }

    rep.overall_ok = true;
    for (const auto& s : rep.stages)
        if (s.status != "PASS") rep.overall_ok = false;
    rep.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_total).count();
    return rep;
}

}  // namespace ksforge
