#pragma once

// Command-line front end. Exit codes: 0 success, 1 data error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sketchmo/bench.hpp"
#include "sketchmo/composer.hpp"
#include "sketchmo/evaluator.hpp"
#include "sketchmo/retrieval.hpp"

namespace sketchmo::cli {

inline constexpr int kOk = 0;
inline constexpr int kDataError = 1;
inline constexpr int kUsageError = 2;

// Raised for bad flag combinations detected after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct BuildArgs {
    std::string input, roles, out;
    std::size_t frames = 0;
};

inline int cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    DatasetConfig cfg = config_from_json(read_json_file(a.roles));
    if (a.frames) cfg.frames = a.frames;
    BuildReport report;
    try {
        report = build_index(a.input, cfg);
    } catch (const BuildError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    save_index(report.index, a.out);
    out << report.index.entries.size() << " entries\n";
    for (const auto& s : report.skipped) out << "skipped " << s.file << ": " << s.reason << '\n';
    return kOk;
}

struct QueryArgs {
    std::string index, stroke, camera, stage = "global", role;
    std::size_t top = kDefaultTopN;
    bool as_json = false;
};

inline int cmd_query(const QueryArgs& a, std::ostream& out, std::ostream&) {
    const CameraMode stage = a.stage == "local" ? CameraMode::local : CameraMode::global;
    RetrievalConfig cfg;
    cfg.stage = stage;
    cfg.top_n = a.top;
    if (stage == CameraMode::local) {
        if (a.role.empty()) throw UsageError("--stage local requires --role");
        const auto r = role_from_string(a.role);
        if (!r || !is_limb(*r)) throw UsageError("--role must be head, left_hand or right_hand");
        cfg.target = r;
    } else if (!a.role.empty() && a.role != "root") {
        throw UsageError("--role applies to --stage local only");
    }

    Stroke2D stroke;
    {
        const json j = read_json_file(a.stroke);
        try {
            stroke = resample_stroke(stroke_points_from_json(j.is_object() ? j.at("points") : j), cfg.samples);
        } catch (const Error& e) {
            throw UsageError(std::string("bad stroke file: ") + e.what());
        } catch (const json::exception& e) {
            throw UsageError(std::string("bad stroke file: ") + e.what());
        }
    }

    const DatasetIndex index = load_index(a.index);
    if (index.entries.empty()) throw QueryError("index is empty");
    const double height = rest_height(index.entries.front().motion.skeleton());
    Camera cam = stage == CameraMode::global ? default_global_camera(height)
                                             : default_local_camera(Vec3::Zero(), height);
    if (!a.camera.empty()) cam = camera_from_json(read_json_file(a.camera), cam);
    if (cam.mode != stage) throw UsageError("camera mode does not match --stage");

    const auto candidates = query(stroke, cam, index, cfg);
    if (a.as_json) {
        out << candidates_to_json(candidates).dump(2) << '\n';
    } else {
        out << "rank  motion_id             role        similarity\n";
        for (const auto& c : candidates) {
            char line[160];
            std::snprintf(line, sizeof line, "%-5zu %-21s %-11s %s\n", c.rank, c.motion_id.c_str(),
                          std::string(to_string(c.role)).c_str(), fixed(c.similarity).c_str());
            out << line;
        }
    }
    return kOk;
}

struct ComposeArgs {
    std::string index, global, out;
    std::vector<std::string> assign;
};

inline int cmd_compose(const ComposeArgs& a, std::ostream& out, std::ostream&) {
    std::vector<LimbAssignment> list;
    std::map<Role, std::string> seen;
    for (const std::string& s : a.assign) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--assign expects role=ID, got '" + s + "'");
        const auto role = role_from_string(s.substr(0, eq));
        if (!role || !is_limb(*role)) throw UsageError("unknown limb role in '" + s + "'");
        if (!seen.emplace(*role, s.substr(eq + 1)).second)
            throw UsageError("role '" + std::string(to_string(*role)) + "' assigned more than once");
        list.push_back({*role, s.substr(eq + 1)});
    }
    const DatasetIndex index = load_index(a.index);
    const Motion result = compose(index.at(a.global).motion, list, index);
    save_bvh(result, a.out);
    out << "wrote " << a.out << " (" << result.frame_count() << " frames, " << list.size() << " assignments)\n";
    return kOk;
}

struct EvalArgs {
    std::string designed, reference;
    bool wrap = false;
    bool as_json = false;
    std::size_t top = 5;
};

inline int cmd_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
    const Motion designed = load_bvh(a.designed);
    const Motion reference = load_bvh(a.reference);
    EvalReport r;
    try {
        r = mse(designed, reference, EvalOptions{a.wrap});
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    if (a.as_json) {
        json j = report_to_json(r);
        j["motion_id"] = designed.id();
        j["reference_id"] = reference.id();
        out << j.dump(2) << '\n';
        return kOk;
    }
    out << "motion_id             mse\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-21s %s\n", designed.id().c_str(), fixed(r.mse).c_str());
    out << line << "top joints:\n";
    for (const auto& j : top_offenders(r, a.top)) {
        std::snprintf(line, sizeof line, "  %-19s %s\n", j.joint.c_str(), fixed(j.mse).c_str());
        out << line;
    }
    return kOk;
}

struct BenchArgs {
    std::string index;
    std::size_t queries = 100;
    bool as_json = false;
};

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream&) {
    const DatasetIndex index = load_index(a.index);
    const BenchResult r = run_benchmark(index, a.queries);
    if (a.as_json) {
        out << json{{"queries", r.queries}, {"entries", r.entries}, {"mean_s", r.mean_s}, {"median_s", r.median_s},
                    {"p95_s", r.p95_s}, {"max_s", r.max_s}}
                   .dump(2)
            << '\n';
    } else {
        out << r.queries << " queries over " << r.entries << " entries\n"
            << "mean   " << fixed(r.mean_s * 1e3, 3) << " ms\n"
            << "median " << fixed(r.median_s * 1e3, 3) << " ms\n"
            << "p95    " << fixed(r.p95_s * 1e3, 3) << " ms\n";
    }
    return kOk;
}

// Hook for the `serve` subcommand; the server lives in the tool so that the
// core header does not pull in the HTTP library.
using ServeFn = std::function<int(const std::string& index, const std::string& host, int port)>;

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, ServeFn serve = {}) {
    CLI::App app{"Sketch-driven motion retrieval and composition"};
    app.require_subcommand(1);

    BuildArgs build;
    auto* b = app.add_subcommand("build", "Build a dataset index from a directory of BVH files");
    b->add_option("--input", build.input, "Directory of .bvh files")->required();
    b->add_option("--roles", build.roles, "Role mapping JSON")->required();
    b->add_option("--frames", build.frames, "Frames per entry (overrides the roles file)");
    b->add_option("--out", build.out, "Index file to write")->required();

    QueryArgs q;
    auto* qc = app.add_subcommand("query", "Rank index entries against a stroke");
    qc->add_option("--index", q.index)->required();
    qc->add_option("--stroke", q.stroke, "JSON [[x,y],...]")->required();
    qc->add_option("--camera", q.camera, "Camera JSON (defaults to the stage camera)");
    qc->add_option("--stage", q.stage)->check(CLI::IsMember({"global", "local"}));
    qc->add_option("--role", q.role);
    qc->add_option("--top", q.top)->check(CLI::PositiveNumber);
    qc->add_flag("--json", q.as_json);

    ComposeArgs c;
    auto* cc = app.add_subcommand("compose", "Graft limb motions onto a global motion");
    cc->add_option("--index", c.index)->required();
    cc->add_option("--global", c.global)->required();
    cc->add_option("--assign", c.assign, "role=ID, repeatable");
    cc->add_option("--out", c.out)->required();

    EvalArgs e;
    auto* ec = app.add_subcommand("eval", "Mean squared Euler-angle error between two motions");
    ec->add_option("--designed", e.designed)->required();
    ec->add_option("--reference", e.reference)->required();
    ec->add_flag("--wrap", e.wrap, "Fold angle differences into [-180, 180]");
    ec->add_option("--top", e.top, "Joints listed in the table");
    ec->add_flag("--json", e.as_json);

    BenchArgs bench;
    auto* bc = app.add_subcommand("bench", "Measure global query latency");
    bc->add_option("--index", bench.index)->required();
    bc->add_option("--queries", bench.queries)->check(CLI::PositiveNumber);
    bc->add_flag("--json", bench.as_json);

    std::string serve_index, host = "127.0.0.1";
    int port = 8080;
    auto* sc = app.add_subcommand("serve", "Run the HTTP session service");
    sc->add_option("--index", serve_index)->required();
    sc->add_option("--host", host);
    sc->add_option("--port", port);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        const int code = app.exit(pe, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*b) return cmd_build(build, out, err);
        if (*qc) return cmd_query(q, out, err);
        if (*cc) return cmd_compose(c, out, err);
        if (*ec) return cmd_eval(e, out, err);
        if (*bc) return cmd_bench(bench, out, err);
        if (*sc) {
            if (!serve) throw UsageError("serve is not available in this build");
            return serve(serve_index, host, port);
        }
    } catch (const UsageError& ue) {
        err << "usage error: " << ue.what() << '\n';
        return kUsageError;
    } catch (const Error& de) {
        err << "error: " << de.what() << '\n';
        return kDataError;
    } catch (const json::exception& je) {
        err << "error: " << je.what() << '\n';
        return kDataError;
    }
    return kUsageError;
}

}  // namespace sketchmo::cli
