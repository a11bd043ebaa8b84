#pragma once

#include <functional>
#include <string>

#include <httplib.h>

#include "sketchmo/session.hpp"

namespace sketchmo {

inline int http_status_for(const Error& e) {
    const std::string& k = e.kind();
    if (k == "lookup") return 404;
    if (k == "state" || k == "assignment_conflict") return 409;
    if (k == "parse" || k == "structure") return 400;
    return 422;
}

inline CameraAction camera_action_from_json(const json& j) {
    const std::string action = j.at("action").get<std::string>();
    if (action == "pan") return Pan{vec3_from_json(j.at("delta"))};
    if (action == "zoom") return Zoom{j.at("factor").get<double>()};
    if (action == "orbit") return Orbit{j.value("azimuth", 0.0), j.value("elevation", 0.0)};
    if (action == "set_radius") return SetRadius{j.at("radius").get<double>()};
    throw ConfigError("unknown camera action '" + action + "'");
}

// Registers the session API on `server`. `default_dataset` is used when a
// create request names no dataset.
inline void install_routes(httplib::Server& server, SessionManager& manager, std::string default_dataset = "default") {
    using httplib::Request;
    using httplib::Response;

    auto send_json = [](Response& res, const json& body, int status = 200) {
        res.status = status;
        res.set_content(body.dump(), "application/json");
    };

    // Wraps a handler with error-to-status translation.
    auto guarded = [send_json](std::function<void(const Request&, Response&)> fn) {
        return [fn, send_json](const Request& req, Response& res) {
            try {
                fn(req, res);
            } catch (const Error& e) {
                send_json(res, {{"error", e.kind()}, {"reason", e.what()}}, http_status_for(e));
            } catch (const json::exception& e) {
                send_json(res, {{"error", "bad_request"}, {"reason", e.what()}}, 400);
            } catch (const std::exception& e) {
                send_json(res, {{"error", "internal"}, {"reason", e.what()}}, 500);
            }
        };
    };

    auto body_of = [](const Request& req) { return req.body.empty() ? json::object() : json::parse(req.body); };

    server.Post("/sessions", guarded([&manager, default_dataset, body_of, send_json](const Request& req, Response& res) {
        const json body = body_of(req);
        send_json(res, manager.create_session(body.value("dataset", default_dataset)), 201);
    }));

    server.Get(R"(/sessions/([^/]+))", guarded([&manager, send_json](const Request& req, Response& res) {
        send_json(res, manager.with_session(req.matches[1], [](Session& s) { return s.to_json(); }));
    }));

    server.Post(R"(/sessions/([^/]+)/camera)",
                guarded([&manager, body_of, send_json](const Request& req, Response& res) {
                    const json body = body_of(req);
                    const json cam = manager.with_session(req.matches[1], [&](Session& s) {
                        if (body.value("action", std::string()) == "set")
                            return camera_to_json(s.set_camera(camera_from_json(body.at("camera"), s.camera())));
                        return camera_to_json(s.update_camera(camera_action_from_json(body)));
                    });
                    send_json(res, cam);
                }));

    server.Post(R"(/sessions/([^/]+)/stroke)",
                guarded([&manager, body_of, send_json](const Request& req, Response& res) {
                    const json body = body_of(req);
                    const auto points = stroke_points_from_json(body.at("points"));
                    const json out = manager.with_session(req.matches[1], [&](Session& s) {
                        const CameraMode stage =
                            body.contains("stage") ? camera_mode_from_string(body.at("stage").get<std::string>())
                                                   : s.stage();
                        std::optional<Role> role;
                        if (body.contains("role") && !body.at("role").is_null())
                            role = parse_role(body.at("role").get<std::string>());
                        const PendingQuery& q =
                            s.submit_stroke(points, stage, role, body.value("top", kDefaultTopN));
                        return json{{"stage", std::string(to_string(q.stage))},
                                    {"role", std::string(to_string(q.role))},
                                    {"candidates", candidates_to_json(q.candidates)},
                                    {"guidance", guidance_to_json(shadow_guidance(q.candidates))}};
                    });
                    send_json(res, out);
                }));

    server.Post(R"(/sessions/([^/]+)/select)",
                guarded([&manager, body_of, send_json](const Request& req, Response& res) {
                    const json body = body_of(req);
                    const std::size_t rank = body.at("rank").get<std::size_t>();
                    send_json(res, manager.with_session(req.matches[1], [&](Session& s) {
                        return composition_to_json(s.select(rank));
                    }));
                }));

    server.Post(R"(/sessions/([^/]+)/stage)",
                guarded([&manager, body_of, send_json](const Request& req, Response& res) {
                    const json body = body_of(req);
                    const CameraMode stage = camera_mode_from_string(body.at("stage").get<std::string>());
                    send_json(res, manager.with_session(req.matches[1], [&](Session& s) {
                        s.set_stage(stage);
                        return s.to_json();
                    }));
                }));

    server.Post(R"(/sessions/([^/]+)/undo)", guarded([&manager, send_json](const Request& req, Response& res) {
        send_json(res, manager.with_session(req.matches[1], [](Session& s) {
            s.undo();
            return s.to_json();
        }));
    }));

    server.Get(R"(/sessions/([^/]+)/export)", guarded([&manager](const Request& req, Response& res) {
        const std::string id = req.matches[1];
        const std::string bvh = manager.with_session(id, [](Session& s) { return s.export_bvh(); });
        res.set_header("Content-Disposition", "attachment; filename=\"" + id + ".bvh\"");
        res.set_content(bvh, "text/plain");
    }));

    server.Get(R"(/sessions/([^/]+)/timeline)", guarded([&manager, send_json](const Request& req, Response& res) {
        std::size_t k = 10;
        if (req.has_param("k")) {
            const std::string v = req.get_param_value("k");
            std::size_t parsed = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
            if (ec != std::errc() || ptr != v.data() + v.size()) throw QueryError("k must be a positive integer");
            k = parsed;
        }
        send_json(res, manager.with_session(req.matches[1], [&](Session& s) {
            return timeline_to_json(s.timeline(k), s.composed().skeleton());
        }));
    }));

    server.Get("/dataset/entries", guarded([&manager, default_dataset, send_json](const Request& req, Response& res) {
        const std::string id = req.has_param("dataset") ? req.get_param_value("dataset") : default_dataset;
        const auto index = manager.dataset(id);
        json entries = json::array();
        for (const DatasetEntry& e : index->entries)
            entries.push_back({{"id", e.id}, {"label", e.label}, {"source", e.source}, {"frames", e.motion.frame_count()}});
        send_json(res, {{"dataset", id}, {"frames", index->frames()}, {"entries", entries}});
    }));
}

}  // namespace sketchmo
