#pragma once

#include <atomic>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "sketchmo/bvh.hpp"
#include "sketchmo/composer.hpp"
#include "sketchmo/retrieval.hpp"

namespace sketchmo {

// Candidates from the latest stroke, waiting for a selection.
struct PendingQuery {
    CameraMode stage = CameraMode::global;
    Role role = Role::root;
    std::vector<Candidate> candidates;
};

struct HistoryItem {
    std::string action;  // "stroke", "select", "stage", "undo"
    json detail;
};

struct Timeline {
    std::size_t step = 0;
    std::vector<std::size_t> frames;
    std::vector<Pose> poses;
};

// One two-stage design session over a shared, immutable dataset. Not
// thread-safe; SessionManager serializes access per session.
class Session {
public:
    Session(std::string id, std::string dataset_id, std::shared_ptr<const DatasetIndex> index)
        : id_(std::move(id)), dataset_id_(std::move(dataset_id)), index_(std::move(index)) {
        if (!index_ || index_->entries.empty()) throw LookupError("dataset '" + dataset_id_ + "' is empty");
        character_height_ = rest_height(index_->entries.front().motion.skeleton());
        global_camera_ = default_global_camera(character_height_);
    }

    const std::string& id() const { return id_; }
    const std::string& dataset_id() const { return dataset_id_; }
    const DatasetIndex& index() const { return *index_; }
    CameraMode stage() const { return stage_; }
    const CompositionState& composition() const { return composition_; }
    const std::optional<PendingQuery>& pending() const { return pending_; }
    const std::vector<HistoryItem>& history() const { return history_; }
    std::size_t undo_depth() const { return undo_.size(); }

    const Camera& camera() const { return stage_ == CameraMode::local ? *local_camera_ : global_camera_; }

    Camera set_camera(const Camera& c) {
        validate(c);
        if (c.mode != stage_) throw ConfigError("camera mode does not match the session stage");
        active_camera() = c;
        return c;
    }

    Camera update_camera(const CameraAction& action) { return active_camera() = sketchmo::update_camera(camera(), action); }

    // Runs a retrieval for the current stage and keeps the candidates for select().
    const PendingQuery& submit_stroke(std::span<const Vec2> raw, CameraMode stage, std::optional<Role> role,
                                      std::size_t top_n = kDefaultTopN) {
        if (stage != stage_)
            throw StateError("stroke is for the " + std::string(to_string(stage)) + " stage but the session is in " +
                             std::string(to_string(stage_)));
        if (stage == CameraMode::local && !composition_.global_id)
            throw StateError("select a global motion before sketching limbs");
        RetrievalConfig cfg;
        cfg.top_n = top_n;
        cfg.samples = kDefaultSamples;
        cfg.stage = stage;
        cfg.target = stage == CameraMode::local ? role : std::nullopt;
        if (stage == CameraMode::local && !role) throw QueryError("local strokes need a target role");
        const Stroke2D stroke = resample_stroke(raw, cfg.samples);
        auto candidates = query(stroke, camera(), *index_, cfg);

        push_undo("stroke", {{"stage", std::string(to_string(stage))},
                             {"role", std::string(to_string(cfg.role()))},
                             {"points", raw.size()}});
        pending_ = PendingQuery{stage, cfg.role(), std::move(candidates)};
        return *pending_;
    }

    const CompositionState& select(std::size_t rank) {
        if (!pending_ || pending_->candidates.empty()) throw StateError("no pending candidates to select from");
        if (pending_->stage != stage_) throw StateError("pending candidates belong to another stage");
        if (rank < 1 || rank > pending_->candidates.size())
            throw QueryError("rank " + std::to_string(rank) + " is outside 1.." +
                             std::to_string(pending_->candidates.size()));
        const Candidate& c = pending_->candidates[rank - 1];
        CompositionState next = composition_;
        if (pending_->stage == CameraMode::global)
            next.global_id = c.motion_id;
        else
            next.assignments[pending_->role] = c.motion_id;
        next = recompose(std::move(next), *index_);

        push_undo("select", {{"rank", rank}, {"motion_id", c.motion_id}, {"role", std::string(to_string(c.role))}});
        composition_ = std::move(next);
        if (pending_->stage == CameraMode::global) retarget_local_camera();
        return composition_;
    }

    void set_stage(CameraMode stage) {
        if (stage == stage_) return;
        if (stage == CameraMode::local && !composition_.global_id)
            throw StateError("the local stage opens after a global motion is selected");
        push_undo("stage", {{"stage", std::string(to_string(stage))}});
        stage_ = stage;
        if (stage_ == CameraMode::local && !local_camera_) retarget_local_camera();
    }

    void undo() {
        if (undo_.empty()) throw StateError("nothing to undo");
        Snapshot s = std::move(undo_.back());
        undo_.pop_back();
        stage_ = s.stage;
        composition_ = std::move(s.composition);
        pending_ = std::move(s.pending);
        history_.push_back({"undo", {{"restored", s.action}}});
    }

    const Motion& composed() const {
        if (!composition_.result) throw StateError("no global motion selected");
        return *composition_.result;
    }

    std::string export_bvh() const { return write_bvh(composed()); }

    Timeline timeline(std::size_t step) const {
        if (step < 1) throw QueryError("timeline step must be at least 1");
        const Motion& m = composed();
        Timeline t;
        t.step = step;
        for (std::size_t f = 0; f < m.frame_count(); f += step) {
            t.frames.push_back(f);
            t.poses.push_back(forward_kinematics(m, f));
        }
        return t;
    }

    json to_json() const {
        json hist = json::array();
        for (const auto& h : history_) hist.push_back({{"action", h.action}, {"detail", h.detail}});
        json pending = nullptr;
        if (pending_)
            pending = {{"stage", std::string(to_string(pending_->stage))},
                       {"role", std::string(to_string(pending_->role))},
                       {"candidates", candidates_to_json(pending_->candidates)}};
        return {{"id", id_},
                {"dataset", dataset_id_},
                {"stage", std::string(to_string(stage_))},
                {"camera", camera_to_json(camera())},
                {"cameras",
                 {{"global", camera_to_json(global_camera_)},
                  {"local", local_camera_ ? camera_to_json(*local_camera_) : json(nullptr)}}},
                {"composition", composition_to_json(composition_)},
                {"pending", pending},
                {"history", hist},
                {"operations", history_.size()},
                {"undo_depth", undo_.size()}};
    }

    // Rebuilds a session from to_json() output. The undo stack is not part of
    // a snapshot.
    static Session from_json(const json& j, std::shared_ptr<const DatasetIndex> index) {
        Session s(j.at("id").get<std::string>(), j.at("dataset").get<std::string>(), std::move(index));
        s.global_camera_ = camera_from_json(j.at("cameras").at("global"));
        if (!j.at("cameras").at("local").is_null()) s.local_camera_ = camera_from_json(j.at("cameras").at("local"));
        s.stage_ = camera_mode_from_string(j.at("stage").get<std::string>());
        if (s.stage_ == CameraMode::local && !s.local_camera_) throw StateError("local snapshot lacks a local camera");
        s.composition_ = recompose(composition_from_json(j.at("composition")), *s.index_);
        if (!j.at("pending").is_null()) {
            const json& p = j.at("pending");
            PendingQuery q;
            q.stage = camera_mode_from_string(p.at("stage").get<std::string>());
            q.role = parse_role(p.at("role").get<std::string>());
            for (const json& c : p.at("candidates")) {
                Candidate cand;
                cand.motion_id = c.at("motion_id").get<std::string>();
                cand.role = parse_role(c.at("joint_role").get<std::string>());
                cand.similarity = c.at("similarity").get<double>();
                cand.rank = c.at("rank").get<std::size_t>();
                cand.polyline.motion_id = cand.motion_id;
                cand.polyline.role = cand.role;
                for (const json& pt : c.at("polyline")) {
                    cand.polyline.valid.push_back(!pt.is_null());
                    cand.polyline.points.push_back(pt.is_null() ? Vec2(std::nan(""), std::nan("")) : vec2_from_json(pt));
                }
                q.candidates.push_back(std::move(cand));
            }
            s.pending_ = std::move(q);
        }
        for (const json& h : j.at("history"))
            s.history_.push_back({h.at("action").get<std::string>(), h.at("detail")});
        return s;
    }

private:
    struct Snapshot {
        std::string action;
        CameraMode stage;
        CompositionState composition;
        std::optional<PendingQuery> pending;
    };

    Camera& active_camera() { return stage_ == CameraMode::local ? *local_camera_ : global_camera_; }

    void push_undo(std::string action, json detail) {
        undo_.push_back({action, stage_, composition_, pending_});
        history_.push_back({std::move(action), std::move(detail)});
    }

    // The local camera orbits the selected global motion's first-frame root.
    void retarget_local_camera() {
        const Vec3 reference = index_->at(*composition_.global_id).trajectory(Role::root).front();
        if (!local_camera_) {
            local_camera_ = default_local_camera(reference, character_height_);
        } else {
            local_camera_->target = reference;
            place_on_orbit(*local_camera_);
        }
    }

    std::string id_;
    std::string dataset_id_;
    std::shared_ptr<const DatasetIndex> index_;
    double character_height_ = 1.0;
    CameraMode stage_ = CameraMode::global;
    Camera global_camera_;
    std::optional<Camera> local_camera_;
    CompositionState composition_;
    std::optional<PendingQuery> pending_;
    std::vector<HistoryItem> history_;
    std::vector<Snapshot> undo_;
};

inline json timeline_to_json(const Timeline& t, const Skeleton& sk) {
    json joints = json::array();
    json parents = json::array();
    for (const Joint& j : sk.joints()) {
        joints.push_back(j.name);
        parents.push_back(j.parent ? json(*j.parent) : json(nullptr));
    }
    json poses = json::array();
    for (const Pose& p : t.poses) poses.push_back(points_to_json(p.positions));
    return {{"k", t.step}, {"frames", t.frames}, {"joints", joints}, {"parents", parents}, {"poses", poses}};
}

// Owns datasets and sessions. Each session is guarded by its own mutex, so
// actions on one session are serialized while different sessions proceed
// concurrently.
class SessionManager {
public:
    void add_dataset(std::string id, std::shared_ptr<const DatasetIndex> index) {
        std::unique_lock lock(mutex_);
        datasets_[std::move(id)] = std::move(index);
    }

    std::shared_ptr<const DatasetIndex> dataset(const std::string& id) const {
        std::shared_lock lock(mutex_);
        auto it = datasets_.find(id);
        if (it == datasets_.end()) throw LookupError("unknown dataset '" + id + "'");
        return it->second;
    }

    json create_session(const std::string& dataset_id) {
        auto index = dataset(dataset_id);
        char buf[32];
        std::snprintf(buf, sizeof buf, "s%06llu", static_cast<unsigned long long>(++counter_));
        auto slot = std::make_shared<Slot>(Session(buf, dataset_id, std::move(index)));
        json out = slot->session.to_json();
        std::unique_lock lock(mutex_);
        sessions_.emplace(buf, std::move(slot));
        return out;
    }

    json restore(const json& snapshot) {
        auto index = dataset(snapshot.at("dataset").get<std::string>());
        auto slot = std::make_shared<Slot>(Session::from_json(snapshot, std::move(index)));
        json out = slot->session.to_json();
        std::unique_lock lock(mutex_);
        sessions_[slot->session.id()] = std::move(slot);
        return out;
    }

    // Runs fn(Session&) while holding the session's lock.
    template <class Fn>
    auto with_session(const std::string& id, Fn&& fn) {
        std::shared_ptr<Slot> slot;
        {
            std::shared_lock lock(mutex_);
            auto it = sessions_.find(id);
            if (it == sessions_.end()) throw LookupError("unknown session '" + id + "'");
            slot = it->second;
        }
        std::lock_guard lock(slot->mutex);
        return fn(slot->session);
    }

private:
    struct Slot {
        explicit Slot(Session s) : session(std::move(s)) {}
        std::mutex mutex;
        Session session;
    };

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<const DatasetIndex>> datasets_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
    std::atomic<unsigned long long> counter_{0};
};

}  // namespace sketchmo
