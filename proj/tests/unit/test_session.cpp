#include <gtest/gtest.h>

#include "sketchmo/evaluator.hpp"
#include "sketchmo/session.hpp"
#include "support/fixtures.hpp"

using namespace sketchmo;

namespace {

std::shared_ptr<const DatasetIndex> shared_index() {
    static const auto index = std::make_shared<const DatasetIndex>(fixtures::corpus_index());
    return index;
}

// Projected root path of `id` under the session's camera, used as a stroke.
std::vector<Vec2> stroke_for(const Session& s, const std::string& id, Role role = Role::root) {
    return project_trajectory(s.camera(), s.index().at(id).trajectory(role)).valid_points();
}

}  // namespace

TEST(Session, StartsInGlobalStage) {
    Session s("s1", "default", shared_index());
    EXPECT_EQ(s.stage(), CameraMode::global);
    EXPECT_TRUE(s.composition().empty());
    EXPECT_EQ(s.camera().mode, CameraMode::global);
    EXPECT_THROW(s.composed(), StateError);
    EXPECT_THROW(s.export_bvh(), StateError);
    EXPECT_THROW(s.select(1), StateError);
    EXPECT_THROW(s.undo(), StateError);
}

TEST(Session, LocalRequiresGlobalSelection) {
    Session s("s1", "default", shared_index());
    const std::vector<Vec2> pts{{100, 100}, {200, 120}};
    EXPECT_THROW(s.submit_stroke(pts, CameraMode::local, Role::left_hand), StateError);
    EXPECT_THROW(s.set_stage(CameraMode::local), StateError);
    EXPECT_EQ(s.undo_depth(), 0u);
}

TEST(Session, GlobalThenLocalLoop) {
    Session s("s1", "default", shared_index());
    const auto& q = s.submit_stroke(stroke_for(s, "run_03"), CameraMode::global, std::nullopt);
    ASSERT_EQ(q.candidates.size(), 5u);
    EXPECT_EQ(q.candidates[0].motion_id, "run_03");
    s.select(1);
    EXPECT_EQ(s.composition().global_id, std::optional<std::string>("run_03"));
    EXPECT_TRUE(s.composed() == s.index().at("run_03").motion);

    // Stroke for the wrong stage is refused.
    EXPECT_THROW(s.submit_stroke(stroke_for(s, "run_03"), CameraMode::local, Role::head), StateError);

    s.set_stage(CameraMode::local);
    EXPECT_EQ(s.camera().mode, CameraMode::local);
    EXPECT_EQ(s.camera().target, s.index().at("run_03").trajectory(Role::root).front());
    EXPECT_THROW(s.submit_stroke(stroke_for(s, "punch_02", Role::left_hand), CameraMode::local, std::nullopt),
                 QueryError);

    const auto& local = s.submit_stroke(stroke_for(s, "punch_02", Role::left_hand), CameraMode::local, Role::left_hand);
    ASSERT_FALSE(local.candidates.empty());
    for (const auto& c : local.candidates) EXPECT_EQ(c.role, Role::left_hand);
    EXPECT_EQ(local.candidates[0].motion_id, "punch_02");

    const CompositionState before = s.composition();
    const Motion before_motion = s.composed();
    s.select(1);
    EXPECT_EQ(s.composition().assignments.at(Role::left_hand), "punch_02");

    // Left-shoulder subtree comes from the source, every other channel from the global motion.
    const Motion& out = s.composed();
    const Skeleton& sk = out.skeleton();
    const auto arm = sk.subtree(sk.index_of("LeftShoulder"));
    const Motion& src = s.index().at("punch_02").motion;
    for (std::size_t j = 0; j < sk.size(); ++j) {
        const bool grafted = std::find(arm.begin(), arm.end(), j) != arm.end();
        for (std::size_t c = 0; c < sk.joint(j).channels.size(); ++c) {
            const auto col = static_cast<Eigen::Index>(sk.channel_offset(j) + c);
            EXPECT_TRUE(out.frames().col(col) == (grafted ? src : before_motion).frames().col(col));
        }
    }

    s.undo();
    EXPECT_EQ(s.composition(), before);
    EXPECT_TRUE(s.composed() == before_motion);
    EXPECT_EQ(s.stage(), CameraMode::local);
    ASSERT_TRUE(s.pending());
    EXPECT_EQ(s.pending()->role, Role::left_hand);
}

TEST(Session, UndoWalksBackToTheStart) {
    Session s("s1", "default", shared_index());
    s.submit_stroke(stroke_for(s, "walk_02"), CameraMode::global, std::nullopt);
    s.select(1);
    s.set_stage(CameraMode::local);
    s.submit_stroke(stroke_for(s, "kick_01", Role::head), CameraMode::local, Role::head);
    s.select(2);
    EXPECT_EQ(s.undo_depth(), 5u);
    while (s.undo_depth() > 0) s.undo();
    EXPECT_TRUE(s.composition().empty());
    EXPECT_EQ(s.stage(), CameraMode::global);
    EXPECT_FALSE(s.pending());
    EXPECT_EQ(s.history().size(), 10u);
}

TEST(Session, SelectRankBounds) {
    Session s("s1", "default", shared_index());
    s.submit_stroke(stroke_for(s, "walk_01"), CameraMode::global, std::nullopt, 3);
    EXPECT_THROW(s.select(0), QueryError);
    EXPECT_THROW(s.select(4), QueryError);
    EXPECT_NO_THROW(s.select(3));
}

TEST(Session, DegenerateStrokeRejected) {
    Session s("s1", "default", shared_index());
    const std::vector<Vec2> dot{{5, 5}, {5, 5}};
    EXPECT_THROW(s.submit_stroke(dot, CameraMode::global, std::nullopt), DegenerateStrokeError);
    EXPECT_EQ(s.undo_depth(), 0u);
}

TEST(Session, ExportRoundTripsToZeroError) {
    Session s("s1", "default", shared_index());
    s.submit_stroke(stroke_for(s, "jump_02"), CameraMode::global, std::nullopt);
    s.select(1);
    EXPECT_EQ(s.export_bvh(), write_bvh(s.index().at("jump_02").motion));
    s.set_stage(CameraMode::local);
    s.submit_stroke(stroke_for(s, "punch_01", Role::right_hand), CameraMode::local, Role::right_hand);
    s.select(1);
    const Motion reparsed = parse_bvh(s.export_bvh());
    EXPECT_LT(mse(reparsed, s.composed()).mse, 1e-8);
    EXPECT_EQ(mse(reparsed, parse_bvh(write_bvh(reparsed))).mse, 0.0);
}

TEST(Session, TimelineSampling) {
    Session s("s1", "default", shared_index());
    s.submit_stroke(stroke_for(s, "walk_01"), CameraMode::global, std::nullopt);
    s.select(1);
    const Timeline t = s.timeline(10);
    ASSERT_EQ(t.poses.size(), 10u);
    EXPECT_EQ(t.frames.back(), 90u);
    EXPECT_EQ(s.timeline(1).poses.size(), 100u);
    EXPECT_EQ(s.timeline(30).poses.size(), 4u);
    EXPECT_THROW(s.timeline(0), QueryError);
    const json j = timeline_to_json(t, s.composed().skeleton());
    EXPECT_EQ(j.at("frames").size(), 10u);
}

TEST(Session, CameraActionsFollowStage) {
    Session s("s1", "default", shared_index());
    EXPECT_THROW(s.update_camera(Orbit{10, 0}), ConfigError);
    const Camera zoomed = s.update_camera(Zoom{0.5});
    EXPECT_EQ(s.camera(), zoomed);
    Camera wrong = default_local_camera(Vec3::Zero(), 1.0);
    EXPECT_THROW(s.set_camera(wrong), ConfigError);

    s.submit_stroke(stroke_for(s, "walk_01"), CameraMode::global, std::nullopt);
    s.select(1);
    s.set_stage(CameraMode::local);
    const double r = s.camera().radius;
    s.update_camera(Orbit{45, 20});
    EXPECT_NEAR((s.camera().eye - s.camera().target).norm(), r, 1e-6);
    s.set_stage(CameraMode::global);
    EXPECT_EQ(s.camera(), zoomed);
}

TEST(Session, SnapshotRestore) {
    Session s("s9", "default", shared_index());
    s.submit_stroke(stroke_for(s, "kick_02"), CameraMode::global, std::nullopt);
    s.select(1);
    s.set_stage(CameraMode::local);
    s.submit_stroke(stroke_for(s, "walk_03", Role::head), CameraMode::local, Role::head);
    const json snap = s.to_json();
    const Session back = Session::from_json(snap, shared_index());
    EXPECT_EQ(back.composition(), s.composition());
    EXPECT_TRUE(back.composed() == s.composed());
    EXPECT_EQ(back.camera(), s.camera());
    EXPECT_EQ(back.stage(), s.stage());
    ASSERT_TRUE(back.pending());
    EXPECT_EQ(back.pending()->candidates.size(), s.pending()->candidates.size());
    EXPECT_EQ(back.to_json().at("pending"), snap.at("pending"));
    EXPECT_EQ(back.undo_depth(), 0u);
}

TEST(SessionManager, CreateLookupRestore) {
    SessionManager m;
    m.add_dataset("default", shared_index());
    const json a = m.create_session("default");
    const json b = m.create_session("default");
    EXPECT_NE(a.at("id"), b.at("id"));
    EXPECT_EQ(a.at("stage"), "global");
    EXPECT_TRUE(a.at("composition").at("global_id").is_null());
    EXPECT_THROW(m.create_session("missing"), LookupError);
    EXPECT_THROW(m.with_session("nope", [](Session&) { return 0; }), LookupError);

    const std::string id = a.at("id");
    const json snap = m.with_session(id, [](Session& s) {
        s.submit_stroke(stroke_for(s, "walk_01"), CameraMode::global, std::nullopt);
        s.select(1);
        return s.to_json();
    });
    SessionManager other;
    other.add_dataset("default", shared_index());
    other.restore(snap);
    EXPECT_EQ(other.with_session(id, [](Session& s) { return composition_to_json(s.composition()); }),
              snap.at("composition"));
}
