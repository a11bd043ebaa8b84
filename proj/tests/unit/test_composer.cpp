#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "sketchmo/composer.hpp"
#include "support/fixtures.hpp"

using namespace sketchmo;

namespace {

// Descendants by repeated parent lookups, independent of Skeleton::subtree.
std::set<std::size_t> descendants_of(const Skeleton& sk, std::size_t root) {
    std::set<std::size_t> out;
    for (std::size_t j = 0; j < sk.size(); ++j) {
        std::optional<std::size_t> k = j;
        while (k) {
            if (*k == root) {
                out.insert(j);
                break;
            }
            k = sk.joint(*k).parent;
        }
    }
    return out;
}

std::set<std::size_t> as_set(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

bool column_equal(const Motion& a, const Motion& b, std::size_t col) {
    return a.frames().col(static_cast<Eigen::Index>(col)) == b.frames().col(static_cast<Eigen::Index>(col));
}

}  // namespace

TEST(AffectedJoints, MatchesTreeTraversal) {
    const Skeleton sk = synthetic::cmu_skeleton();
    const DatasetConfig cfg = synthetic::cmu_config();
    const auto ls = sk.index_of("LeftShoulder");
    const auto rs = sk.index_of("RightShoulder");
    const auto neck = sk.index_of("Neck");
    EXPECT_EQ(as_set(affected_joints(sk, Role::left_hand, cfg)), descendants_of(sk, ls));
    EXPECT_EQ(as_set(affected_joints(sk, Role::right_hand, cfg)), descendants_of(sk, rs));

    std::set<std::size_t> head = descendants_of(sk, neck);
    for (auto s : {ls, rs})
        for (auto j : descendants_of(sk, s)) head.erase(j);
    EXPECT_EQ(as_set(affected_joints(sk, Role::head, cfg)), head);
    EXPECT_TRUE(head.count(sk.index_of("Head")));
}

TEST(AffectedJoints, HeadExcludesShouldersBelowNeck) {
    // Shoulders hanging under the neck must stay out of the head set.
    const auto rz = std::vector<Channel>{Channel::Zrotation, Channel::Xrotation, Channel::Yrotation};
    std::vector<Joint> joints{
        {"Hips", std::nullopt, Vec3::Zero(),
         {Channel::Xposition, Channel::Yposition, Channel::Zposition, Channel::Zrotation, Channel::Xrotation,
          Channel::Yrotation},
         std::nullopt},
        {"Neck", 0, Vec3(0, 1, 0), rz, std::nullopt},
        {"Head", 1, Vec3(0, 0.2, 0), rz, Vec3(0, 0.1, 0)},
        {"LeftShoulder", 1, Vec3(0.2, 0, 0), rz, std::nullopt},
        {"LeftHand", 3, Vec3(0.5, 0, 0), rz, Vec3(0.1, 0, 0)},
        {"RightShoulder", 1, Vec3(-0.2, 0, 0), rz, std::nullopt},
        {"RightHand", 5, Vec3(-0.5, 0, 0), rz, Vec3(-0.1, 0, 0)},
    };
    const Skeleton sk(joints);
    const DatasetConfig cfg = synthetic::cmu_config();
    EXPECT_EQ(affected_joints(sk, Role::head, cfg), (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(affected_joints(sk, Role::left_hand, cfg), (std::vector<std::size_t>{3, 4}));
}

TEST(AffectedJoints, SetsAreDisjoint) {
    const Skeleton sk = synthetic::cmu_skeleton();
    const DatasetConfig cfg = synthetic::cmu_config();
    std::vector<int> claims(sk.size(), 0);
    for (Role r : kLimbRoles)
        for (auto j : affected_joints(sk, r, cfg)) ++claims[j];
    EXPECT_LE(*std::max_element(claims.begin(), claims.end()), 1);
    EXPECT_EQ(claims[0], 0);
}

TEST(AffectedJoints, MappingErrors) {
    const Motion toy = parse_bvh(fixtures::kTwoJointZero);
    const DatasetConfig cfg = synthetic::cmu_config();
    EXPECT_THROW(affected_joints(toy.skeleton(), Role::left_hand, cfg), MappingError);
    EXPECT_THROW(affected_joints(synthetic::cmu_skeleton(), Role::root, cfg), MappingError);
    DatasetConfig rooted = cfg;
    rooted.anchors[Role::head] = "Hips";
    EXPECT_THROW(affected_joints(synthetic::cmu_skeleton(), Role::head, rooted), MappingError);
    DatasetConfig none = cfg;
    none.anchors.clear();
    EXPECT_THROW(affected_joints(synthetic::cmu_skeleton(), Role::head, none), MappingError);
}

TEST(Compose, EmptyAssignmentIsIdentity) {
    const Motion g = fixtures::random_motion(synthetic::cmu_skeleton(), 20, 1);
    const Motion out = compose(g, std::vector<ResolvedAssignment>{}, synthetic::cmu_config());
    EXPECT_TRUE(out == g);
}

TEST(Compose, ChannelDiffOracle) {
    const Skeleton sk = synthetic::cmu_skeleton();
    const DatasetConfig cfg = synthetic::cmu_config();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Motion a = fixtures::random_motion(sk, 12, 2 * seed);
        const Motion b = fixtures::random_motion(sk, 12, 2 * seed + 1);
        const Motion out = compose(a, std::vector<ResolvedAssignment>{{Role::left_hand, &b}}, cfg);
        const auto from_b = descendants_of(sk, sk.index_of("LeftShoulder"));
        for (std::size_t j = 0; j < sk.size(); ++j) {
            for (std::size_t c = 0; c < sk.joint(j).channels.size(); ++c) {
                const std::size_t col = sk.channel_offset(j) + c;
                const bool take_b = from_b.count(j) && is_rotation(sk.joint(j).channels[c]);
                EXPECT_TRUE(column_equal(out, take_b ? b : a, col)) << sk.joint(j).name;
            }
        }
    }
}

TEST(Compose, RandomizedInvariants) {
    const Skeleton sk = synthetic::cmu_skeleton();
    const DatasetConfig cfg = synthetic::cmu_config();
    std::set<std::size_t> affected;
    for (Role r : kLimbRoles)
        for (auto j : affected_joints(sk, r, cfg)) affected.insert(j);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Motion g = fixtures::random_motion(sk, 8, 100 + seed);
        const Motion h = fixtures::random_motion(sk, 8, 200 + seed);
        const Motion l = fixtures::random_motion(sk, 8, 300 + seed);
        const Motion r = fixtures::random_motion(sk, 8, 400 + seed);
        std::vector<ResolvedAssignment> as{{Role::head, &h}, {Role::left_hand, &l}, {Role::right_hand, &r}};
        const Motion out = compose(g, as, cfg);
        for (std::size_t c = 0; c < 6; ++c) EXPECT_TRUE(column_equal(out, g, c));
        for (std::size_t j = 0; j < sk.size(); ++j) {
            if (affected.count(j)) continue;
            for (std::size_t c = 0; c < sk.joint(j).channels.size(); ++c)
                EXPECT_TRUE(column_equal(out, g, sk.channel_offset(j) + c));
        }
        std::reverse(as.begin(), as.end());
        EXPECT_TRUE(compose(g, as, cfg) == out);
        std::swap(as[0], as[1]);
        EXPECT_TRUE(compose(g, as, cfg) == out);
        // Applying the same assignments again changes nothing.
        EXPECT_TRUE(compose(out, as, cfg) == out);
    }
}

TEST(Compose, Conflicts) {
    const Skeleton sk = synthetic::cmu_skeleton();
    const Motion a = fixtures::random_motion(sk, 4, 1);
    const Motion b = fixtures::random_motion(sk, 4, 2);
    const DatasetConfig cfg = synthetic::cmu_config();
    EXPECT_THROW(compose(a, std::vector<ResolvedAssignment>{{Role::head, &b}, {Role::head, &a}}, cfg),
                 AssignmentConflict);

    DatasetConfig overlapping = cfg;
    overlapping.anchors[Role::right_hand] = "LeftArm";
    EXPECT_THROW(compose(a, std::vector<ResolvedAssignment>{{Role::left_hand, &b}, {Role::right_hand, &b}}, overlapping),
                 AssignmentConflict);
}

TEST(Compose, Mismatches) {
    const Skeleton sk = synthetic::cmu_skeleton();
    const Motion a = fixtures::random_motion(sk, 4, 1);
    const Motion shorter = fixtures::random_motion(sk, 3, 2);
    const Motion toy = parse_bvh(fixtures::kTwoJointZero);
    const DatasetConfig cfg = synthetic::cmu_config();
    EXPECT_THROW(compose(a, std::vector<ResolvedAssignment>{{Role::head, &shorter}}, cfg), CompositionError);
    EXPECT_THROW(compose(a, std::vector<ResolvedAssignment>{{Role::head, &toy}}, cfg), CompositionError);
}

TEST(Compose, ByIndexAndRecompose) {
    const DatasetIndex& index = fixtures::corpus_index();
    const Motion out = compose(index.at("walk_01").motion, std::vector<LimbAssignment>{{Role::left_hand, "punch_01"}}, index);
    const Motion ref = compose(index.at("walk_01").motion,
                               std::vector<ResolvedAssignment>{{Role::left_hand, &index.at("punch_01").motion}},
                               index.config);
    EXPECT_TRUE(out == ref);
    EXPECT_THROW(compose(out, std::vector<LimbAssignment>{{Role::head, "missing"}}, index), LookupError);

    CompositionState s;
    s.global_id = "walk_01";
    s.assignments[Role::left_hand] = "punch_01";
    s = recompose(s, index);
    ASSERT_TRUE(s.result);
    EXPECT_TRUE(*s.result == out);
    EXPECT_EQ(composition_from_json(composition_to_json(s)), s);

    CompositionState empty;
    EXPECT_FALSE(recompose(empty, index).result);
}
