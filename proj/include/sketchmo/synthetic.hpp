#pragma once

// Procedural locomotion clips on a CMU-layout skeleton. Used to populate
// demo and test datasets when no capture library is at hand.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sketchmo/bvh.hpp"
#include "sketchmo/dataset.hpp"

namespace sketchmo::synthetic {

inline constexpr double kFrameTime = 0.0083333;

namespace detail {

inline std::vector<Channel> rot_zxy() { return {Channel::Zrotation, Channel::Xrotation, Channel::Yrotation}; }

struct Builder {
    std::vector<Joint> joints;
    std::size_t add(const std::string& name, std::optional<std::size_t> parent, Vec3 offset,
                    std::optional<Vec3> end = std::nullopt) {
        joints.push_back(Joint{name, parent, offset,
                               parent ? rot_zxy()
                                      : std::vector<Channel>{Channel::Xposition, Channel::Yposition,
                                                             Channel::Zposition, Channel::Zrotation,
                                                             Channel::Xrotation, Channel::Yrotation},
                               end});
        return joints.size() - 1;
    }
};

// Uniform double in [lo, hi) from the raw engine output, independent of the
// standard library's distribution implementations.
struct Rng {
    std::mt19937_64 engine;
    explicit Rng(std::uint64_t seed) : engine(seed) {}
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }
};

}  // namespace detail

// 31-joint hierarchy with CMU joint names; shoulders hang off Spine1, the
// neck chain is Neck → Neck1 → Head.
inline Skeleton cmu_skeleton() {
    detail::Builder b;
    const auto hips = b.add("Hips", std::nullopt, Vec3::Zero());
    for (int side : {1, -1}) {
        const std::string p = side > 0 ? "Left" : "Right";
        const auto hip = b.add(side > 0 ? "LHipJoint" : "RHipJoint", hips, Vec3::Zero());
        const auto up = b.add(p + "UpLeg", hip, Vec3(1.65 * side, -1.80, 0.84));
        const auto leg = b.add(p + "Leg", up, Vec3(0.0, -7.14, 0.0));
        const auto foot = b.add(p + "Foot", leg, Vec3(0.0, -6.85, 0.0));
        b.add(p + "ToeBase", foot, Vec3(0.0, -0.25, 2.48), Vec3(0.0, 0.0, 1.10));
    }
    const auto lower = b.add("LowerBack", hips, Vec3::Zero());
    const auto spine = b.add("Spine", lower, Vec3(0.03, 2.06, -0.01));
    const auto spine1 = b.add("Spine1", spine, Vec3(0.06, 2.06, -0.01));
    const auto neck = b.add("Neck", spine1, Vec3::Zero());
    const auto neck1 = b.add("Neck1", neck, Vec3(-0.04, 1.76, 0.04));
    b.add("Head", neck1, Vec3(-0.01, 1.78, 0.04), Vec3(0.0, 1.60, 0.0));
    for (int side : {1, -1}) {
        const std::string p = side > 0 ? "Left" : "Right";
        const auto shoulder = b.add(p + "Shoulder", spine1, Vec3::Zero());
        const auto arm = b.add(p + "Arm", shoulder, Vec3(3.36 * side, 1.20, 0.0));
        const auto fore = b.add(p + "ForeArm", arm, Vec3(4.98 * side, 0.0, 0.0));
        const auto hand = b.add(p + "Hand", fore, Vec3(3.48 * side, 0.0, 0.0));
        const auto finger = b.add(p + "FingerBase", hand, Vec3::Zero());
        b.add(p + "HandIndex1", finger, Vec3(0.71 * side, 0.0, 0.0), Vec3(0.58 * side, 0.0, 0.0));
        b.add(side > 0 ? "LThumb" : "RThumb", hand, Vec3::Zero(), Vec3(0.5 * side, 0.0, 0.5));
    }
    return Skeleton(std::move(b.joints));
}

inline DatasetConfig cmu_config(std::size_t frames = kDefaultFrames) {
    DatasetConfig c;
    c.joints = {{Role::root, "Hips"}, {Role::head, "Head"}, {Role::left_hand, "LeftHand"}, {Role::right_hand, "RightHand"}};
    c.anchors = {{Role::head, "Neck"}, {Role::left_hand, "LeftShoulder"}, {Role::right_hand, "RightShoulder"}};
    c.frames = frames;
    return c;
}

enum class Family { walk, run, jump, punch, kick };

inline std::string_view to_string(Family f) {
    switch (f) {
        case Family::walk: return "walk";
        case Family::run: return "run";
        case Family::jump: return "jump";
        case Family::punch: return "punch";
        case Family::kick: return "kick";
    }
    return "?";
}

struct ClipSpec {
    std::string id;
    Family family = Family::walk;
    std::uint64_t seed = 0;
    std::size_t frames = 180;
};

// Deterministic clip of the given family; every parameter is drawn from `seed`.
inline Motion generate(const ClipSpec& spec) {
    using std::numbers::pi;
    const Skeleton sk = cmu_skeleton();
    detail::Rng rng(spec.seed);

    const bool locomotes = spec.family == Family::walk || spec.family == Family::run;
    const double speed = spec.family == Family::run    ? rng.uniform(20.0, 34.0)
                         : spec.family == Family::walk ? rng.uniform(8.0, 16.0)
                                                       : rng.uniform(2.0, 9.0);
    const double cadence = spec.family == Family::run ? rng.uniform(1.3, 1.7) : rng.uniform(0.8, 1.1);
    const double heading0 = rng.uniform(-180.0, 180.0);
    const double turn_rate = rng.uniform(-60.0, 60.0) * (locomotes ? 1.0 : 0.4);
    const double start_x = rng.uniform(-30.0, 30.0);
    const double start_z = rng.uniform(-30.0, 30.0);
    const double hip_height = rng.uniform(16.0, 17.5);
    const double bob = locomotes ? rng.uniform(0.2, 0.8) : rng.uniform(0.05, 0.3);
    const double leg_amp = spec.family == Family::run ? rng.uniform(35.0, 50.0) : rng.uniform(18.0, 30.0);
    const double arm_amp = rng.uniform(10.0, 35.0);
    const double arm_drop = rng.uniform(60.0, 80.0);
    const double lean = rng.uniform(-3.0, 10.0);
    const double head_yaw_amp = rng.uniform(0.0, 20.0);
    const double head_yaw_freq = rng.uniform(0.2, 1.2);
    const double head_nod = rng.uniform(0.0, 10.0);
    const double phase = rng.uniform(0.0, 2.0 * pi);
    const double jump_height = rng.uniform(4.0, 10.0);
    const double jump_start = rng.uniform(0.15, 0.35);
    const double jump_len = rng.uniform(0.35, 0.55);
    const double action_freq = rng.uniform(0.8, 1.8);
    const bool lead_right = rng.uniform(0.0, 1.0) < 0.5;
    const double elbow_bend = rng.uniform(5.0, 40.0);

    FrameMatrix f = FrameMatrix::Zero(static_cast<Eigen::Index>(spec.frames), static_cast<Eigen::Index>(sk.channel_count()));
    auto set = [&](std::size_t frame, const char* joint, Channel ch, double v) {
        const std::size_t j = sk.index_of(joint);
        const auto& chans = sk.joint(j).channels;
        const auto it = std::find(chans.begin(), chans.end(), ch);
        f(static_cast<Eigen::Index>(frame), static_cast<Eigen::Index>(sk.channel_offset(j) + (it - chans.begin()))) = v;
    };

    double x = start_x;
    double z = start_z;
    const double duration = kFrameTime * static_cast<double>(spec.frames);
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const double s = kFrameTime * static_cast<double>(t);
        const double u = s / duration;  // normalized clip time
        const double heading = heading0 + turn_rate * s;
        const double gait = 2.0 * pi * cadence * s + phase;

        double y = hip_height + bob * std::sin(2.0 * gait);
        double v = speed;
        double crouch = 0.0;
        if (spec.family == Family::jump) {
            const double k = (u - jump_start) / jump_len;
            if (k >= 0.0 && k <= 1.0) {
                y += jump_height * 4.0 * k * (1.0 - k);
                v *= 2.5;
            } else {
                const double d = std::min(std::abs(k), std::abs(k - 1.0));
                crouch = 20.0 * std::exp(-d * d * 40.0);
                y -= crouch * 0.08;
            }
        }
        const double hr = heading * pi / 180.0;
        if (t > 0) {
            x += v * kFrameTime * std::sin(hr);
            z += v * kFrameTime * std::cos(hr);
        }
        set(t, "Hips", Channel::Xposition, x);
        set(t, "Hips", Channel::Yposition, y);
        set(t, "Hips", Channel::Zposition, z);
        set(t, "Hips", Channel::Yrotation, heading);
        set(t, "Hips", Channel::Xrotation, lean + 2.0 * std::sin(2.0 * gait));
        set(t, "Hips", Channel::Zrotation, 3.0 * std::sin(gait));

        // Legs: hip flexion alternates, knee bends on the swing half.
        const double swing = locomotes ? leg_amp : leg_amp * 0.3;
        const double lswing = swing * std::sin(gait);
        const double rswing = -swing * std::sin(gait);
        set(t, "LeftUpLeg", Channel::Xrotation, -lswing - crouch);
        set(t, "RightUpLeg", Channel::Xrotation, -rswing - crouch);
        set(t, "LeftLeg", Channel::Xrotation, std::max(0.0, swing * std::sin(gait + 1.2)) + 1.6 * crouch);
        set(t, "RightLeg", Channel::Xrotation, std::max(0.0, -swing * std::sin(gait + 1.2)) + 1.6 * crouch);
        set(t, "LeftFoot", Channel::Xrotation, -0.3 * lswing);
        set(t, "RightFoot", Channel::Xrotation, -0.3 * rswing);

        if (spec.family == Family::kick) {
            const double k = std::pow(std::max(0.0, std::sin(2.0 * pi * action_freq * s)), 3.0);
            set(t, lead_right ? "RightUpLeg" : "LeftUpLeg", Channel::Xrotation, -85.0 * k);
            set(t, lead_right ? "RightLeg" : "LeftLeg", Channel::Xrotation, 40.0 * (1.0 - k));
        }

        // Torso and head.
        set(t, "Spine", Channel::Yrotation, -4.0 * std::sin(gait));
        set(t, "Spine1", Channel::Yrotation, -3.0 * std::sin(gait));
        set(t, "Neck1", Channel::Xrotation, head_nod * std::sin(2.0 * pi * 0.7 * s + phase));
        set(t, "Head", Channel::Yrotation, head_yaw_amp * std::sin(2.0 * pi * head_yaw_freq * s));

        // Arms hang from the T-pose and swing against the legs.
        const double arm_swing = arm_amp * std::sin(gait);
        set(t, "LeftArm", Channel::Zrotation, -arm_drop);
        set(t, "RightArm", Channel::Zrotation, arm_drop);
        set(t, "LeftArm", Channel::Yrotation, -arm_swing);
        set(t, "RightArm", Channel::Yrotation, -arm_swing);
        set(t, "LeftForeArm", Channel::Yrotation, elbow_bend + 0.5 * arm_swing);
        set(t, "RightForeArm", Channel::Yrotation, -elbow_bend + 0.5 * arm_swing);
        set(t, "LeftHand", Channel::Zrotation, 5.0 * std::sin(gait + 0.5));
        set(t, "RightHand", Channel::Zrotation, -5.0 * std::sin(gait + 0.5));

        if (spec.family == Family::punch) {
            const double p = std::pow(std::max(0.0, std::sin(2.0 * pi * action_freq * s)), 2.0);
            const char* arm = lead_right ? "RightArm" : "LeftArm";
            const char* fore = lead_right ? "RightForeArm" : "LeftForeArm";
            const double sign = lead_right ? 1.0 : -1.0;
            set(t, arm, Channel::Zrotation, sign * arm_drop * (1.0 - p));
            set(t, arm, Channel::Yrotation, sign * 80.0 * p);
            set(t, fore, Channel::Yrotation, sign * elbow_bend * (1.0 - p));
        }
    }
    return Motion(sk, kFrameTime, std::move(f), spec.id, std::string(to_string(spec.family)));
}

// `count` clips cycling through the families, ids "<family>_<nn>".
inline std::vector<ClipSpec> corpus_specs(std::size_t count, std::uint64_t seed = 2023) {
    static constexpr Family order[] = {Family::walk, Family::run, Family::jump, Family::walk, Family::punch,
                                       Family::kick, Family::run, Family::walk};
    std::vector<ClipSpec> out;
    std::map<Family, int> per_family;
    detail::Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        const Family fam = order[i % std::size(order)];
        const int n = ++per_family[fam];
        char id[32];
        std::snprintf(id, sizeof id, "%s_%02d", std::string(to_string(fam)).c_str(), n);
        const auto frames = static_cast<std::size_t>(rng.uniform(120.0, 240.0));
        out.push_back({id, fam, seed * 1000003ULL + i, frames});
    }
    return out;
}

// Writes `count` clips as .bvh files plus roles.json into `dir`.
inline void write_corpus(const std::filesystem::path& dir, std::size_t count, std::uint64_t seed = 2023) {
    std::filesystem::create_directories(dir);
    DatasetConfig cfg = cmu_config();
    for (const ClipSpec& spec : corpus_specs(count, seed)) {
        save_bvh(generate(spec), dir / (spec.id + ".bvh"));
        cfg.labels[spec.id] = std::string(to_string(spec.family));
    }
    std::ofstream(dir / "roles.json") << config_to_json(cfg).dump(2) << '\n';
}

}  // namespace sketchmo::synthetic
