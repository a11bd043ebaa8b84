#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "sketchmo/motion.hpp"

namespace sketchmo {

struct Pose {
    std::vector<Vec3> positions;
    std::vector<Mat3> rotations;
};

// World path of one joint, one point per frame.
using Trajectory3D = std::vector<Vec3>;

// Right-handed rotation about a principal axis; angle in degrees.
inline Mat3 axis_rotation(int axis, double degrees) {
    const double r = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(r);
    const double s = std::sin(r);
    Mat3 m;
    switch (axis) {
        case 0: m << 1, 0, 0, 0, c, -s, 0, s, c; break;
        case 1: m << c, 0, s, 0, 1, 0, -s, 0, c; break;
        default: m << c, -s, 0, s, c, 0, 0, 0, 1; break;
    }
    return m;
}

// Product of the joint's elementary rotations, left to right in CHANNELS order.
inline Mat3 local_rotation(const Motion& motion, std::size_t frame, std::size_t joint) {
    const Joint& j = motion.skeleton().joint(joint);
    Mat3 r = Mat3::Identity();
    for (std::size_t c = 0; c < j.channels.size(); ++c)
        if (is_rotation(j.channels[c])) r = r * axis_rotation(channel_axis(j.channels[c]), motion.value(frame, joint, c));
    return r;
}

inline Vec3 root_translation(const Motion& motion, std::size_t frame) {
    const Joint& root = motion.skeleton().joint(0);
    Vec3 t = Vec3::Zero();
    for (std::size_t c = 0; c < root.channels.size(); ++c)
        if (is_position(root.channels[c])) t[channel_axis(root.channels[c])] = motion.value(frame, 0, c);
    return t;
}

inline Pose forward_kinematics(const Motion& motion, std::size_t frame) {
    if (frame >= motion.frame_count())
        throw std::out_of_range("frame " + std::to_string(frame) + " out of range (" +
                                std::to_string(motion.frame_count()) + " frames)");
    const Skeleton& sk = motion.skeleton();
    Pose pose;
    pose.positions.resize(sk.size());
    pose.rotations.resize(sk.size());
    for (std::size_t i = 0; i < sk.size(); ++i) {
        const Joint& j = sk.joint(i);
        const Mat3 local = local_rotation(motion, frame, i);
        if (!j.parent) {
            pose.positions[i] = j.offset + root_translation(motion, frame);
            pose.rotations[i] = local;
        } else {
            const std::size_t p = *j.parent;
            pose.positions[i] = pose.positions[p] + pose.rotations[p] * j.offset;
            pose.rotations[i] = pose.rotations[p] * local;
        }
    }
    return pose;
}

inline Trajectory3D joint_trajectory(const Motion& motion, std::size_t joint) {
    const Skeleton& sk = motion.skeleton();
    if (joint >= sk.size()) throw LookupError("joint index " + std::to_string(joint) + " out of range");
    // Only the chain from the root to `joint` matters.
    std::vector<std::size_t> chain;
    for (std::optional<std::size_t> j = joint; j; j = sk.joint(*j).parent) chain.push_back(*j);

    Trajectory3D out;
    out.reserve(motion.frame_count());
    for (std::size_t f = 0; f < motion.frame_count(); ++f) {
        Vec3 pos = Vec3::Zero();
        Mat3 rot = Mat3::Identity();
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const Joint& j = sk.joint(*it);
            if (!j.parent) {
                pos = j.offset + root_translation(motion, f);
            } else {
                pos = pos + rot * j.offset;
            }
            rot = rot * local_rotation(motion, f, *it);
        }
        out.push_back(pos);
    }
    return out;
}

inline Trajectory3D joint_trajectory(const Motion& motion, std::string_view joint) {
    return joint_trajectory(motion, motion.skeleton().index_of(joint));
}

// Joint positions with all channels at zero (the bind pose).
inline std::vector<Vec3> rest_positions(const Skeleton& sk) {
    std::vector<Vec3> out(sk.size());
    for (std::size_t i = 0; i < sk.size(); ++i) {
        const Joint& j = sk.joint(i);
        out[i] = j.parent ? Vec3(out[*j.parent] + j.offset) : j.offset;
    }
    return out;
}

// Vertical extent of the bind pose including end sites.
inline double rest_height(const Skeleton& sk) {
    const auto pos = rest_positions(sk);
    double lo = pos[0].y();
    double hi = lo;
    for (std::size_t i = 0; i < sk.size(); ++i) {
        lo = std::min(lo, pos[i].y());
        hi = std::max(hi, pos[i].y());
        if (const auto& e = sk.joint(i).end_site) {
            lo = std::min(lo, pos[i].y() + e->y());
            hi = std::max(hi, pos[i].y() + e->y());
        }
    }
    return hi - lo;
}

}  // namespace sketchmo
