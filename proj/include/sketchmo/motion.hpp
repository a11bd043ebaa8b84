#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "sketchmo/errors.hpp"

namespace sketchmo {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// One row per frame, one column per channel, in skeleton channel order.
using FrameMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Channel : std::uint8_t { Xposition, Yposition, Zposition, Xrotation, Yrotation, Zrotation };

inline std::string_view to_string(Channel c) {
    switch (c) {
        case Channel::Xposition: return "Xposition";
        case Channel::Yposition: return "Yposition";
        case Channel::Zposition: return "Zposition";
        case Channel::Xrotation: return "Xrotation";
        case Channel::Yrotation: return "Yrotation";
        case Channel::Zrotation: return "Zrotation";
    }
    return "?";
}

inline std::optional<Channel> channel_from_string(std::string_view s) {
    static constexpr std::pair<std::string_view, Channel> table[] = {
        {"Xposition", Channel::Xposition}, {"Yposition", Channel::Yposition},
        {"Zposition", Channel::Zposition}, {"Xrotation", Channel::Xrotation},
        {"Yrotation", Channel::Yrotation}, {"Zrotation", Channel::Zrotation},
    };
    for (const auto& [name, ch] : table)
        if (name == s) return ch;
    return std::nullopt;
}

inline bool is_rotation(Channel c) {
    return c == Channel::Xrotation || c == Channel::Yrotation || c == Channel::Zrotation;
}

inline bool is_position(Channel c) { return !is_rotation(c); }

// 0, 1, 2 for X, Y, Z.
inline int channel_axis(Channel c) {
    switch (c) {
        case Channel::Xposition:
        case Channel::Xrotation: return 0;
        case Channel::Yposition:
        case Channel::Yrotation: return 1;
        default: return 2;
    }
}

struct Joint {
    std::string name;
    std::optional<std::size_t> parent;
    Vec3 offset = Vec3::Zero();
    std::vector<Channel> channels;
    std::optional<Vec3> end_site;

    bool operator==(const Joint&) const = default;
};

// Joint hierarchy in BVH declaration order. Construction validates the tree;
// a Skeleton value always satisfies its invariants.
class Skeleton {
public:
    explicit Skeleton(std::vector<Joint> joints) : joints_(std::move(joints)) {
        if (joints_.empty()) throw StructureError("skeleton has no joints");
        std::size_t roots = 0;
        std::vector<std::size_t> path;  // ancestors of the joint being visited
        for (std::size_t i = 0; i < joints_.size(); ++i) {
            const Joint& j = joints_[i];
            if (j.name.empty()) throw StructureError("joint " + std::to_string(i) + " has no name");
            if (!j.parent) {
                ++roots;
                if (i != 0) throw StructureError("root joint must be first: " + j.name);
            } else if (*j.parent >= i) {
                throw StructureError("parent of '" + j.name + "' does not precede it");
            } else {
                // BVH text is a depth-first listing, so joints must be stored in that order too.
                while (!path.empty() && path.back() != *j.parent) path.pop_back();
                if (path.empty()) throw StructureError("joint '" + j.name + "' is not in depth-first order");
            }
            path.push_back(i);
            if (!by_name_.emplace(j.name, i).second)
                throw StructureError("duplicate joint name '" + j.name + "'");
            validate_channels(j, !j.parent.has_value());
        }
        if (roots != 1) throw StructureError("skeleton must have exactly one root");

        channel_offsets_.reserve(joints_.size());
        std::size_t total = 0;
        for (const Joint& j : joints_) {
            channel_offsets_.push_back(total);
            total += j.channels.size();
        }
        channel_count_ = total;
    }

    const std::vector<Joint>& joints() const noexcept { return joints_; }
    const Joint& joint(std::size_t i) const { return joints_.at(i); }
    std::size_t size() const noexcept { return joints_.size(); }
    std::size_t channel_count() const noexcept { return channel_count_; }

    // Column of the first channel of joint i in a frame row.
    std::size_t channel_offset(std::size_t i) const { return channel_offsets_.at(i); }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw LookupError("unknown joint '" + std::string(name) + "'");
    }

    std::vector<std::size_t> children(std::size_t i) const {
        std::vector<std::size_t> out;
        for (std::size_t c = i + 1; c < joints_.size(); ++c)
            if (joints_[c].parent == i) out.push_back(c);
        return out;
    }

    // Joint i plus all of its descendants, in declaration order.
    std::vector<std::size_t> subtree(std::size_t i) const {
        std::vector<bool> in(joints_.size(), false);
        in.at(i) = true;
        std::vector<std::size_t> out{i};
        for (std::size_t c = i + 1; c < joints_.size(); ++c) {
            if (joints_[c].parent && in[*joints_[c].parent]) {
                in[c] = true;
                out.push_back(c);
            }
        }
        return out;
    }

    bool operator==(const Skeleton& o) const { return joints_ == o.joints_; }

    // Same names, parents and channel layout; offsets may differ.
    bool same_layout(const Skeleton& o) const {
        if (joints_.size() != o.joints_.size()) return false;
        for (std::size_t i = 0; i < joints_.size(); ++i) {
            const Joint& a = joints_[i];
            const Joint& b = o.joints_[i];
            if (a.name != b.name || a.parent != b.parent || a.channels != b.channels) return false;
        }
        return true;
    }

private:
    static void validate_channels(const Joint& j, bool root) {
        int pos_mask = 0;
        int rot_mask = 0;
        for (Channel c : j.channels) {
            int& mask = is_rotation(c) ? rot_mask : pos_mask;
            const int bit = 1 << channel_axis(c);
            if (mask & bit) throw StructureError("repeated channel on joint '" + j.name + "'");
            mask |= bit;
        }
        if (root) {
            if (pos_mask != 7 || rot_mask != 7)
                throw StructureError("root joint '" + j.name + "' must carry 3 position and 3 rotation channels");
        } else if (pos_mask != 0) {
            throw StructureError("non-root joint '" + j.name + "' declares position channels");
        }
    }

    std::vector<Joint> joints_;
    std::unordered_map<std::string, std::size_t> by_name_;
    std::vector<std::size_t> channel_offsets_;
    std::size_t channel_count_ = 0;
};

// Channel values over time bound to a skeleton. Rotations in degrees.
class Motion {
public:
    Motion(Skeleton skeleton, double frame_time, FrameMatrix frames, std::string id = {}, std::string label = {})
        : skeleton_(std::move(skeleton)),
          frame_time_(frame_time),
          frames_(std::move(frames)),
          id_(std::move(id)),
          label_(std::move(label)) {
        if (!(frame_time_ > 0.0)) throw StructureError("frame time must be positive");
        if (frames_.rows() < 1) throw StructureError("motion must have at least one frame");
        if (static_cast<std::size_t>(frames_.cols()) != skeleton_.channel_count())
            throw StructureError("frame rows have " + std::to_string(frames_.cols()) + " values, skeleton declares " +
                                 std::to_string(skeleton_.channel_count()) + " channels");
    }

    const Skeleton& skeleton() const noexcept { return skeleton_; }
    double frame_time() const noexcept { return frame_time_; }
    const FrameMatrix& frames() const noexcept { return frames_; }
    std::size_t frame_count() const noexcept { return static_cast<std::size_t>(frames_.rows()); }
    const std::string& id() const noexcept { return id_; }
    const std::string& label() const noexcept { return label_; }

    double value(std::size_t frame, std::size_t joint, std::size_t channel) const {
        return frames_(static_cast<Eigen::Index>(frame),
                       static_cast<Eigen::Index>(skeleton_.channel_offset(joint) + channel));
    }

    // Copy with replaced channel data, same skeleton and metadata.
    Motion with_frames(FrameMatrix frames) const {
        return Motion(skeleton_, frame_time_, std::move(frames), id_, label_);
    }

    Motion with_identity(std::string id, std::string label) const {
        Motion m = *this;
        m.id_ = std::move(id);
        m.label_ = std::move(label);
        return m;
    }

    // Structural equality; channel values compared exactly.
    bool operator==(const Motion& o) const {
        return skeleton_ == o.skeleton_ && frame_time_ == o.frame_time_ && frames_.rows() == o.frames_.rows() &&
               frames_.cols() == o.frames_.cols() && frames_ == o.frames_;
    }

private:
    Skeleton skeleton_;
    double frame_time_;
    FrameMatrix frames_;
    std::string id_;
    std::string label_;
};

}  // namespace sketchmo
