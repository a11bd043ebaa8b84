#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sketchmo/dataset.hpp"

namespace sketchmo {

// Joints whose rotations a limb role overwrites: the role's anchor joint and
// its descendants. The head set never includes a shoulder subtree, even when
// the shoulders hang below the neck chain.
inline std::vector<std::size_t> affected_joints(const Skeleton& sk, Role role, const DatasetConfig& config) {
    if (!is_limb(role)) throw MappingError("the root role cannot be grafted");
    const std::string& anchor = config.anchor_for(role);
    const auto a = sk.find(anchor);
    if (!a) throw MappingError("anchor joint '" + anchor + "' for role '" + std::string(to_string(role)) + "' is absent");
    if (*a == 0) throw MappingError("anchor joint '" + anchor + "' is the root");

    std::vector<std::size_t> set = sk.subtree(*a);
    if (role == Role::head) {
        for (Role shoulder : {Role::left_hand, Role::right_hand}) {
            auto it = config.anchors.find(shoulder);
            if (it == config.anchors.end()) continue;
            const auto s = sk.find(it->second);
            if (!s) continue;
            const auto excluded = sk.subtree(*s);
            std::erase_if(set, [&](std::size_t j) {
                return std::find(excluded.begin(), excluded.end(), j) != excluded.end();
            });
        }
    }
    return set;
}

struct LimbAssignment {
    Role role;
    std::string source_id;

    bool operator==(const LimbAssignment&) const = default;
};

struct ResolvedAssignment {
    Role role;
    const Motion* source;
};

// Copies every rotation channel of each assignment's affected joints from its
// source onto `global`, frame by frame. Position channels always stay global.
inline Motion compose(const Motion& global, const std::vector<ResolvedAssignment>& assignments,
                      const DatasetConfig& config) {
    const Skeleton& sk = global.skeleton();
    std::set<Role> seen;
    std::vector<int> owner(sk.size(), -1);
    for (std::size_t k = 0; k < assignments.size(); ++k) {
        const auto& a = assignments[k];
        if (!a.source) throw CompositionError("assignment has no source motion");
        if (!seen.insert(a.role).second)
            throw AssignmentConflict("role '" + std::string(to_string(a.role)) + "' is assigned twice");
        if (!a.source->skeleton().same_layout(sk))
            throw CompositionError("source '" + a.source->id() + "' does not share the global skeleton");
        if (a.source->frame_count() != global.frame_count())
            throw CompositionError("source '" + a.source->id() + "' has " + std::to_string(a.source->frame_count()) +
                                   " frames, global has " + std::to_string(global.frame_count()));
        for (std::size_t j : affected_joints(sk, a.role, config)) {
            if (owner[j] >= 0)
                throw AssignmentConflict("joint '" + sk.joint(j).name + "' is claimed by two roles");
            owner[j] = static_cast<int>(k);
        }
    }

    FrameMatrix frames = global.frames();
    for (std::size_t j = 0; j < sk.size(); ++j) {
        if (owner[j] < 0) continue;
        const Motion& src = *assignments[static_cast<std::size_t>(owner[j])].source;
        const Joint& joint = sk.joint(j);
        for (std::size_t c = 0; c < joint.channels.size(); ++c) {
            if (!is_rotation(joint.channels[c])) continue;
            const auto col = static_cast<Eigen::Index>(sk.channel_offset(j) + c);
            frames.col(col) = src.frames().col(col);
        }
    }
    return global.with_frames(std::move(frames));
}

inline Motion compose(const Motion& global, const std::vector<LimbAssignment>& assignments,
                      const DatasetIndex& index) {
    std::vector<ResolvedAssignment> resolved;
    resolved.reserve(assignments.size());
    for (const auto& a : assignments) resolved.push_back({a.role, &index.at(a.source_id).motion});
    return compose(global, resolved, index.config);
}

// The accumulated selections of a design session plus the composed result.
struct CompositionState {
    std::optional<std::string> global_id;
    std::map<Role, std::string> assignments;  // limb role → source motion id
    std::shared_ptr<const Motion> result;

    bool empty() const { return !global_id && assignments.empty(); }

    // Selections only; the cached result follows from them.
    bool operator==(const CompositionState& o) const {
        return global_id == o.global_id && assignments == o.assignments;
    }
};

inline CompositionState recompose(CompositionState state, const DatasetIndex& index) {
    if (!state.global_id) {
        state.result.reset();
        return state;
    }
    std::vector<LimbAssignment> list;
    for (const auto& [role, id] : state.assignments) list.push_back({role, id});
    state.result = std::make_shared<const Motion>(compose(index.at(*state.global_id).motion, list, index));
    return state;
}

inline json composition_to_json(const CompositionState& s) {
    json assignments = json::object();
    for (const auto& [role, id] : s.assignments) assignments[std::string(to_string(role))] = id;
    return {{"global_id", s.global_id ? json(*s.global_id) : json(nullptr)}, {"assignments", assignments}};
}

inline CompositionState composition_from_json(const json& j) {
    CompositionState s;
    if (!j.at("global_id").is_null()) s.global_id = j.at("global_id").get<std::string>();
    for (const auto& [k, v] : j.at("assignments").items()) s.assignments[parse_role(k)] = v.get<std::string>();
    return s;
}

}  // namespace sketchmo
