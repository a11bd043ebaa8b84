#pragma once

// nlohmann/json conversions for the core value types.

#include <json.hpp>

#include "sketchmo/motion.hpp"

namespace sketchmo {

using json = nlohmann::json;

inline json to_json_value(const Vec2& v) { return json::array({v.x(), v.y()}); }
inline json to_json_value(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Vec2 vec2_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw StructureError("expected [x, y], got " + j.dump());
    return Vec2(j[0].get<double>(), j[1].get<double>());
}

inline Vec3 vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw StructureError("expected [x, y, z], got " + j.dump());
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

template <class Points>
json points_to_json(const Points& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back(to_json_value(p));
    return out;
}

inline json skeleton_to_json(const Skeleton& sk) {
    json joints = json::array();
    for (const Joint& j : sk.joints()) {
        json channels = json::array();
        for (Channel c : j.channels) channels.push_back(std::string(to_string(c)));
        joints.push_back({
            {"name", j.name},
            {"parent", j.parent ? json(*j.parent) : json(nullptr)},
            {"offset", to_json_value(j.offset)},
            {"channels", std::move(channels)},
            {"end_site", j.end_site ? to_json_value(*j.end_site) : json(nullptr)},
        });
    }
    return joints;
}

inline Skeleton skeleton_from_json(const json& arr) {
    std::vector<Joint> joints;
    for (const json& j : arr) {
        Joint joint;
        joint.name = j.at("name").get<std::string>();
        if (!j.at("parent").is_null()) joint.parent = j.at("parent").get<std::size_t>();
        joint.offset = vec3_from_json(j.at("offset"));
        for (const json& c : j.at("channels")) {
            const auto ch = channel_from_string(c.get<std::string>());
            if (!ch) throw StructureError("unknown channel " + c.dump());
            joint.channels.push_back(*ch);
        }
        if (!j.at("end_site").is_null()) joint.end_site = vec3_from_json(j.at("end_site"));
        joints.push_back(std::move(joint));
    }
    return Skeleton(std::move(joints));
}

inline json motion_to_json(const Motion& m) {
    json rows = json::array();
    const FrameMatrix& f = m.frames();
    for (Eigen::Index r = 0; r < f.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < f.cols(); ++c) row.push_back(f(r, c));
        rows.push_back(std::move(row));
    }
    return {
        {"id", m.id()},
        {"label", m.label()},
        {"frame_time", m.frame_time()},
        {"skeleton", skeleton_to_json(m.skeleton())},
        {"frames", std::move(rows)},
    };
}

inline Motion motion_from_json(const json& j) {
    Skeleton sk = skeleton_from_json(j.at("skeleton"));
    const json& rows = j.at("frames");
    FrameMatrix f(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(sk.channel_count()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != sk.channel_count())
            throw StructureError("frame row " + std::to_string(r) + " has wrong width");
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            f(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c].get<double>();
    }
    return Motion(std::move(sk), j.at("frame_time").get<double>(), std::move(f), j.at("id").get<std::string>(),
                  j.at("label").get<std::string>());
}

}  // namespace sketchmo
