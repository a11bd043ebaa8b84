#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sketchmo/bvh.hpp"
#include "sketchmo/json_io.hpp"
#include "sketchmo/kinematics.hpp"
#include "sketchmo/parallel.hpp"
#include "sketchmo/roles.hpp"

namespace sketchmo {

inline constexpr std::string_view kIndexVersion = "sketchmo-index/1";
inline constexpr std::size_t kDefaultFrames = 100;

// Role → joint name tables plus trimming parameters, read from the roles file.
struct DatasetConfig {
    // Tracked joint for every role in kAllRoles.
    std::map<Role, std::string> joints;
    // Subtree anchor per limb role: left shoulder, right shoulder, lower neck.
    std::map<Role, std::string> anchors;
    std::size_t frames = kDefaultFrames;
    // Optional per-entry category labels keyed by entry id.
    std::map<std::string, std::string> labels;

    const std::string& joint_for(Role r) const {
        auto it = joints.find(r);
        if (it == joints.end()) throw MappingError("role '" + std::string(to_string(r)) + "' is not mapped");
        return it->second;
    }

    const std::string& anchor_for(Role r) const {
        auto it = anchors.find(r);
        if (it == anchors.end())
            throw MappingError("role '" + std::string(to_string(r)) + "' has no subtree anchor");
        return it->second;
    }

    bool operator==(const DatasetConfig&) const = default;
};

inline json config_to_json(const DatasetConfig& c) {
    json joints = json::object();
    for (const auto& [r, name] : c.joints) joints[std::string(to_string(r))] = name;
    json anchors = json::object();
    for (const auto& [r, name] : c.anchors) anchors[std::string(to_string(r))] = name;
    return {{"joints", joints}, {"anchors", anchors}, {"frames", c.frames}, {"labels", c.labels}};
}

inline DatasetConfig config_from_json(const json& j) {
    DatasetConfig c;
    for (const auto& [k, v] : j.at("joints").items()) c.joints[parse_role(k)] = v.get<std::string>();
    if (j.contains("anchors"))
        for (const auto& [k, v] : j.at("anchors").items()) {
            const Role r = parse_role(k);
            if (!is_limb(r)) throw MappingError("root cannot have a subtree anchor");
            c.anchors[r] = v.get<std::string>();
        }
    c.frames = j.value("frames", kDefaultFrames);
    if (c.frames < 2) throw BuildError("frames must be at least 2");
    if (j.contains("labels")) c.labels = j.at("labels").get<std::map<std::string, std::string>>();
    return c;
}

inline DatasetConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw LookupError("cannot open roles file '" + path.string() + "'");
    try {
        return config_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw StructureError("roles file '" + path.string() + "': " + e.what());
    }
}

struct DatasetEntry {
    std::string id;
    std::string source;
    std::string label;
    Motion motion;  // trimmed and origin-anchored
    // Root: world path. Limb roles: path relative to the root at the same frame.
    std::map<Role, Trajectory3D> trajectories;

    const Trajectory3D& trajectory(Role r) const {
        auto it = trajectories.find(r);
        if (it == trajectories.end()) throw LookupError("entry '" + id + "' has no trajectory for role");
        return it->second;
    }

    bool operator==(const DatasetEntry& o) const {
        return id == o.id && source == o.source && label == o.label && motion == o.motion &&
               trajectories == o.trajectories;
    }
};

// Extracts [start, start + frames) and shifts the root position channels so
// the first-frame root sits at the origin.
inline DatasetEntry build_entry(const Motion& motion, std::size_t start, const DatasetConfig& config) {
    const std::size_t frames = config.frames;
    if (start + frames > motion.frame_count())
        throw TrimError("window [" + std::to_string(start) + ", " + std::to_string(start + frames) +
                        ") exceeds " + std::to_string(motion.frame_count()) + " frames");
    const Skeleton& sk = motion.skeleton();
    std::map<Role, std::size_t> joint_of;
    for (Role r : kAllRoles) {
        const std::string& name = config.joint_for(r);
        const auto idx = sk.find(name);
        if (!idx) throw MappingError("role '" + std::string(to_string(r)) + "' maps to missing joint '" + name + "'");
        joint_of[r] = *idx;
    }
    if (joint_of[Role::root] != 0)
        throw MappingError("root role must map to the skeleton root '" + sk.joint(0).name + "'");

    FrameMatrix window = motion.frames().middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(frames));
    Motion trimmed = motion.with_frames(window);

    // Root world position is offset + translation; no rotation reaches it.
    const Vec3 origin_shift = sk.joint(0).offset + root_translation(trimmed, 0);
    const Joint& root = sk.joint(0);
    for (std::size_t c = 0; c < root.channels.size(); ++c) {
        if (!is_position(root.channels[c])) continue;
        const double d = origin_shift[channel_axis(root.channels[c])];
        if (d != 0.0) window.col(static_cast<Eigen::Index>(c)).array() -= d;
    }
    trimmed = motion.with_frames(std::move(window));

    std::string label = motion.label();
    if (auto it = config.labels.find(motion.id()); it != config.labels.end()) label = it->second;

    DatasetEntry entry{motion.id(), {}, label, trimmed.with_identity(motion.id(), label), {}};
    const Trajectory3D root_path = joint_trajectory(entry.motion, joint_of[Role::root]);
    for (Role r : kLimbRoles) {
        Trajectory3D local = joint_trajectory(entry.motion, joint_of[r]);
        for (std::size_t f = 0; f < local.size(); ++f) local[f] -= root_path[f];
        entry.trajectories[r] = std::move(local);
    }
    entry.trajectories[Role::root] = root_path;
    return entry;
}

struct DatasetIndex {
    std::string version{kIndexVersion};
    DatasetConfig config;
    std::vector<DatasetEntry> entries;  // sorted by id

    std::size_t frames() const { return config.frames; }

    const DatasetEntry* find(std::string_view id) const {
        auto it = std::lower_bound(entries.begin(), entries.end(), id,
                                   [](const DatasetEntry& e, std::string_view v) { return e.id < v; });
        if (it == entries.end() || it->id != id) return nullptr;
        return &*it;
    }

    const DatasetEntry& at(std::string_view id) const {
        if (const auto* e = find(id)) return *e;
        throw LookupError("unknown motion id '" + std::string(id) + "'");
    }

    bool operator==(const DatasetIndex&) const = default;
};

struct SkippedFile {
    std::string file;
    std::string reason;
};

struct BuildReport {
    DatasetIndex index;
    std::vector<SkippedFile> skipped;
};

// One entry per .bvh file in `directory` (window start 0). Files that fail to
// parse, are too short, or lack mapped joints are reported and skipped.
inline BuildReport build_index(const std::filesystem::path& directory, const DatasetConfig& config) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw BuildError("'" + directory.string() + "' is not a directory");
    std::vector<fs::path> files;
    for (const auto& de : fs::directory_iterator(directory)) {
        if (!de.is_regular_file()) continue;
        std::string ext = de.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".bvh") files.push_back(de.path());
    }
    if (files.empty()) throw BuildError("no .bvh files in '" + directory.string() + "'");
    std::sort(files.begin(), files.end());

    std::vector<std::optional<DatasetEntry>> built(files.size());
    std::vector<std::string> reasons(files.size());
    detail::parallel_for(files.size(), [&](std::size_t i) {
        try {
            DatasetEntry e = build_entry(load_bvh(files[i]), 0, config);
            e.source = files[i].filename().string();
            built[i] = std::move(e);
        } catch (const Error& err) {
            reasons[i] = err.what();
        }
    });

    BuildReport report;
    report.index.config = config;
    for (std::size_t i = 0; i < files.size(); ++i) {
        if (built[i])
            report.index.entries.push_back(std::move(*built[i]));
        else
            report.skipped.push_back({files[i].filename().string(), reasons[i]});
    }
    std::sort(report.index.entries.begin(), report.index.entries.end(),
              [](const DatasetEntry& a, const DatasetEntry& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < report.index.entries.size(); ++i)
        if (report.index.entries[i].id == report.index.entries[i - 1].id)
            throw BuildError("duplicate entry id '" + report.index.entries[i].id + "'");
    if (report.index.entries.empty()) throw BuildError("no usable motions in '" + directory.string() + "'");
    return report;
}

inline json index_to_json(const DatasetIndex& index) {
    json entries = json::array();
    for (const DatasetEntry& e : index.entries) {
        json trajs = json::object();
        for (const auto& [r, t] : e.trajectories) trajs[std::string(to_string(r))] = points_to_json(t);
        entries.push_back({{"id", e.id},
                           {"source", e.source},
                           {"label", e.label},
                           {"motion", motion_to_json(e.motion)},
                           {"trajectories", std::move(trajs)}});
    }
    return {{"version", index.version},
            {"frames", index.config.frames},
            {"config", config_to_json(index.config)},
            {"entries", std::move(entries)}};
}

inline DatasetIndex index_from_json(const json& j) {
    DatasetIndex index;
    index.version = j.at("version").get<std::string>();
    if (index.version != kIndexVersion) throw BuildError("unsupported index version '" + index.version + "'");
    index.config = config_from_json(j.at("config"));
    if (j.at("frames").get<std::size_t>() != index.config.frames) throw BuildError("inconsistent frame count");
    for (const json& je : j.at("entries")) {
        DatasetEntry e{je.at("id").get<std::string>(), je.at("source").get<std::string>(),
                       je.at("label").get<std::string>(), motion_from_json(je.at("motion")), {}};
        if (e.motion.frame_count() != index.config.frames)
            throw BuildError("entry '" + e.id + "' does not have " + std::to_string(index.config.frames) + " frames");
        for (const auto& [k, v] : je.at("trajectories").items()) {
            Trajectory3D t;
            for (const json& p : v) t.push_back(vec3_from_json(p));
            if (t.size() != index.config.frames) throw BuildError("entry '" + e.id + "' has a short trajectory");
            e.trajectories[parse_role(k)] = std::move(t);
        }
        for (Role r : kAllRoles)
            if (!e.trajectories.contains(r))
                throw BuildError("entry '" + e.id + "' lacks the " + std::string(to_string(r)) + " trajectory");
        index.entries.push_back(std::move(e));
    }
    for (std::size_t i = 1; i < index.entries.size(); ++i)
        if (!(index.entries[i - 1].id < index.entries[i].id))
            throw BuildError("index entries are not sorted by unique id");
    return index;
}

inline std::string save_index(const DatasetIndex& index) { return index_to_json(index).dump(1) + "\n"; }

inline void save_index(const DatasetIndex& index, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw LookupError("cannot write '" + path.string() + "'");
    out << save_index(index);
}

inline DatasetIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LookupError("cannot open index '" + path.string() + "'");
    try {
        return index_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw StructureError("index '" + path.string() + "': " + e.what());
    }
}

}  // namespace sketchmo
