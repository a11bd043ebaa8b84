#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sketchmo/json_io.hpp"
#include "sketchmo/motion.hpp"

namespace sketchmo {

struct JointError {
    std::string joint;
    double mse;  // mean over frames of the squared Euler difference norm
};

struct EvalReport {
    double mse = 0.0;  // degrees²
    std::vector<JointError> per_joint;
    std::size_t frames = 0;
    std::size_t joints = 0;
    std::optional<double> elapsed_seconds;
    std::optional<std::size_t> operations;
};

struct EvalOptions {
    // Compare angles modulo 360° (difference folded into [-180, 180]).
    bool wrap_angles = false;
};

// Mean over frames and joints of the squared norm of each joint's Euler-angle
// difference. Only joints with rotation channels count; root translation is
// ignored.
inline EvalReport mse(const Motion& designed, const Motion& reference, EvalOptions opts = {}) {
    const Skeleton& sk = designed.skeleton();
    if (!sk.same_layout(reference.skeleton())) throw EvaluationError("motions do not share a skeleton layout");
    if (designed.frame_count() != reference.frame_count())
        throw EvaluationError("frame counts differ: " + std::to_string(designed.frame_count()) + " vs " +
                              std::to_string(reference.frame_count()));

    EvalReport report;
    report.frames = designed.frame_count();
    const auto& a = designed.frames();
    const auto& b = reference.frames();
    double total = 0.0;
    for (std::size_t j = 0; j < sk.size(); ++j) {
        const Joint& joint = sk.joint(j);
        std::vector<Eigen::Index> cols;
        for (std::size_t c = 0; c < joint.channels.size(); ++c)
            if (is_rotation(joint.channels[c])) cols.push_back(static_cast<Eigen::Index>(sk.channel_offset(j) + c));
        if (cols.empty()) continue;
        double sum = 0.0;
        for (Eigen::Index t = 0; t < a.rows(); ++t) {
            for (Eigen::Index col : cols) {
                double d = a(t, col) - b(t, col);
                if (opts.wrap_angles) d = std::remainder(d, 360.0);
                sum += d * d;
            }
        }
        const double joint_mse = sum / static_cast<double>(report.frames);
        report.per_joint.push_back({joint.name, joint_mse});
        total += joint_mse;
    }
    report.joints = report.per_joint.size();
    if (report.joints == 0) throw EvaluationError("skeleton has no rotation channels");
    report.mse = total / static_cast<double>(report.joints);
    return report;
}

// Joints sorted by descending error, at most `n`.
inline std::vector<JointError> top_offenders(const EvalReport& r, std::size_t n) {
    std::vector<JointError> out = r.per_joint;
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.mse > y.mse; });
    if (out.size() > n) out.resize(n);
    return out;
}

inline json report_to_json(const EvalReport& r) {
    json per_joint = json::array();
    for (const auto& j : r.per_joint) per_joint.push_back({{"joint", j.joint}, {"mse", j.mse}});
    json out = {{"mse", r.mse}, {"per_joint", per_joint}, {"frames", r.frames}, {"joints", r.joints}};
    out["elapsed_seconds"] = r.elapsed_seconds ? json(*r.elapsed_seconds) : json(nullptr);
    out["operations"] = r.operations ? json(*r.operations) : json(nullptr);
    return out;
}

}  // namespace sketchmo
