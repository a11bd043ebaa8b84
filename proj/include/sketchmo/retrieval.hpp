#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sketchmo/camera.hpp"
#include "sketchmo/dataset.hpp"
#include "sketchmo/parallel.hpp"

namespace sketchmo {

inline constexpr std::size_t kDefaultTopN = 5;
inline constexpr std::size_t kDefaultSamples = 100;

// A user sketch: the captured points and their arc-length-uniform resampling.
// Timing of the capture is not kept.
struct Stroke2D {
    std::vector<Vec2> raw;
    std::vector<Vec2> resampled;
};

// `count` points at equal arc-length spacing along the polyline; the end
// points are copied exactly.
inline std::vector<Vec2> resample_polyline(std::span<const Vec2> pts, std::size_t count) {
    if (count < 2) throw DegenerateStrokeError("resample count must be at least 2");
    if (pts.size() < 2) throw DegenerateStrokeError("a stroke needs at least 2 points");
    for (const Vec2& p : pts)
        if (!p.allFinite()) throw DegenerateStrokeError("stroke contains a non-finite point");

    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
    const double total = cum.back();
    if (!(total > 0.0)) throw DegenerateStrokeError("all stroke points coincide");

    std::vector<Vec2> out;
    out.reserve(count);
    out.push_back(pts.front());
    std::size_t seg = 0;
    for (std::size_t k = 1; k + 1 < count; ++k) {
        const double s = total * static_cast<double>(k) / static_cast<double>(count - 1);
        while (seg + 2 < pts.size() && cum[seg + 1] < s) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0.0 ? std::clamp((s - cum[seg]) / len, 0.0, 1.0) : 0.0;
        out.push_back(pts[seg] + t * (pts[seg + 1] - pts[seg]));
    }
    out.push_back(pts.back());
    return out;
}

inline Stroke2D resample_stroke(std::span<const Vec2> raw, std::size_t count = kDefaultSamples) {
    return Stroke2D{std::vector<Vec2>(raw.begin(), raw.end()), resample_polyline(raw, count)};
}

inline double polyline_length(std::span<const Vec2> pts) {
    double len = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) len += (pts[i] - pts[i - 1]).norm();
    return len;
}

// Discrete Fréchet distance: the smallest achievable maximum pair distance
// over monotone couplings of the two vertex sequences. O(|a|·|b|) time,
// O(|b|) memory. Works on squared distances; exact ties make it symmetric.
inline double frechet_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("frechet_distance needs non-empty polylines");
    std::vector<double> row(b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double diag = 0.0;  // row[j-1] of the previous row
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = (a[i] - b[j]).squaredNorm();
            const double up = row[j];
            double best;
            if (i == 0 && j == 0)
                best = d;
            else if (i == 0)
                best = std::max(row[j - 1], d);
            else if (j == 0)
                best = std::max(up, d);
            else
                best = std::max(std::min({up, row[j - 1], diag}), d);
            diag = up;
            row[j] = best;
        }
    }
    return std::sqrt(row.back());
}

struct RetrievalConfig {
    std::size_t top_n = kDefaultTopN;
    std::size_t samples = kDefaultSamples;
    CameraMode stage = CameraMode::global;
    std::optional<Role> target;  // required in the local stage

    // Role whose trajectories are searched.
    Role role() const { return stage == CameraMode::global ? Role::root : target.value_or(Role::root); }

    void validate() const {
        if (top_n < 1) throw QueryError("top N must be at least 1");
        if (samples < 2) throw QueryError("sample count must be at least 2");
        if (stage == CameraMode::local) {
            if (!target) throw QueryError("local queries need a target role");
            if (!is_limb(*target)) throw QueryError("local queries target head, left_hand or right_hand");
        } else if (target && *target != Role::root) {
            throw QueryError("global queries search the root trajectory only");
        }
    }
};

struct Candidate {
    std::string motion_id;
    Role role = Role::root;
    double similarity = 0.0;  // Fréchet distance in canvas pixels
    ProjectedPolyline polyline;
    std::size_t rank = 0;  // 1-based
};

// The polyline compared against a stroke: the valid projected points,
// resampled like a stroke so that playback speed does not affect matching.
// Trajectories with no extent are compared as-is.
inline std::vector<Vec2> matching_polyline(const ProjectedPolyline& poly, std::size_t samples) {
    std::vector<Vec2> pts = poly.valid_points();
    if (polyline_length(pts) > 0.0) return resample_polyline(pts, samples);
    return pts;
}

// Ranks every index entry against the stroke under one camera. Entries whose
// projection is degenerate are left out. Ties break on entry id.
inline std::vector<Candidate> query(const Stroke2D& stroke, const Camera& camera, const DatasetIndex& index,
                                    const RetrievalConfig& cfg, std::size_t max_threads = 0) {
    cfg.validate();
    if (index.entries.empty()) throw QueryError("dataset index is empty");
    if (camera.mode != cfg.stage) throw QueryError("camera mode does not match the query stage");
    if (stroke.resampled.empty()) throw QueryError("stroke has not been resampled");
    const ProjectionMap map = projection_matrix(camera);
    const Role role = cfg.role();

    std::vector<std::optional<Candidate>> scored(index.entries.size());
    detail::parallel_for(
        index.entries.size(),
        [&](std::size_t i) {
            const DatasetEntry& e = index.entries[i];
            try {
                ProjectedPolyline poly = project_trajectory(map, camera, e.trajectory(role), e.id, role);
                const double sim = frechet_distance(stroke.resampled, matching_polyline(poly, cfg.samples));
                scored[i] = Candidate{e.id, role, sim, std::move(poly), 0};
            } catch (const ProjectionError&) {
            } catch (const DegenerateStrokeError&) {
            }
        },
        max_threads);

    std::vector<Candidate> out;
    for (auto& c : scored)
        if (c) out.push_back(std::move(*c));
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        if (a.similarity != b.similarity) return a.similarity < b.similarity;
        return a.motion_id < b.motion_id;
    });
    if (out.size() > cfg.top_n) out.resize(cfg.top_n);
    for (std::size_t r = 0; r < out.size(); ++r) out[r].rank = r + 1;
    return out;
}

struct GuidancePolyline {
    std::size_t rank;
    double similarity;
    ProjectedPolyline polyline;
};

// Overlay polylines for the candidates, unchanged, in rank order.
inline std::vector<GuidancePolyline> shadow_guidance(const std::vector<Candidate>& candidates) {
    std::vector<GuidancePolyline> out;
    out.reserve(candidates.size());
    for (const Candidate& c : candidates) out.push_back({c.rank, c.similarity, c.polyline});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
    return out;
}

inline json polyline_points_to_json(const ProjectedPolyline& p) {
    json pts = json::array();
    for (std::size_t i = 0; i < p.points.size(); ++i)
        pts.push_back(p.valid[i] ? to_json_value(p.points[i]) : json(nullptr));
    return pts;
}

inline json candidates_to_json(const std::vector<Candidate>& cs) {
    json out = json::array();
    for (const Candidate& c : cs)
        out.push_back({{"motion_id", c.motion_id},
                       {"joint_role", std::string(to_string(c.role))},
                       {"similarity", c.similarity},
                       {"rank", c.rank},
                       {"polyline", polyline_points_to_json(c.polyline)}});
    return out;
}

inline json guidance_to_json(const std::vector<GuidancePolyline>& gs) {
    json out = json::array();
    for (const auto& g : gs)
        out.push_back({{"rank", g.rank},
                       {"similarity", g.similarity},
                       {"motion_id", g.polyline.motion_id},
                       {"joint_role", std::string(to_string(g.polyline.role))},
                       {"points", polyline_points_to_json(g.polyline)}});
    return out;
}

inline std::vector<Vec2> stroke_points_from_json(const json& j) {
    if (!j.is_array()) throw DegenerateStrokeError("stroke must be an array of [x, y] points");
    std::vector<Vec2> pts;
    pts.reserve(j.size());
    for (const json& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw DegenerateStrokeError("stroke points must be [x, y] number pairs");
        pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return pts;
}

}  // namespace sketchmo
