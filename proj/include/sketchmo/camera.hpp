#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sketchmo/json_io.hpp"
#include "sketchmo/kinematics.hpp"
#include "sketchmo/roles.hpp"

namespace sketchmo {

enum class CameraMode { global, local };

inline std::string_view to_string(CameraMode m) { return m == CameraMode::global ? "global" : "local"; }

inline CameraMode camera_mode_from_string(std::string_view s) {
    if (s == "global") return CameraMode::global;
    if (s == "local") return CameraMode::local;
    throw ConfigError("unknown camera mode '" + std::string(s) + "'");
}

struct Viewport {
    int width = 800;
    int height = 600;
    bool operator==(const Viewport&) const = default;
};

// Stage camera. In local mode the eye is derived from the orbit sphere
// (target, radius, azimuth, elevation); in global mode eye is free.
struct Camera {
    CameraMode mode = CameraMode::global;
    Vec3 eye{0, 0, 10};
    Vec3 target{0, 0, 0};
    Vec3 up{0, 1, 0};
    double fov_deg = 45.0;
    bool orthographic = false;
    double ortho_scale = 10.0;  // canvas pixels per world unit
    double near_plane = 1e-3;
    Viewport viewport;
    double radius = 10.0;
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;

    bool operator==(const Camera&) const = default;
};

inline constexpr double kMaxElevationDeg = 89.0;

inline Vec3 orbit_direction(double azimuth_deg, double elevation_deg) {
    const double az = azimuth_deg * std::numbers::pi / 180.0;
    const double el = elevation_deg * std::numbers::pi / 180.0;
    return Vec3(std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az));
}

inline void place_on_orbit(Camera& c) { c.eye = c.target + c.radius * orbit_direction(c.azimuth_deg, c.elevation_deg); }

inline void validate(const Camera& c) {
    if (!c.eye.allFinite() || !c.target.allFinite() || !c.up.allFinite())
        throw ConfigError("camera vectors must be finite");
    if ((c.eye - c.target).norm() == 0.0) throw ConfigError("camera eye coincides with its target");
    if (c.up.norm() == 0.0) throw ConfigError("camera up vector is zero");
    if (std::abs(c.up.norm() - 1.0) > 1e-6) throw ConfigError("camera up vector must be unit length");
    const Vec3 forward = (c.target - c.eye).normalized();
    if (forward.cross(c.up).norm() < 1e-9) throw ConfigError("camera up vector is parallel to the view direction");
    if (c.viewport.width <= 0 || c.viewport.height <= 0) throw ConfigError("viewport must be positive");
    if (c.orthographic) {
        if (!(c.ortho_scale > 0.0)) throw ConfigError("orthographic scale must be positive");
    } else {
        if (!(c.fov_deg > 0.0 && c.fov_deg < 180.0)) throw ConfigError("field of view must be in (0, 180)");
        if (!(c.near_plane > 0.0)) throw ConfigError("near plane must be positive");
    }
    if (c.mode == CameraMode::local) {
        if (!(c.radius > 0.0)) throw ConfigError("orbit radius must be positive");
        if (std::abs((c.eye - c.target).norm() - c.radius) > 1e-6)
            throw ConfigError("local camera eye is off its orbit sphere");
    }
}

// Elevated three-quarter view of the ground around the origin, scaled to the
// character height.
inline Camera default_global_camera(double character_height, Viewport vp = {}) {
    Camera c;
    c.mode = CameraMode::global;
    c.target = Vec3::Zero();
    c.eye = character_height * Vec3(2.0, 1.5, 2.5);
    c.viewport = vp;
    c.radius = (c.eye - c.target).norm();
    return c;
}

inline Camera default_local_camera(const Vec3& reference, double character_height, Viewport vp = {}) {
    Camera c;
    c.mode = CameraMode::local;
    c.target = reference;
    c.radius = 3.0 * character_height;
    c.azimuth_deg = 0.0;
    c.elevation_deg = 10.0;
    c.viewport = vp;
    place_on_orbit(c);
    return c;
}

// Composed view + projection + viewport transform. `matrix` maps homogeneous
// world points to homogeneous canvas points (x, y, w); canvas origin is the
// top-left corner with y growing downward.
struct ProjectionMap {
    Eigen::Matrix<double, 3, 4> matrix;
    bool orthographic = false;
    double near_plane = 0.0;

    // nullopt when the point is on or behind the near plane.
    std::optional<Vec2> apply(const Vec3& p) const {
        const Eigen::Vector3d h = matrix * p.homogeneous();
        if (orthographic) return Vec2(h.x(), h.y());
        if (!(h.z() > near_plane)) return std::nullopt;
        return Vec2(h.x() / h.z(), h.y() / h.z());
    }
};

inline ProjectionMap projection_matrix(const Camera& c) {
    validate(c);
    const Vec3 f = (c.target - c.eye).normalized();
    const Vec3 s = f.cross(c.up).normalized();
    const Vec3 u = s.cross(f);

    // Rows: camera right, camera up, forward depth.
    Eigen::Matrix<double, 3, 4> view;
    view.block<1, 3>(0, 0) = s.transpose();
    view.block<1, 3>(1, 0) = u.transpose();
    view.block<1, 3>(2, 0) = f.transpose();
    view.col(3) = -(view.block<3, 3>(0, 0) * c.eye);

    const double cx = c.viewport.width / 2.0;
    const double cy = c.viewport.height / 2.0;
    Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
    ProjectionMap out;
    out.orthographic = c.orthographic;
    out.near_plane = c.near_plane;
    if (c.orthographic) {
        k << c.ortho_scale, 0, 0, 0, -c.ortho_scale, 0, 0, 0, 0;
        out.matrix = k * view;
        out.matrix.row(0)(3) += cx;
        out.matrix.row(1)(3) += cy;
        out.matrix.row(2) << 0, 0, 0, 1;
    } else {
        const double focal = cy / std::tan(c.fov_deg * std::numbers::pi / 360.0);
        k << focal, 0, cx, 0, -focal, cy, 0, 0, 1;
        out.matrix = k * view;
    }
    return out;
}

struct ProjectedPolyline {
    std::vector<Vec2> points;
    std::vector<bool> valid;  // false where the point fell behind the near plane
    std::string motion_id;
    Role role = Role::root;

    std::vector<Vec2> valid_points() const {
        std::vector<Vec2> out;
        out.reserve(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            if (valid[i]) out.push_back(points[i]);
        return out;
    }

    bool operator==(const ProjectedPolyline&) const = default;
};

// Global cameras take world-space paths. Local cameras take root-relative
// paths, which are re-anchored at the camera target before projecting.
inline ProjectedPolyline project_trajectory(const ProjectionMap& map, const Camera& camera, const Trajectory3D& traj,
                                            std::string motion_id = {}, Role role = Role::root) {
    if (traj.empty()) throw ProjectionError("cannot project an empty trajectory");
    ProjectedPolyline out;
    out.motion_id = std::move(motion_id);
    out.role = role;
    out.points.reserve(traj.size());
    out.valid.reserve(traj.size());
    std::size_t valid = 0;
    const bool anchor = camera.mode == CameraMode::local;
    for (const Vec3& p : traj) {
        const auto q = map.apply(anchor ? Vec3(camera.target + p) : p);
        out.points.push_back(q.value_or(Vec2(std::nan(""), std::nan(""))));
        out.valid.push_back(q.has_value());
        valid += q.has_value();
    }
    if (valid < 2)
        throw ProjectionError("trajectory of '" + out.motion_id + "' has fewer than 2 points in front of the camera");
    return out;
}

inline ProjectedPolyline project_trajectory(const Camera& camera, const Trajectory3D& traj, std::string motion_id = {},
                                            Role role = Role::root) {
    return project_trajectory(projection_matrix(camera), camera, traj, std::move(motion_id), role);
}

struct Pan {
    Vec3 delta;
};
struct Zoom {
    double factor;
};
struct Orbit {
    double d_azimuth_deg;
    double d_elevation_deg;
};
struct SetRadius {
    double radius;
};
using CameraAction = std::variant<Pan, Zoom, Orbit, SetRadius>;

// Pan moves eye and target together. Zoom scales the eye-target distance
// (perspective) or the pixel scale (orthographic). Orbit and SetRadius only
// apply to local cameras.
inline Camera update_camera(const Camera& camera, const CameraAction& action) {
    validate(camera);
    Camera c = camera;
    const bool local = c.mode == CameraMode::local;
    std::visit(
        [&](const auto& a) {
            using A = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<A, Pan>) {
                if (!a.delta.allFinite()) throw ConfigError("pan delta must be finite");
                c.target += a.delta;
                if (local)
                    place_on_orbit(c);
                else
                    c.eye += a.delta;
            } else if constexpr (std::is_same_v<A, Zoom>) {
                if (!(a.factor > 0.0) || !std::isfinite(a.factor)) throw ConfigError("zoom factor must be positive");
                if (a.factor == 1.0) return;
                if (c.orthographic) {
                    c.ortho_scale *= a.factor;
                } else if (local) {
                    c.radius *= a.factor;
                    place_on_orbit(c);
                } else {
                    c.eye = c.target + a.factor * (c.eye - c.target);
                }
            } else if constexpr (std::is_same_v<A, Orbit>) {
                if (!local) throw ConfigError("orbit is only available for the local camera");
                if (!std::isfinite(a.d_azimuth_deg) || !std::isfinite(a.d_elevation_deg))
                    throw ConfigError("orbit angles must be finite");
                c.azimuth_deg = std::remainder(c.azimuth_deg + a.d_azimuth_deg, 360.0);
                c.elevation_deg = std::clamp(c.elevation_deg + a.d_elevation_deg, -kMaxElevationDeg, kMaxElevationDeg);
                place_on_orbit(c);
            } else {
                if (!local) throw ConfigError("radius is only adjustable for the local camera");
                if (!(a.radius > 0.0) || !std::isfinite(a.radius)) throw ConfigError("radius must be positive");
                c.radius = a.radius;
                place_on_orbit(c);
            }
        },
        action);
    validate(c);
    return c;
}

inline json camera_to_json(const Camera& c) {
    return {{"mode", std::string(to_string(c.mode))},
            {"eye", to_json_value(c.eye)},
            {"target", to_json_value(c.target)},
            {"up", to_json_value(c.up)},
            {"fov", c.fov_deg},
            {"orthographic", c.orthographic},
            {"ortho_scale", c.ortho_scale},
            {"near", c.near_plane},
            {"viewport", {{"width", c.viewport.width}, {"height", c.viewport.height}}},
            {"radius", c.radius},
            {"azimuth", c.azimuth_deg},
            {"elevation", c.elevation_deg}};
}

// Missing fields keep the values of `base`. Local cameras are re-placed on
// their orbit sphere unless an explicit eye is given.
inline Camera camera_from_json(const json& j, Camera base = {}) {
    Camera c = std::move(base);
    try {
        if (j.contains("mode")) c.mode = camera_mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("target")) c.target = vec3_from_json(j.at("target"));
        if (j.contains("up")) {
            c.up = vec3_from_json(j.at("up"));
            if (c.up.norm() > 0.0) c.up.normalize();
        }
        c.fov_deg = j.value("fov", c.fov_deg);
        c.orthographic = j.value("orthographic", c.orthographic);
        c.ortho_scale = j.value("ortho_scale", c.ortho_scale);
        c.near_plane = j.value("near", c.near_plane);
        if (j.contains("viewport")) {
            c.viewport.width = j.at("viewport").value("width", c.viewport.width);
            c.viewport.height = j.at("viewport").value("height", c.viewport.height);
        }
        c.radius = j.value("radius", c.radius);
        c.azimuth_deg = j.value("azimuth", c.azimuth_deg);
        c.elevation_deg = j.value("elevation", c.elevation_deg);
        if (j.contains("eye")) {
            c.eye = vec3_from_json(j.at("eye"));
        } else if (c.mode == CameraMode::local) {
            place_on_orbit(c);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad camera json: ") + e.what());
    }
    validate(c);
    return c;
}

}  // namespace sketchmo
