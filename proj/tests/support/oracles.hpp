#pragma once

// Reference computations that share no code path with the library. Tests
// compare library output against these.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Geometry>

#include "sketchmo/motion.hpp"

namespace oracle {

using sketchmo::Vec2;
using sketchmo::Vec3;

// Minimum over every monotone coupling path of the maximum paired distance,
// found by exhaustive depth-first enumeration of the paths.
inline double frechet_bruteforce(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    auto walk = [&](auto&& self, std::size_t i, std::size_t j, double worst) -> void {
        worst = std::max(worst, std::hypot(a[i].x() - b[j].x(), a[i].y() - b[j].y()));
        if (worst >= best) return;  // cannot improve
        if (i == n - 1 && j == m - 1) {
            best = worst;
            return;
        }
        if (i + 1 < n) self(self, i + 1, j, worst);
        if (j + 1 < m) self(self, i, j + 1, worst);
        if (i + 1 < n && j + 1 < m) self(self, i + 1, j + 1, worst);
    };
    walk(walk, 0, 0, 0.0);
    return best;
}

// Rotation via Eigen's angle-axis type, composed in the given axis order.
inline Eigen::Matrix3d euler_rotation(const std::vector<int>& axes, const std::vector<double>& degrees) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    for (std::size_t k = 0; k < axes.size(); ++k) {
        const Eigen::Vector3d axis = Eigen::Vector3d::Unit(axes[k]);
        r = r * Eigen::AngleAxisd(degrees[k] * std::numbers::pi / 180.0, axis).toRotationMatrix();
    }
    return r;
}

// Recursive world-space joint positions using Eigen affine transforms.
inline std::vector<Vec3> fk_positions(const sketchmo::Motion& m, std::size_t frame) {
    const auto& sk = m.skeleton();
    std::vector<Eigen::Affine3d> world(sk.size());
    std::vector<Vec3> out(sk.size());
    std::size_t col = 0;
    for (std::size_t i = 0; i < sk.size(); ++i) {
        const auto& j = sk.joint(i);
        Eigen::Affine3d local = Eigen::Affine3d::Identity();
        local.translate(j.offset);
        std::vector<int> axes;
        std::vector<double> angles;
        for (auto c : j.channels) {
            const double v = m.frames()(static_cast<Eigen::Index>(frame), static_cast<Eigen::Index>(col++));
            if (sketchmo::is_rotation(c)) {
                axes.push_back(sketchmo::channel_axis(c));
                angles.push_back(v);
            } else {
                local.pretranslate(Vec3::Unit(sketchmo::channel_axis(c)) * v);
            }
        }
        local.rotate(euler_rotation(axes, angles));
        world[i] = j.parent ? Eigen::Affine3d(world[*j.parent] * local) : local;
        out[i] = world[i].translation();
    }
    return out;
}

// Pinhole camera built directly from eye/target/up and the vertical field of
// view: intersect the ray with the image plane at unit distance.
inline Vec2 pinhole(const Vec3& eye, const Vec3& target, const Vec3& up, double fov_deg, int width, int height,
                    const Vec3& p) {
    const Vec3 forward = (target - eye).normalized();
    const Vec3 right = forward.cross(up).normalized();
    const Vec3 true_up = right.cross(forward);
    const Vec3 d = p - eye;
    const double depth = d.dot(forward);
    const double half_h = std::tan(fov_deg * std::numbers::pi / 360.0);
    const double x_plane = d.dot(right) / depth;  // on the plane at distance 1
    const double y_plane = d.dot(true_up) / depth;
    const double pixels_per_unit = (height / 2.0) / half_h;
    return Vec2(width / 2.0 + x_plane * pixels_per_unit, height / 2.0 - y_plane * pixels_per_unit);
}

// Sum over frames and joints, divided by frames × joints, written directly
// from the definition.
inline double euler_mse(const sketchmo::Motion& a, const sketchmo::Motion& b) {
    const auto& sk = a.skeleton();
    double sum = 0.0;
    std::size_t joints = 0;
    for (std::size_t j = 0; j < sk.size(); ++j) {
        bool has_rotation = false;
        for (auto c : sk.joint(j).channels) has_rotation |= sketchmo::is_rotation(c);
        if (!has_rotation) continue;
        ++joints;
        for (std::size_t t = 0; t < a.frame_count(); ++t) {
            Vec3 da = Vec3::Zero();
            for (std::size_t c = 0; c < sk.joint(j).channels.size(); ++c) {
                const auto ch = sk.joint(j).channels[c];
                if (sketchmo::is_rotation(ch))
                    da[sketchmo::channel_axis(ch)] = a.value(t, j, c) - b.value(t, j, c);
            }
            sum += da.squaredNorm();
        }
    }
    return sum / static_cast<double>(a.frame_count() * joints);
}

}  // namespace oracle
