// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/camera.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "scenecore/error.hpp"
#include "scenecore/rng.hpp"

namespace scenecore {

Eigen::Matrix3d Intrinsics::matrix() const {
    Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
    k(0, 0) = fx;
    k(1, 1) = fy;
    k(0, 2) = cx;
    k(1, 2) = cy;
    return k;
}

Eigen::Matrix3d Intrinsics::inverse_matrix() const {
    Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
    k(0, 0) = 1.0 / fx;
    k(1, 1) = 1.0 / fy;
    k(0, 2) = -cx / fx;
    k(1, 2) = -cy / fy;
    return k;
}

bool Intrinsics::valid() const {
    return fx > 0.0 && fy > 0.0 && cx > 0.0 && cx < width && cy > 0.0 && cy < height &&
           width > 0 && height > 0;
}

Intrinsics Intrinsics::rescaled(int new_width, int new_height) const {
    const double sx = static_cast<double>(new_width) / width;
    const double sy = static_cast<double>(new_height) / height;
    return Intrinsics{fx * sx, fy * sy, cx * sx, cy * sy, new_width, new_height};
}

Pose Pose::inverse() const {
    Pose out;
    out.rotation = rotation.transpose();
    out.translation = -(rotation.transpose() * translation);
    return out;
}

Pose Pose::compose(const Pose& other) const {
    Pose out;
    out.rotation = rotation * other.rotation;
    out.translation = rotation * other.translation + translation;
    return out;
}

Eigen::Vector3d Pose::apply(const Eigen::Vector3d& p) const {
    return rotation * p + translation;
}

Eigen::Vector3d Pose::to_camera(const Eigen::Vector3d& world) const {
    return rotation.transpose() * (world - translation);
}

bool Pose::is_valid_rotation(double tol) const {
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(rotation.determinant() - 1.0) <= tol;
}

Trajectory make_relative(const Trajectory& trajectory) {
    if (trajectory.empty()) throw EmptyTrajectory();
    const Pose base_inv = trajectory.frames.front().pose.inverse();
    Trajectory out = trajectory;
    out.convention = TrajectoryConvention::first_frame_relative;
    for (size_t i = 0; i < out.frames.size(); ++i) {
        out.frames[i].pose = base_inv.compose(trajectory.frames[i].pose);
    }
    // Frame 0 is identity by construction; pin it exactly.
    out.frames.front().pose = Pose::identity();
    return out;
}

Ray pixel_ray_at(const CameraFrame& frame, double u, double v) {
    const Eigen::Vector3d dir_cam = frame.intrinsics.inverse_matrix() * Eigen::Vector3d(u, v, 1.0);
    Ray ray;
    ray.origin = frame.pose.center();
    ray.direction = (frame.pose.rotation * dir_cam).normalized();
    return ray;
}

Ray pixel_ray(const CameraFrame& frame, int u, int v) {
    if (u < 0 || v < 0 || u >= frame.intrinsics.width || v >= frame.intrinsics.height) {
        throw PixelOutOfBounds("pixel (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    return pixel_ray_at(frame, u + 0.5, v + 0.5);
}

RayEmbeddingMap ray_embedding_map(const CameraFrame& frame) {
    RayEmbeddingMap map;
    map.width = frame.intrinsics.width;
    map.height = frame.intrinsics.height;
    map.data.resize(static_cast<size_t>(map.width) * map.height * 6);
    const Eigen::Matrix3d rk_inv = frame.pose.rotation * frame.intrinsics.inverse_matrix();
    const Eigen::Vector3d origin = frame.pose.center();
    for (int v = 0; v < map.height; ++v) {
        for (int u = 0; u < map.width; ++u) {
            const Eigen::Vector3d d = (rk_inv * Eigen::Vector3d(u + 0.5, v + 0.5, 1.0)).normalized();
            const Eigen::Vector3d m = origin.cross(d);
            for (int c = 0; c < 3; ++c) map.at(v, u, c) = m[c];
            for (int c = 0; c < 3; ++c) map.at(v, u, 3 + c) = d[c];
        }
    }
    return map;
}

namespace {

Eigen::Matrix3d rot_y(double angle) {
    Eigen::Matrix3d r;
    const double c = std::cos(angle), s = std::sin(angle);
    r << c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c;
    return r;
}

}  // namespace

Trajectory generate_trajectory(TrajectoryKind kind, int n_frames, double magnitude,
                               const CameraFrame& base) {
    if (n_frames < 2) throw InvalidFrameCount("need at least 2 frames");
    Trajectory out;
    out.convention = TrajectoryConvention::first_frame_relative;
    out.frames.reserve(n_frames);
    for (int i = 0; i < n_frames; ++i) {
        const double t = static_cast<double>(i) / (n_frames - 1);
        Pose local;  // motion expressed in the base camera frame
        switch (kind) {
            case TrajectoryKind::zoom_in:
                local.translation = Eigen::Vector3d(0.0, 0.0, magnitude * t);
                break;
            case TrajectoryKind::zoom_out:
                local.translation = Eigen::Vector3d(0.0, 0.0, -magnitude * t);
                break;
            case TrajectoryKind::pan_left:
                local.translation = Eigen::Vector3d(-magnitude * t, 0.0, 0.0);
                break;
            case TrajectoryKind::pan_right:
                local.translation = Eigen::Vector3d(magnitude * t, 0.0, 0.0);
                break;
            case TrajectoryKind::orbit: {
                // Pivot at `magnitude` along the optical axis; camera keeps
                // facing the pivot over a quarter-turn sweep.
                const double theta = t * 1.5707963267948966;
                const Eigen::Vector3d pivot(0.0, 0.0, magnitude);
                local.rotation = rot_y(theta);
                local.translation = pivot + local.rotation * Eigen::Vector3d(0.0, 0.0, -magnitude);
                break;
            }
        }
        CameraFrame frame;
        frame.intrinsics = base.intrinsics;
        frame.pose = local;
        frame.frame_index = i;
        out.frames.push_back(frame);
    }
    out.frames.front().pose = Pose::identity();
    return out;
}

Trajectory interpolate_poses(const Pose& start, const Pose& end, int n_frames,
                             const Intrinsics& intrinsics) {
    if (n_frames < 2) throw InvalidFrameCount("need at least 2 frames");
    Eigen::Quaterniond q0(start.rotation);
    Eigen::Quaterniond q1(end.rotation);
    if (q0.dot(q1) < 0.0) q1.coeffs() = -q1.coeffs();  // take the short arc
    // 180-degree relative rotation has no unique geodesic.
    if (std::abs(q0.dot(q1)) < 1e-9) throw AmbiguousGeodesic();

    Trajectory out;
    out.convention = TrajectoryConvention::world;
    out.frames.reserve(n_frames);
    for (int i = 0; i < n_frames; ++i) {
        CameraFrame frame;
        frame.intrinsics = intrinsics;
        frame.frame_index = i;
        if (i == 0) {
            frame.pose = start;
        } else if (i == n_frames - 1) {
            frame.pose = end;
        } else {
            const double t = static_cast<double>(i) / (n_frames - 1);
            frame.pose.rotation = q0.slerp(t, q1).normalized().toRotationMatrix();
            frame.pose.translation = (1.0 - t) * start.translation + t * end.translation;
        }
        out.frames.push_back(frame);
    }
    return out;
}

int sample_interval(const IntervalSchedule& schedule, int step, std::uint64_t rng_seed) {
    if (schedule.mode == IntervalMode::linear) {
        if (step < 0 || step >= schedule.total_steps) {
            throw StepOutOfRange("step " + std::to_string(step) + " of " +
                                 std::to_string(schedule.total_steps));
        }
        if (schedule.total_steps == 1) return schedule.start_interval;
        const double t = static_cast<double>(step) / (schedule.total_steps - 1);
        return static_cast<int>(std::lround(schedule.start_interval +
                                            (schedule.end_interval - schedule.start_interval) * t));
    }
    if (step < 0) throw StepOutOfRange("negative step");
    Rng rng(hash_combine(rng_seed, static_cast<std::uint64_t>(step)));
    return static_cast<int>(rng.uniform_int(schedule.start_interval, schedule.end_interval));
}

}  // namespace scenecore
