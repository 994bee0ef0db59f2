// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace scenecore {

/// Pinhole intrinsics in pixel units.
struct Intrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;

    Eigen::Matrix3d matrix() const;
    Eigen::Matrix3d inverse_matrix() const;
    bool valid() const;

    /// Intrinsics rescaled to a different pixel grid (fx * new_w / width, ...).
    Intrinsics rescaled(int new_width, int new_height) const;
};

/// World-from-camera rigid transform: X_world = R * X_cam + t.
struct Pose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static Pose identity() { return Pose{}; }

    Pose inverse() const;
    /// Composition (this ∘ other): apply `other` first, then `this`.
    Pose compose(const Pose& other) const;
    Eigen::Vector3d apply(const Eigen::Vector3d& p) const;
    /// World point expressed in this camera's coordinates.
    Eigen::Vector3d to_camera(const Eigen::Vector3d& world) const;
    /// Camera center in world coordinates (same as translation).
    const Eigen::Vector3d& center() const { return translation; }

    /// Orthonormal with det +1 within tol.
    bool is_valid_rotation(double tol = 1e-9) const;
};

struct CameraFrame {
    Intrinsics intrinsics;
    Pose pose;
    int frame_index = 0;
};

/// Ray with unit direction in world coordinates.
struct Ray {
    Eigen::Vector3d origin = Eigen::Vector3d::Zero();
    Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();

    Eigen::Vector3d moment() const { return origin.cross(direction); }
};

/// Per-pixel Plücker embedding: channels [0..3) = o×d, [3..6) = d.
struct RayEmbeddingMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;  // height*width*6, row-major

    double& at(int v, int u, int c) { return data[(static_cast<size_t>(v) * width + u) * 6 + c]; }
    double at(int v, int u, int c) const { return data[(static_cast<size_t>(v) * width + u) * 6 + c]; }
    Eigen::Vector3d moment(int v, int u) const {
        return {at(v, u, 0), at(v, u, 1), at(v, u, 2)};
    }
    Eigen::Vector3d direction(int v, int u) const {
        return {at(v, u, 3), at(v, u, 4), at(v, u, 5)};
    }
};

enum class TrajectoryConvention { world, first_frame_relative };

struct Trajectory {
    std::vector<CameraFrame> frames;
    TrajectoryConvention convention = TrajectoryConvention::world;

    size_t size() const { return frames.size(); }
    bool empty() const { return frames.empty(); }
};

enum class IntervalMode { linear, random };

/// Frame-interval schedule for progressive training, e.g. linear 2 -> 10.
struct IntervalSchedule {
    int start_interval = 2;
    int end_interval = 10;
    IntervalMode mode = IntervalMode::linear;
    int total_steps = 1;
};

enum class TrajectoryKind { zoom_in, zoom_out, pan_left, pan_right, orbit };

/// Re-expresses every pose relative to frame 0 (frame 0 becomes identity).
Trajectory make_relative(const Trajectory& trajectory);

/// Ray through the center of pixel (u, v): direction = normalize(R K^-1 p~),
/// origin = camera center.
Ray pixel_ray(const CameraFrame& frame, int u, int v);

/// Ray through an arbitrary continuous pixel position (no bounds check).
Ray pixel_ray_at(const CameraFrame& frame, double u, double v);

RayEmbeddingMap ray_embedding_map(const CameraFrame& frame);

/// Synthesizes a basic camera move starting at `base`. Orbit pivots about the
/// point at distance `magnitude` along the optical axis and sweeps 90 degrees.
/// The result is first-frame relative (frame 0 = identity = base's frame).
Trajectory generate_trajectory(TrajectoryKind kind, int n_frames, double magnitude,
                               const CameraFrame& base);

/// Slerp rotations / lerp translations between two poses; endpoints exact.
Trajectory interpolate_poses(const Pose& start, const Pose& end, int n_frames,
                             const Intrinsics& intrinsics = {});

/// Interval for a training step: linear ramp or a seeded uniform draw.
int sample_interval(const IntervalSchedule& schedule, int step, std::uint64_t rng_seed);

}  // namespace scenecore
