// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "scenecore/camera.hpp"
#include "scenecore/image.hpp"

namespace scenecore {

struct PointCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<Eigen::Vector3d> colors;  // empty or same length, values in [0,1]

    size_t size() const { return points.size(); }
    bool has_colors() const { return !colors.empty(); }
};

/// Depth in meters along the camera z-axis, with a per-pixel validity mask.
struct MetricDepthMap {
    int width = 0;
    int height = 0;
    std::vector<double> depth;
    std::vector<std::uint8_t> valid;

    MetricDepthMap() = default;
    MetricDepthMap(int w, int h, double fill = 0.0, bool fill_valid = false)
        : width(w),
          height(h),
          depth(static_cast<size_t>(w) * h, fill),
          valid(static_cast<size_t>(w) * h, fill_valid ? 1 : 0) {}

    double at(int y, int x) const { return depth[static_cast<size_t>(y) * width + x]; }
    double& at(int y, int x) { return depth[static_cast<size_t>(y) * width + x]; }
    bool is_valid(int y, int x) const { return valid[static_cast<size_t>(y) * width + x] != 0; }
    void set(int y, int x, double d) {
        depth[static_cast<size_t>(y) * width + x] = d;
        valid[static_cast<size_t>(y) * width + x] = 1;
    }
};

struct ScaleFactor {
    double s = 1.0;
    int inlier_count = 0;
    double inlier_ratio = 0.0;
};

struct EstimateScaleOptions {
    int min_points = 10;
    double inlier_band = 1.5;  // inliers are ratios in [s/band, band*s]
};

/// Median of per-point ratios metric_depth(projection) / camera_depth over the
/// sparse points visible in the reference frame.
ScaleFactor estimate_scale(const PointCloud& sparse, const CameraFrame& ref_frame,
                           const MetricDepthMap& metric_depth,
                           const EstimateScaleOptions& options = {});

/// Multiplies every translation by s; rotations untouched.
Trajectory apply_scale(const Trajectory& trajectory, const ScaleFactor& s);

/// Lifts each valid depth pixel to a world-space point (z-depth convention).
PointCloud unproject_depth(const CameraFrame& frame, const MetricDepthMap& depth,
                           const Image* colors = nullptr);

}  // namespace scenecore
