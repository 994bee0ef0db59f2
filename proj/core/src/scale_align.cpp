// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/scale_align.hpp"

#include <algorithm>
#include <cmath>

#include "scenecore/error.hpp"

namespace scenecore {

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ScaleFactor estimate_scale(const PointCloud& sparse, const CameraFrame& ref_frame,
                           const MetricDepthMap& metric_depth,
                           const EstimateScaleOptions& options) {
    const Intrinsics& k = ref_frame.intrinsics;
    std::vector<double> raw;
    raw.reserve(sparse.size());
    for (const auto& p : sparse.points) {
        const Eigen::Vector3d cam = ref_frame.pose.to_camera(p);
        if (cam.z() <= 1e-12) continue;
        const double u = k.fx * cam.x() / cam.z() + k.cx;
        const double v = k.fy * cam.y() / cam.z() + k.cy;
        const int px = static_cast<int>(std::floor(u));
        const int py = static_cast<int>(std::floor(v));
        if (px < 0 || py < 0 || px >= metric_depth.width || py >= metric_depth.height) continue;
        if (!metric_depth.is_valid(py, px)) continue;
        raw.push_back(metric_depth.at(py, px) / cam.z());
    }
    std::vector<double> ratios;
    ratios.reserve(raw.size());
    for (const double r : raw) {
        if (std::isfinite(r) && r > 0.0) ratios.push_back(r);
    }
    if (!raw.empty() && ratios.empty()) throw DegenerateDepth();
    if (static_cast<int>(ratios.size()) < options.min_points) {
        throw InsufficientOverlap(std::to_string(ratios.size()) + " usable points");
    }

    ScaleFactor out;
    out.s = median(ratios);
    for (const double r : ratios) {
        if (r >= out.s / options.inlier_band && r <= out.s * options.inlier_band) {
            ++out.inlier_count;
        }
    }
    out.inlier_ratio = static_cast<double>(out.inlier_count) / ratios.size();
    return out;
}

Trajectory apply_scale(const Trajectory& trajectory, const ScaleFactor& s) {
    Trajectory out = trajectory;
    for (auto& frame : out.frames) frame.pose.translation *= s.s;
    return out;
}

PointCloud unproject_depth(const CameraFrame& frame, const MetricDepthMap& depth,
                           const Image* colors) {
    const Intrinsics& k = frame.intrinsics;
    if (depth.width != k.width || depth.height != k.height) {
        throw ShapeMismatch("depth map does not match intrinsics");
    }
    if (colors && (colors->width != k.width || colors->height != k.height)) {
        throw ShapeMismatch("color image does not match intrinsics");
    }
    PointCloud cloud;
    const Eigen::Matrix3d k_inv = k.inverse_matrix();
    for (int v = 0; v < k.height; ++v) {
        for (int u = 0; u < k.width; ++u) {
            if (!depth.is_valid(v, u)) continue;
            const double z = depth.at(v, u);
            const Eigen::Vector3d dir_cam = k_inv * Eigen::Vector3d(u + 0.5, v + 0.5, 1.0);
            cloud.points.push_back(frame.pose.apply(z * dir_cam));
            if (colors) {
                cloud.colors.emplace_back(colors->at(v, u, 0), colors->at(v, u, 1),
                                          colors->at(v, u, 2));
            }
        }
    }
    return cloud;
}

}  // namespace scenecore
