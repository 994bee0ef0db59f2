// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "scenecore/camera.hpp"
#include "scenecore/image.hpp"

namespace scenecore {

struct PoseErrorReport {
    double r_dist = 0.0;  // summed geodesic rotation error, radians
    double t_dist = 0.0;  // summed translation error after normalization
    double r_mean = 0.0;
    double t_mean = 0.0;
    std::vector<double> per_frame_rotation;
    std::vector<double> per_frame_translation;
};

/// First-frame relativization followed by division by the furthest frame's
/// translation norm, so the furthest frame sits at distance 1.
Trajectory normalize_trajectory(const Trajectory& traj);

/// Sum over frames of arccos((tr(R_gen R_gt^T) - 1) / 2), trace clamped.
double rotation_error(const Trajectory& gen, const Trajectory& gt);

/// Sum of per-frame translation distances on normalize_trajectory outputs.
double translation_error(const Trajectory& gen, const Trajectory& gt);

PoseErrorReport pose_error_report(const Trajectory& gen, const Trajectory& gt);

/// 10*log10(max^2/MSE); identical images report the 99 dB cap.
double psnr(const Image& a, const Image& b, double max_value = 1.0);

/// Mean local SSIM, 11x11 Gaussian window (sigma 1.5), per channel, averaged.
double ssim(const Image& a, const Image& b, double max_value = 1.0);

}  // namespace scenecore
