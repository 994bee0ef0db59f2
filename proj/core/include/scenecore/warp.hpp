// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "scenecore/camera.hpp"
#include "scenecore/image.hpp"
#include "scenecore/scale_align.hpp"

namespace scenecore {

/// Forward-warped conditioning frame. Pixels nothing landed on hold the
/// background constant and carry validity = false.
struct WarpResult {
    Image image;
    std::vector<std::uint8_t> validity;      // height*width
    std::vector<double> depth_buffer;        // destination-camera depth; finite on valid pixels

    bool is_valid(int y, int x) const {
        return validity[static_cast<size_t>(y) * image.width + x] != 0;
    }
};

struct WarpOptions {
    double splat_radius = 1.0;                    // pixels; 0 = nearest-pixel splatting
    double background[3] = {0.5, 0.5, 0.5};
};

/// Unprojects the source frame's valid pixels and re-projects them into the
/// destination view with a nearest-depth z-buffer.
WarpResult warp_frame(const CameraFrame& src_frame, const Image& src_image,
                      const MetricDepthMap& src_depth, const CameraFrame& dst_frame,
                      const WarpOptions& options = {});

std::vector<WarpResult> warp_sequence(const CameraFrame& src_frame, const Image& src_image,
                                      const MetricDepthMap& src_depth,
                                      const Trajectory& trajectory,
                                      const WarpOptions& options = {});

}  // namespace scenecore
