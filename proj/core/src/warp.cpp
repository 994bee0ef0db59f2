// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/warp.hpp"

#include <cmath>
#include <limits>

#include "scenecore/error.hpp"

namespace scenecore {

WarpResult warp_frame(const CameraFrame& src_frame, const Image& src_image,
                      const MetricDepthMap& src_depth, const CameraFrame& dst_frame,
                      const WarpOptions& options) {
    const Intrinsics& sk = src_frame.intrinsics;
    if (src_image.width != sk.width || src_image.height != sk.height ||
        src_depth.width != sk.width || src_depth.height != sk.height) {
        throw ShapeMismatch("warp inputs do not match source intrinsics");
    }
    const Intrinsics& dk = dst_frame.intrinsics;

    WarpResult out;
    out.image = Image(dk.width, dk.height);
    for (int y = 0; y < dk.height; ++y)
        for (int x = 0; x < dk.width; ++x)
            for (int c = 0; c < 3; ++c) out.image.at(y, x, c) = options.background[c];
    out.validity.assign(static_cast<size_t>(dk.width) * dk.height, 0);
    out.depth_buffer.assign(static_cast<size_t>(dk.width) * dk.height,
                            std::numeric_limits<double>::infinity());

    const Eigen::Matrix3d k_inv = sk.inverse_matrix();
    const double r = options.splat_radius;

    // Source pixels in row-major order; the z-buffer keeps strictly nearer
    // points so the result matches a sequential reduction.
    for (int sv = 0; sv < sk.height; ++sv) {
        for (int su = 0; su < sk.width; ++su) {
            if (!src_depth.is_valid(sv, su)) continue;
            const double z = src_depth.at(sv, su);
            const Eigen::Vector3d world =
                src_frame.pose.apply(z * (k_inv * Eigen::Vector3d(su + 0.5, sv + 0.5, 1.0)));
            const Eigen::Vector3d cam = dst_frame.pose.to_camera(world);
            if (cam.z() <= 1e-12) continue;  // behind the destination camera
            const double u = dk.fx * cam.x() / cam.z() + dk.cx;
            const double v = dk.fy * cam.y() / cam.z() + dk.cy;

            const int x_lo = static_cast<int>(std::floor(u - r));
            const int x_hi = static_cast<int>(std::floor(u + r));
            const int y_lo = static_cast<int>(std::floor(v - r));
            const int y_hi = static_cast<int>(std::floor(v + r));
            for (int y = std::max(0, y_lo); y <= std::min(dk.height - 1, y_hi); ++y) {
                for (int x = std::max(0, x_lo); x <= std::min(dk.width - 1, x_hi); ++x) {
                    const double du = (x + 0.5) - u;
                    const double dv = (y + 0.5) - v;
                    // Radius 0 keeps exactly the containing pixel.
                    if (r > 0.0 && du * du + dv * dv > r * r) continue;
                    const size_t idx = static_cast<size_t>(y) * dk.width + x;
                    if (cam.z() < out.depth_buffer[idx]) {
                        out.depth_buffer[idx] = cam.z();
                        out.validity[idx] = 1;
                        for (int c = 0; c < 3; ++c) out.image.at(y, x, c) = src_image.at(sv, su, c);
                    }
                }
            }
        }
    }
    return out;
}

std::vector<WarpResult> warp_sequence(const CameraFrame& src_frame, const Image& src_image,
                                      const MetricDepthMap& src_depth,
                                      const Trajectory& trajectory, const WarpOptions& options) {
    if (trajectory.empty()) throw EmptyTrajectory();
    std::vector<WarpResult> out;
    out.reserve(trajectory.size());
    for (const auto& frame : trajectory.frames) {
        out.push_back(warp_frame(src_frame, src_image, src_depth, frame, options));
    }
    return out;
}

}  // namespace scenecore
