// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "scenecore/camera.hpp"

namespace scenecore {

/// Re10K-style camera file: a URL line, then one line per frame with
///   timestamp fx fy cx cy 0 0 <12 row-major values of the 3x4 camera-from-world>
/// Intrinsics are stored normalized (fx, cx by width; fy, cy by height) and
/// denormalized against the target resolution on load. Poses are inverted to
/// world-from-camera.
struct CameraFileResult {
    Trajectory trajectory;
    bool monotone_timestamps = true;
    std::string url;
};

CameraFileResult parse_camera_file(const std::filesystem::path& path, int width, int height);

void write_camera_file(const std::filesystem::path& path, const Trajectory& trajectory,
                       const std::string& url = "scenecore://synthetic");

}  // namespace scenecore
