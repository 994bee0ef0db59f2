// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "scenecore/scale_align.hpp"

namespace scenecore {

/// Binary little-endian PLY with float x/y/z and, when colors are present,
/// uchar red/green/blue.
void write_ply(const std::filesystem::path& path, const PointCloud& cloud);

/// Reads binary_little_endian PLY vertex elements; accepts float or double
/// coordinates and uchar or float colors.
PointCloud read_ply(const std::filesystem::path& path);

}  // namespace scenecore
