// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "scenecore/gsplat.hpp"

namespace scenecore {

/// GSPC cloud container: magic "GSPC", version u32, count u32, then per
/// primitive 14 little-endian f32: mean xyz, scales xyz, quaternion wxyz,
/// opacity, rgb. Provenance and rays are not persisted; loading assigns
/// sequential provenance.
void write_gspc(const std::filesystem::path& path, const GaussianCloud& cloud);
GaussianCloud read_gspc(const std::filesystem::path& path);

/// PLY export (positions + colors) for external viewers.
void export_cloud_ply(const std::filesystem::path& path, const GaussianCloud& cloud);

}  // namespace scenecore
