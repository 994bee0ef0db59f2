// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "scenecore/image.hpp"
#include "scenecore/scale_align.hpp"

namespace scenecore {

/// PPM (P6, maxval 255): the bit-exact image path.
void write_ppm(const std::filesystem::path& path, const Image& image);
Image read_ppm(const std::filesystem::path& path);

/// PGM (P5) as an 8-bit gray image in [0, 1].
void write_pgm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pgm(const std::filesystem::path& path);

/// PFM (Pf, single channel). The scale header's sign encodes endianness.
void write_pfm(const std::filesystem::path& path, const GrayImage& image);
GrayImage read_pfm(const std::filesystem::path& path);

/// PNG (8-bit RGB), optional convenience output.
void write_png(const std::filesystem::path& path, const Image& image);

/// Depth ingestion: PFM values are meters; PGM integers are scaled by
/// `pgm_scale` (default millimeters). Non-positive or non-finite entries are
/// flagged invalid.
MetricDepthMap read_depth(const std::filesystem::path& path, double pgm_scale = 1e-3);
void write_depth_pfm(const std::filesystem::path& path, const MetricDepthMap& depth);

/// Dispatches on extension: .ppm always available, .png via libpng.
void write_image_auto(const std::filesystem::path& path, const Image& image);

}  // namespace scenecore
