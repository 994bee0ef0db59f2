// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "scenecore/epipolar.hpp"

namespace scenecore {

/// EPIM mask container:
///   magic "EPIM", version u32, H u32, W u32, n_pairs u32, tau f64,
/// then for each ordered pair (i, k) in row-major order a degeneracy byte and
/// (H*W) rows of ceil(H*W / 8) LSB-first packed bytes.
void write_epim(const std::filesystem::path& path, const EpipolarMaskSet& set);
EpipolarMaskSet read_epim(const std::filesystem::path& path);

}  // namespace scenecore
