// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "scenecore/diffusion.hpp"

namespace scenecore {

/// One named tensor in a checkpoint; values are stored as little-endian f32.
struct NamedTensor {
    std::string name;
    std::vector<std::uint32_t> dims;
    std::vector<float> values;
};

/// Flat checkpoint: per tensor, name length u16, name bytes, rank u8,
/// dims u32 each, then the f32 payload. Tensors keep insertion order.
struct Checkpoint {
    std::vector<NamedTensor> tensors;

    const NamedTensor* find(const std::string& name) const;
    void add(const std::string& name, const std::vector<std::uint32_t>& dims,
             const std::vector<float>& values);
    void add_matrix(const std::string& name, const Eigen::MatrixXd& m);
    void add_vector(const std::string& name, const Eigen::VectorXd& v);
    Eigen::MatrixXd matrix(const std::string& name) const;
    Eigen::VectorXd vector(const std::string& name) const;
};

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Denoiser round trip through the checkpoint container.
Checkpoint denoiser_to_checkpoint(const ToyDenoiser& denoiser);
ToyDenoiser denoiser_from_checkpoint(const Checkpoint& ckpt);

}  // namespace scenecore
