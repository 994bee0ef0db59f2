// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "scenecore/camera.hpp"
#include "scenecore/epipolar.hpp"
#include "scenecore/gsplat.hpp"

namespace scenecore {

/// T x H x W x C stack of latent features.
struct LatentVolume {
    int frames = 0;
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    LatentVolume() = default;
    LatentVolume(int t, int h, int w, int c)
        : frames(t), height(h), width(w), channels(c),
          data(static_cast<size_t>(t) * h * w * c, 0.0) {}

    double& at(int t, int y, int x, int c) {
        return data[((static_cast<size_t>(t) * height + y) * width + x) * channels + c];
    }
    double at(int t, int y, int x, int c) const {
        return data[((static_cast<size_t>(t) * height + y) * width + x) * channels + c];
    }
};

/// Maps token index <-> (frame, patch row, patch col); row-major in that order.
struct TokenLayout {
    int frames = 0;
    int rows = 0;
    int cols = 0;
    int patch = 1;
    int temporal_patch = 1;

    int count() const { return frames * rows * cols; }
    int index(int t, int r, int c) const { return (t * rows + r) * cols + c; }
    bool operator==(const TokenLayout&) const = default;
};

struct TokenSequence {
    Eigen::MatrixXd tokens;  // N x d
    TokenLayout layout;

    int count() const { return static_cast<int>(tokens.rows()); }
    int dim() const { return static_cast<int>(tokens.cols()); }
};

/// Tokenizes a latent volume into flattened spatial patches (width patch^2*C).
TokenSequence patchify_latent(const LatentVolume& z, int patch);
LatentVolume unpatchify_latent(const TokenSequence& tokens, int channels);

/// 3D patchification of per-frame ray embedding maps (width tp*patch^2*6).
TokenSequence patchify_rays(const std::vector<RayEmbeddingMap>& rays, int patch,
                            int temporal_patch);
std::vector<RayEmbeddingMap> unpatchify_rays(const TokenSequence& tokens);

/// Concatenates aligned token sets channel-wise and projects to proj's rows.
TokenSequence fuse_tokens(const TokenSequence& latent, const TokenSequence& pose,
                          const TokenSequence& depth, const Eigen::MatrixXd& proj);

/// Selective state-space block: per-token step size and input/output couplings
/// from linear projections of the token, diagonal decay A = -exp(a_log).
struct SsmBlockParams {
    int dim = 0;
    int state_dim = 0;
    Eigen::MatrixXd a_log;       // dim x state_dim
    Eigen::MatrixXd w_delta;     // dim x dim
    Eigen::VectorXd b_delta;     // dim
    Eigen::MatrixXd w_input;     // state_dim x dim, produces B_t
    Eigen::MatrixXd w_output;    // state_dim x dim, produces C_t
    Eigen::MatrixXd w_out;       // dim x dim, final linear
    Eigen::VectorXd norm_gain;   // dim, pre-norm scale

    static SsmBlockParams random(int dim, int state_dim, std::uint64_t seed);
};

enum class ScanDirection { forward, backward };

/// Discretized recurrence h_t = exp(dt*A) ⊙ h_{t-1} + dt * B_t * x_t,
/// y_t = C_t . h_t from zero state, evaluated with a chunked linear-time scan
/// that matches the plain sequential recurrence within 1e-10.
TokenSequence ssm_scan(const TokenSequence& x, const SsmBlockParams& params,
                       ScanDirection direction);

/// Pre-norm residual block: x + Linear(scan_fwd + scan_bwd).
TokenSequence ssm_block(const TokenSequence& x, const SsmBlockParams& params);

struct AttentionParams {
    int dim = 0;
    int heads = 1;
    Eigen::MatrixXd w_q, w_k, w_v, w_o;  // dim x dim each
    Eigen::VectorXd norm_gain;

    static AttentionParams random(int dim, int heads, std::uint64_t seed);
};

/// Pre-norm residual multi-head attention. With a mask set, query tokens only
/// attend keys their frame-pair mask allows; softmax runs over the allowed set
/// so out-of-mask values cannot influence the output. A query whose mask row
/// is empty attends itself only.
TokenSequence masked_attention_block(const TokenSequence& x, const AttentionParams& params,
                                     const EpipolarMaskSet* masks = nullptr);

enum class BlockKind { ssm, attention };

struct BlockSpec {
    BlockKind kind = BlockKind::ssm;
    bool use_mask = false;  // attention blocks only
};

struct HybridStackConfig {
    int dim = 64;
    int state_dim = 16;
    int heads = 4;
    std::vector<BlockSpec> blocks;  // default: S, A, S, A (masked)
    std::uint64_t seed = 0;

    static HybridStackConfig preset(int dim = 64, int state_dim = 16, int heads = 4,
                                    std::uint64_t seed = 0);
};

TokenSequence run_stack(const TokenSequence& x, const HybridStackConfig& config,
                        const EpipolarMaskSet* masks = nullptr);

/// Transposed 3D convolution with kernel == stride per axis, restoring
/// (frames*tp) x (rows*patch) x (cols*patch) x 12 from the token grid.
struct DecoderParams {
    int in_dim = 0;
    int patch = 1;
    int temporal_patch = 1;
    // kernel[((dt*patch + dy)*patch + dx)*12 + ch) * in_dim + d]
    std::vector<double> kernel;
    Eigen::VectorXd bias;  // 12

    static DecoderParams random(int in_dim, int patch, int temporal_patch, std::uint64_t seed);
    size_t kernel_index(int dt, int dy, int dx, int ch, int d) const {
        return ((((static_cast<size_t>(dt) * patch + dy) * patch + dx) * 12 + ch) * in_dim) + d;
    }
};

GaussianFeatureMap decode_featuremap(const TokenSequence& y, const DecoderParams& params);

/// 1D transposed convolution (stride-upsampling form): out[i*stride + j] +=
/// kernel[j] * in[i]. Reference building block for the decoder's upsampling.
std::vector<double> transposed_conv1d(const std::vector<double>& input,
                                      const std::vector<double>& kernel, int stride);

struct TrainDecoderConfig {
    int iterations = 50;
    double learning_rate = 1e-2;
    Eigen::Vector3d background = Eigen::Vector3d::Constant(0.5);
    RenderOptions render;
};

/// Toy-scale training of the decoder weights against rendered supervision
/// (resolution <= 32x32, frames <= 4). Gradients flow through the Gaussian
/// activations and the splatting render into the deconvolution kernel.
std::vector<double> train_decoder(const TokenSequence& y, DecoderParams& params,
                                  const Trajectory& decode_trajectory,
                                  const std::vector<SupervisionView>& views,
                                  const LossWeights& weights,
                                  const TrainDecoderConfig& config = {});

}  // namespace scenecore
