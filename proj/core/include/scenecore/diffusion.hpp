// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

namespace scenecore {

struct NoiseLevel {
    double sigma = 1.0;
};

/// EDM-style preconditioning coefficients.
struct Preconditioner {
    double sigma_data = 0.5;

    double c_skip(double sigma) const {
        return sigma_data * sigma_data / (sigma * sigma + sigma_data * sigma_data);
    }
    double c_out(double sigma) const {
        return sigma * sigma_data / std::sqrt(sigma * sigma + sigma_data * sigma_data);
    }
    double c_in(double sigma) const {
        return 1.0 / std::sqrt(sigma * sigma + sigma_data * sigma_data);
    }
    double c_noise(double sigma) const { return 0.25 * std::log(sigma); }
};

/// Conditioning for one sample: a camera code plus optional boundary frames.
/// Single-view mode carries only the start; interpolation mode carries both.
/// drop_flag swaps the whole bundle for the denoiser's learned null token.
struct ConditioningBundle {
    Eigen::VectorXd camera_code;  // may be empty
    std::optional<Eigen::VectorXd> boundary_start;
    std::optional<Eigen::VectorXd> boundary_end;
    bool drop_flag = false;

    int dim() const {
        return static_cast<int>(camera_code.size() +
                                (boundary_start ? boundary_start->size() : 0) +
                                (boundary_end ? boundary_end->size() : 0));
    }
    Eigen::VectorXd assemble() const;
};

/// Two-hidden-layer tanh MLP predicting the residual F(c_in*x; c_noise, cond).
struct ToyDenoiser {
    int data_dim = 0;
    int cond_dim = 0;
    int hidden = 0;
    Eigen::MatrixXd w1;  // hidden x (data_dim + 1 + cond_dim)
    Eigen::VectorXd b1;
    Eigen::MatrixXd w2;  // hidden x hidden
    Eigen::VectorXd b2;
    Eigen::MatrixXd w3;  // data_dim x hidden
    Eigen::VectorXd b3;
    Eigen::VectorXd null_token;  // cond_dim, learned unconditional embedding

    static ToyDenoiser random(int data_dim, int cond_dim, int hidden, std::uint64_t seed);
    Eigen::VectorXd forward(const Eigen::VectorXd& x_in, double c_noise,
                            const Eigen::VectorXd& cond) const;
};

/// D(x; sigma, cond) = c_skip*x + c_out*F(c_in*x; c_noise, cond).
Eigen::VectorXd precondition(const ToyDenoiser& denoiser, const Eigen::VectorXd& x,
                             const NoiseLevel& sigma, const ConditioningBundle& cond,
                             const Preconditioner& pre = {});

/// Denoising score matching: mean over the batch of |D(x0 + sigma*eps) - x0|^2
/// with seeded Gaussian noise.
double dsm_loss(const ToyDenoiser& denoiser, const std::vector<Eigen::VectorXd>& batch,
                const std::vector<double>& sigmas, const std::vector<ConditioningBundle>& conds,
                std::uint64_t rng_seed, const Preconditioner& pre = {});

struct SamplerConfig {
    double sigma_min = 0.002;
    double sigma_max = 80.0;
    Preconditioner pre;
};

/// Log-spaced sigma ladder from sigma_max down to sigma_min, 0-terminated.
std::vector<double> sigma_schedule(int n_steps, double sigma_min, double sigma_max);

/// Deterministic first-order sampler (x += (s_next - s) * (x - D)/s) with
/// classifier-free guidance D_uncond + w*(D_cond - D_uncond); w=0 and w=1
/// reduce exactly to the unconditional / conditional prediction.
Eigen::VectorXd sample(const ToyDenoiser& denoiser, const ConditioningBundle& cond, int n_steps,
                       double guidance_w, std::uint64_t rng_seed,
                       const SamplerConfig& config = {});

/// Smooth 1-D sequences (integrated noise, per-sample normalized to the target
/// std); endpoints double as boundary conditioning.
struct ToyDataset {
    Eigen::MatrixXd samples;  // n x length
    double sigma_data = 0.5;

    int count() const { return static_cast<int>(samples.rows()); }
    int length() const { return static_cast<int>(samples.cols()); }
    ConditioningBundle conditioning(int row, bool interpolation) const;
};

ToyDataset toy_trajectory_dataset(int n, int length, std::uint64_t rng_seed,
                                  double sigma_data = 0.5);

enum class ConditioningMode { single_view, interpolation };

struct TrainConfig {
    int steps = 2000;
    int batch_size = 64;
    double learning_rate = 2e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double drop_probability = 0.1;   // classifier-free guidance training
    double ln_sigma_mean = -1.2;
    double ln_sigma_std = 1.2;
    ConditioningMode mode = ConditioningMode::interpolation;
    std::uint64_t seed = 0;
};

struct TrainHistoryEntry {
    int step = 0;
    double loss = 0.0;
};

/// Single-threaded Adam training of the denoiser on the toy dataset; returns
/// the per-step training losses.
std::vector<TrainHistoryEntry> train_toy(ToyDenoiser& denoiser, const ToyDataset& dataset,
                                         const TrainConfig& config, const Preconditioner& pre = {});

}  // namespace scenecore
