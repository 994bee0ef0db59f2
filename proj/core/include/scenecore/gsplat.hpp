// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <functional>
#include <optional>
#include <vector>

#include "scenecore/camera.hpp"
#include "scenecore/image.hpp"
#include "scenecore/scale_align.hpp"

namespace scenecore {

/// Raw (pre-activation) per-pixel Gaussian parameters for T frames.
/// Channel layout: [0..3) rgb, [3..6) scale, [6..10) rotation quaternion,
/// [10] opacity, [11] ray distance.
struct GaussianFeatureMap {
    int frames = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;  // frames*height*width*12

    GaussianFeatureMap() = default;
    GaussianFeatureMap(int t, int h, int w)
        : frames(t), height(h), width(w), data(static_cast<size_t>(t) * h * w * 12, 0.0) {}

    size_t index(int t, int y, int x) const {
        return ((static_cast<size_t>(t) * height + y) * width + x) * 12;
    }
    double& at(int t, int y, int x, int c) { return data[index(t, y, x) + c]; }
    double at(int t, int y, int x, int c) const { return data[index(t, y, x) + c]; }
};

struct Gaussian3D {
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Vector3d scales = Eigen::Vector3d::Ones();
    Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
    double opacity = 0.5;
    Eigen::Vector3d color = Eigen::Vector3d::Constant(0.5);

    Eigen::Matrix3d covariance() const {
        const Eigen::Matrix3d r = rotation.toRotationMatrix();
        return r * scales.cwiseProduct(scales).asDiagonal() * r.transpose();
    }
};

struct Provenance {
    int frame = 0;
    int pixel = 0;  // y * width + x within the source frame
    auto operator<=>(const Provenance&) const = default;
};

struct GaussianCloud {
    std::vector<Gaussian3D> gaussians;
    std::vector<Provenance> provenance;  // same length
    // Source pixel rays when decoded from a feature map; empty otherwise.
    // Present rays let fit() constrain means to slide along their ray.
    std::vector<Ray> rays;

    size_t size() const { return gaussians.size(); }
};

struct LossWeights {
    double lambda_mse = 1.0;
    double lambda_perceptual = 0.0;
    double lambda_depth = 0.1;
};

struct DecodeOptions {
    double scale_max = 100.0;
    double scale_min = 1e-6;
};

struct DecodeStats {
    int zero_quaternion_count = 0;
};

/// Activates a raw feature map into world-space Gaussians, one per pixel per
/// frame, positioned along the pixel ray by the ray-distance channel.
GaussianCloud decode_gaussians(const GaussianFeatureMap& g, const Trajectory& trajectory,
                               const DecodeOptions& options = {}, DecodeStats* stats = nullptr);

struct RenderOptions {
    // Bounding-box cull radius in standard deviations of the projected
    // footprint. Contributions outside are dropped, so the radius bounds the
    // discontinuity introduced at the box edge.
    double radius_sigma = 6.0;
    double alpha_clamp = 0.999;
    double min_peak_alpha = 1.0 / 255.0;   // cull Gaussians never exceeding this
    double condition_limit = 1e12;         // skip primitives with ill-conditioned footprints
};

struct RenderResult {
    Image image;
    std::vector<double> depth;  // alpha-composited camera depth, 0 where nothing lands
    int culled = 0;             // behind camera or below the peak-alpha floor
    int skipped_degenerate = 0;
};

RenderResult render(const GaussianCloud& cloud, const CameraFrame& camera,
                    const Eigen::Vector3d& background, const RenderOptions& options = {});

struct RenderGradients {
    std::vector<Eigen::Vector3d> d_color;
    std::vector<double> d_opacity;
    std::vector<Eigen::Vector3d> d_mean;
};

/// Analytic gradients of the compositing equation for color, opacity and mean.
/// `d_image` is dLoss/dPixelChannel; `d_depth` (optional) is dLoss/dDepth.
RenderGradients render_backward(const GaussianCloud& cloud, const CameraFrame& camera,
                                const Eigen::Vector3d& background, const Image& d_image,
                                const std::vector<double>* d_depth = nullptr,
                                const RenderOptions& options = {});

/// Pluggable image distance for the perceptual term; absent = term is 0.
using PerceptualLoss = std::function<double(const Image&, const Image&)>;

struct LossBreakdown {
    double total = 0.0;
    double mse = 0.0;
    double perceptual = 0.0;
    double depth_l1 = 0.0;
    size_t depth_valid_count = 0;
    bool depth_term_empty = false;  // lambda_depth > 0 but no valid depth pixels
};

LossBreakdown composite_loss(const RenderResult& rendered, const Image& target,
                             const MetricDepthMap* target_depth, const LossWeights& weights,
                             const PerceptualLoss& perceptual = {});

struct SupervisionView {
    CameraFrame camera;
    Image image;
    std::optional<MetricDepthMap> depth;
};

struct FitConfig {
    int iterations = 2000;
    double learning_rate = 0.03;
    // Exponential decay down to learning_rate * lr_final_fraction at the last
    // iteration; damps the late-phase Adam oscillation.
    double lr_final_fraction = 1e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double divergence_factor = 10.0;
    Eigen::Vector3d background = Eigen::Vector3d::Constant(0.5);
    RenderOptions render;
};

struct FitResult {
    GaussianCloud cloud;
    std::vector<double> loss_history;  // summed over views, one entry per iteration
};

/// Adam on color/opacity/position. Means slide along their source ray when
/// the cloud carries rays, and move freely otherwise.
FitResult fit(const GaussianCloud& cloud, const std::vector<SupervisionView>& views,
              const LossWeights& weights, const FitConfig& config = {});

}  // namespace scenecore
