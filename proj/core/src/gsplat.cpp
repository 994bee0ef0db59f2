// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/gsplat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scenecore/error.hpp"
#include "scenecore/parallel.hpp"

namespace scenecore {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double softplus(double x) {
    // log1p(exp(x)) without overflow for large x.
    if (x > 30.0) return x;
    return std::log1p(std::exp(x));
}

// Projected splat state shared by the forward and backward passes.
struct SplatProj {
    bool valid = false;
    Eigen::Vector3d cam = Eigen::Vector3d::Zero();  // mean in camera coordinates
    Eigen::Vector2d mu = Eigen::Vector2d::Zero();   // projected center (pixel units)
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();  // projected covariance
    Eigen::Matrix2d inv_cov = Eigen::Matrix2d::Zero();
    Eigen::Matrix3d cov_cam = Eigen::Matrix3d::Zero();
    double opacity = 0.0;
    Eigen::Vector3d color = Eigen::Vector3d::Zero();
    int x_lo = 0, x_hi = -1, y_lo = 0, y_hi = -1;   // inclusive pixel bbox
};

struct ProjectionSetup {
    std::vector<SplatProj> splats;
    std::vector<int> order;  // indices sorted by (depth, provenance)
    int culled = 0;
    int skipped_degenerate = 0;
};

ProjectionSetup project_cloud(const GaussianCloud& cloud, const CameraFrame& camera,
                              const RenderOptions& options) {
    const Intrinsics& k = camera.intrinsics;
    ProjectionSetup setup;
    setup.splats.resize(cloud.size());

    for (size_t i = 0; i < cloud.size(); ++i) {
        const Gaussian3D& g = cloud.gaussians[i];
        SplatProj& s = setup.splats[i];
        if (g.opacity < options.min_peak_alpha) {
            ++setup.culled;
            continue;
        }
        const Eigen::Vector3d cam = camera.pose.to_camera(g.mean);
        if (cam.z() <= 1e-9) {
            ++setup.culled;
            continue;
        }
        const double z = cam.z();
        Eigen::Matrix2d cov2;
        {
            const Eigen::Matrix3d cov_cam =
                camera.pose.rotation.transpose() * g.covariance() * camera.pose.rotation;
            Eigen::Matrix<double, 2, 3> jac;
            jac << k.fx / z, 0.0, -k.fx * cam.x() / (z * z),
                   0.0, k.fy / z, -k.fy * cam.y() / (z * z);
            cov2 = jac * cov_cam * jac.transpose();
            s.cov_cam = cov_cam;
        }
        const double a = cov2(0, 0), b = cov2(0, 1), c = cov2(1, 1);
        const double half_trace = 0.5 * (a + c);
        const double disc = std::sqrt(std::max(0.0, half_trace * half_trace - (a * c - b * b)));
        const double lambda_max = half_trace + disc;
        const double lambda_min = half_trace - disc;
        if (!(lambda_min > 0.0) || lambda_max > options.condition_limit * lambda_min) {
            ++setup.skipped_degenerate;
            continue;
        }
        s.valid = true;
        s.cam = cam;
        s.mu = Eigen::Vector2d(k.fx * cam.x() / z + k.cx, k.fy * cam.y() / z + k.cy);
        s.cov = cov2;
        const double det = a * c - b * b;
        s.inv_cov << c / det, -b / det, -b / det, a / det;
        s.opacity = g.opacity;
        s.color = g.color;

        const double radius = options.radius_sigma * std::sqrt(lambda_max);
        s.x_lo = std::max(0, static_cast<int>(std::ceil(s.mu.x() - radius - 0.5)));
        s.x_hi = std::min(k.width - 1, static_cast<int>(std::floor(s.mu.x() + radius - 0.5)));
        s.y_lo = std::max(0, static_cast<int>(std::ceil(s.mu.y() - radius - 0.5)));
        s.y_hi = std::min(k.height - 1, static_cast<int>(std::floor(s.mu.y() + radius - 0.5)));
        if (s.x_lo > s.x_hi || s.y_lo > s.y_hi) s.valid = false;  // off-screen
    }

    setup.order.reserve(cloud.size());
    for (size_t i = 0; i < cloud.size(); ++i) {
        if (setup.splats[i].valid) setup.order.push_back(static_cast<int>(i));
    }
    const bool have_prov = cloud.provenance.size() == cloud.size();
    std::sort(setup.order.begin(), setup.order.end(), [&](int lhs, int rhs) {
        const double zl = setup.splats[lhs].cam.z();
        const double zr = setup.splats[rhs].cam.z();
        if (zl != zr) return zl < zr;
        if (have_prov) return cloud.provenance[lhs] < cloud.provenance[rhs];
        return lhs < rhs;
    });
    return setup;
}

}  // namespace

GaussianCloud decode_gaussians(const GaussianFeatureMap& g, const Trajectory& trajectory,
                               const DecodeOptions& options, DecodeStats* stats) {
    if (static_cast<int>(trajectory.size()) != g.frames) {
        throw ShapeMismatch("feature map frames != trajectory length");
    }
    for (const auto& frame : trajectory.frames) {
        if (frame.intrinsics.width != g.width || frame.intrinsics.height != g.height) {
            throw ShapeMismatch("feature map resolution != intrinsics");
        }
    }
    GaussianCloud cloud;
    const size_t total = static_cast<size_t>(g.frames) * g.height * g.width;
    cloud.gaussians.reserve(total);
    cloud.provenance.reserve(total);
    cloud.rays.reserve(total);
    int zero_quats = 0;

    for (int t = 0; t < g.frames; ++t) {
        const CameraFrame& frame = trajectory.frames[t];
        for (int y = 0; y < g.height; ++y) {
            for (int x = 0; x < g.width; ++x) {
                Gaussian3D prim;
                const Ray ray = pixel_ray(frame, x, y);
                prim.color = Eigen::Vector3d(sigmoid(g.at(t, y, x, 0)), sigmoid(g.at(t, y, x, 1)),
                                             sigmoid(g.at(t, y, x, 2)));
                for (int c = 0; c < 3; ++c) {
                    prim.scales[c] = std::clamp(std::exp(g.at(t, y, x, 3 + c)), options.scale_min,
                                                options.scale_max);
                }
                Eigen::Vector4d quat(g.at(t, y, x, 6), g.at(t, y, x, 7), g.at(t, y, x, 8),
                                     g.at(t, y, x, 9));
                const double qnorm = quat.norm();
                if (qnorm < 1e-12) {
                    prim.rotation = Eigen::Quaterniond::Identity();
                    ++zero_quats;
                } else {
                    quat /= qnorm;
                    prim.rotation = Eigen::Quaterniond(quat[0], quat[1], quat[2], quat[3]);
                }
                prim.opacity = sigmoid(g.at(t, y, x, 10));
                prim.mean = ray.origin + softplus(g.at(t, y, x, 11)) * ray.direction;

                cloud.gaussians.push_back(prim);
                cloud.provenance.push_back(Provenance{t, y * g.width + x});
                cloud.rays.push_back(ray);
            }
        }
    }
    if (stats) stats->zero_quaternion_count = zero_quats;
    return cloud;
}

RenderResult render(const GaussianCloud& cloud, const CameraFrame& camera,
                    const Eigen::Vector3d& background, const RenderOptions& options) {
    const Intrinsics& k = camera.intrinsics;
    ProjectionSetup setup = project_cloud(cloud, camera, options);

    RenderResult out;
    out.image = Image(k.width, k.height);
    out.depth.assign(static_cast<size_t>(k.width) * k.height, 0.0);
    out.culled = setup.culled;
    out.skipped_degenerate = setup.skipped_degenerate;

    parallel_for(static_cast<size_t>(k.height), [&](size_t row_begin, size_t row_end) {
        for (size_t py = row_begin; py < row_end; ++py) {
            for (int px = 0; px < k.width; ++px) {
                const Eigen::Vector2d p(px + 0.5, py + 0.5);
                Eigen::Vector3d color = Eigen::Vector3d::Zero();
                double depth = 0.0;
                double transmittance = 1.0;
                for (const int idx : setup.order) {
                    const SplatProj& s = setup.splats[idx];
                    if (px < s.x_lo || px > s.x_hi || static_cast<int>(py) < s.y_lo ||
                        static_cast<int>(py) > s.y_hi) {
                        continue;
                    }
                    const Eigen::Vector2d delta = p - s.mu;
                    const double q = delta.dot(s.inv_cov * delta);
                    const double alpha = std::min(s.opacity * std::exp(-0.5 * q), options.alpha_clamp);
                    const double weight = alpha * transmittance;
                    color += weight * s.color;
                    depth += weight * s.cam.z();
                    transmittance *= (1.0 - alpha);
                }
                color += transmittance * background;
                for (int c = 0; c < 3; ++c) out.image.at(static_cast<int>(py), px, c) = color[c];
                out.depth[py * k.width + px] = depth;
            }
        }
    });
    return out;
}

RenderGradients render_backward(const GaussianCloud& cloud, const CameraFrame& camera,
                                const Eigen::Vector3d& background, const Image& d_image,
                                const std::vector<double>* d_depth,
                                const RenderOptions& options) {
    const Intrinsics& k = camera.intrinsics;
    if (d_image.width != k.width || d_image.height != k.height) {
        throw ShapeMismatch("upstream gradient does not match camera resolution");
    }
    ProjectionSetup setup = project_cloud(cloud, camera, options);

    RenderGradients grads;
    grads.d_color.assign(cloud.size(), Eigen::Vector3d::Zero());
    grads.d_opacity.assign(cloud.size(), 0.0);
    grads.d_mean.assign(cloud.size(), Eigen::Vector3d::Zero());

    // Per-gaussian accumulators in intermediate coordinates; mapped to world
    // space once at the end.
    std::vector<Eigen::Vector2d> g_mu(cloud.size(), Eigen::Vector2d::Zero());
    std::vector<Eigen::Matrix2d> g_cov(cloud.size(), Eigen::Matrix2d::Zero());
    std::vector<double> g_z(cloud.size(), 0.0);

    struct Contribution {
        int idx;
        double alpha;
        double gexp;        // exp(-q/2)
        double value;       // color . upstream + z * upstream_depth
        double trans;       // transmittance in front of this splat
        Eigen::Vector2d a_delta;  // inv_cov * delta
        bool clamped;
    };
    std::vector<Contribution> contribs;

    // Sequential over pixels so gradient accumulation order is fixed.
    for (int py = 0; py < k.height; ++py) {
        for (int px = 0; px < k.width; ++px) {
            const Eigen::Vector2d p(px + 0.5, py + 0.5);
            const Eigen::Vector3d up(d_image.at(py, px, 0), d_image.at(py, px, 1),
                                     d_image.at(py, px, 2));
            const double up_depth = d_depth ? (*d_depth)[static_cast<size_t>(py) * k.width + px] : 0.0;
            if (up.isZero(0.0) && up_depth == 0.0) continue;

            contribs.clear();
            double transmittance = 1.0;
            for (const int idx : setup.order) {
                const SplatProj& s = setup.splats[idx];
                if (px < s.x_lo || px > s.x_hi || py < s.y_lo || py > s.y_hi) continue;
                const Eigen::Vector2d delta = p - s.mu;
                const Eigen::Vector2d a_delta = s.inv_cov * delta;
                const double q = delta.dot(a_delta);
                const double gexp = std::exp(-0.5 * q);
                const double raw_alpha = s.opacity * gexp;
                const bool clamped = raw_alpha > options.alpha_clamp;
                const double alpha = clamped ? options.alpha_clamp : raw_alpha;
                contribs.push_back({idx, alpha, gexp, s.color.dot(up) + s.cam.z() * up_depth,
                                    transmittance, a_delta, clamped});
                transmittance *= (1.0 - alpha);
            }

            // Suffix of weighted values behind the current splat, including
            // the background term.
            double suffix = transmittance * background.dot(up);
            for (size_t i = contribs.size(); i-- > 0;) {
                const Contribution& cb = contribs[i];
                const SplatProj& s = setup.splats[cb.idx];
                const double weight = cb.alpha * cb.trans;
                grads.d_color[cb.idx] += weight * up;
                g_z[cb.idx] += weight * up_depth;

                const double d_alpha = cb.trans * cb.value - suffix / (1.0 - cb.alpha);
                if (!cb.clamped) {
                    grads.d_opacity[cb.idx] += d_alpha * cb.gexp;
                    const double d_q = d_alpha * s.opacity * cb.gexp * -0.5;
                    g_mu[cb.idx] += d_q * -2.0 * cb.a_delta;  // dq/dmu = -2 A delta
                    g_cov[cb.idx] += d_q * -(cb.a_delta * cb.a_delta.transpose());
                }
                suffix += weight * cb.value;
            }
        }
    }

    // Chain projected-space gradients back to world-space means.
    for (size_t i = 0; i < cloud.size(); ++i) {
        const SplatProj& s = setup.splats[i];
        if (!s.valid) continue;
        const double x = s.cam.x(), y = s.cam.y(), z = s.cam.z();
        Eigen::Matrix<double, 2, 3> jac;
        jac << k.fx / z, 0.0, -k.fx * x / (z * z),
               0.0, k.fy / z, -k.fy * y / (z * z);

        Eigen::Matrix<double, 2, 3> d_jac[3];
        d_jac[0] << 0.0, 0.0, -k.fx / (z * z), 0.0, 0.0, 0.0;
        d_jac[1] << 0.0, 0.0, 0.0, 0.0, 0.0, -k.fy / (z * z);
        d_jac[2] << -k.fx / (z * z), 0.0, 2.0 * k.fx * x / (z * z * z),
                    0.0, -k.fy / (z * z), 2.0 * k.fy * y / (z * z * z);

        Eigen::Vector3d g_cam = Eigen::Vector3d::Zero();
        g_cam.x() += g_mu[i].x() * k.fx / z;
        g_cam.y() += g_mu[i].y() * k.fy / z;
        g_cam.z() += g_mu[i].x() * (-k.fx * x / (z * z)) + g_mu[i].y() * (-k.fy * y / (z * z));
        g_cam.z() += g_z[i];
        for (int axis = 0; axis < 3; ++axis) {
            // dCov2/daxis = M + M^T with M = dJ * CovCam * J^T; g_cov is
            // symmetric so the inner product folds to 2 tr(g_cov M).
            const Eigen::Matrix2d m = d_jac[axis] * s.cov_cam * jac.transpose();
            g_cam[axis] += 2.0 * (g_cov[i].array() * m.array()).sum();
        }
        grads.d_mean[i] = camera.pose.rotation * g_cam;
    }
    return grads;
}

LossBreakdown composite_loss(const RenderResult& rendered, const Image& target,
                             const MetricDepthMap* target_depth, const LossWeights& weights,
                             const PerceptualLoss& perceptual) {
    if (!rendered.image.same_shape(target)) throw ShapeMismatch("render/target shapes differ");
    LossBreakdown out;

    const size_t n_values = rendered.image.data.size();
    double sq = 0.0;
    for (size_t i = 0; i < n_values; ++i) {
        const double d = rendered.image.data[i] - target.data[i];
        sq += d * d;
    }
    out.mse = sq / static_cast<double>(n_values);

    if (perceptual) out.perceptual = perceptual(rendered.image, target);

    if (target_depth) {
        if (target_depth->width != rendered.image.width ||
            target_depth->height != rendered.image.height) {
            throw ShapeMismatch("depth target shape differs");
        }
        double abs_sum = 0.0;
        size_t n_valid = 0;
        for (int y = 0; y < target_depth->height; ++y) {
            for (int x = 0; x < target_depth->width; ++x) {
                if (!target_depth->is_valid(y, x)) continue;
                abs_sum += std::abs(rendered.depth[static_cast<size_t>(y) * target_depth->width + x] -
                                    target_depth->at(y, x));
                ++n_valid;
            }
        }
        out.depth_valid_count = n_valid;
        if (n_valid > 0) {
            out.depth_l1 = abs_sum / static_cast<double>(n_valid);
        } else if (weights.lambda_depth > 0.0) {
            out.depth_term_empty = true;
        }
    } else if (weights.lambda_depth > 0.0) {
        out.depth_term_empty = true;
    }

    out.total = weights.lambda_mse * out.mse + weights.lambda_perceptual * out.perceptual +
                weights.lambda_depth * out.depth_l1;
    return out;
}

namespace {

double logit(double p) {
    const double clamped = std::clamp(p, 1e-9, 1.0 - 1e-9);
    return std::log(clamped / (1.0 - clamped));
}

double inverse_softplus(double y) {
    // x with softplus(x) = y; stable for both tails.
    if (y > 30.0) return y;
    return std::log(std::expm1(std::max(y, 1e-12)));
}

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int t = 0;

    explicit AdamState(size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grads, double lr,
              double beta1, double beta2) {
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, t);
        const double bc2 = 1.0 - std::pow(beta2, t);
        for (size_t i = 0; i < params.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
            params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + 1e-8);
        }
    }
};

}  // namespace

FitResult fit(const GaussianCloud& cloud, const std::vector<SupervisionView>& views,
              const LossWeights& weights, const FitConfig& config) {
    if (views.empty()) throw ShapeMismatch("fit needs at least one supervision view");
    FitResult result;
    result.cloud = cloud;
    if (config.iterations == 0) return result;

    const size_t n = cloud.size();
    const bool ray_mode = cloud.rays.size() == n;
    const size_t pos_dim = ray_mode ? 1 : 3;
    const size_t stride = 3 + 1 + pos_dim;  // color logits, opacity logit, position

    // Raw (pre-activation) parameter vector; activations keep the cloud's
    // invariants satisfied after every step.
    std::vector<double> params(n * stride, 0.0);
    for (size_t i = 0; i < n; ++i) {
        const Gaussian3D& g = cloud.gaussians[i];
        double* p = params.data() + i * stride;
        for (int c = 0; c < 3; ++c) p[c] = logit(g.color[c]);
        p[3] = logit(g.opacity);
        if (ray_mode) {
            p[4] = inverse_softplus((g.mean - cloud.rays[i].origin).dot(cloud.rays[i].direction));
        } else {
            p[4] = g.mean.x();
            p[5] = g.mean.y();
            p[6] = g.mean.z();
        }
    }

    // Untouched raw values decode to the caller's exact inputs, so a cloud at
    // its optimum has exactly zero gradients and Adam stays put.
    const std::vector<double> params0 = params;
    auto decode_params = [&](GaussianCloud& target) {
        for (size_t i = 0; i < n; ++i) {
            Gaussian3D& g = target.gaussians[i];
            const double* p = params.data() + i * stride;
            const double* p0 = params0.data() + i * stride;
            for (int c = 0; c < 3; ++c) {
                g.color[c] = p[c] == p0[c] ? cloud.gaussians[i].color[c] : sigmoid(p[c]);
            }
            g.opacity = p[3] == p0[3] ? cloud.gaussians[i].opacity : sigmoid(p[3]);
            if (ray_mode) {
                g.mean = p[4] == p0[4]
                             ? cloud.gaussians[i].mean
                             : cloud.rays[i].origin + softplus(p[4]) * cloud.rays[i].direction;
            } else {
                g.mean = Eigen::Vector3d(p[4], p[5], p[6]);
            }
        }
    };

    AdamState adam(params.size());
    std::vector<double> grads(params.size(), 0.0);
    decode_params(result.cloud);
    double initial_loss = -1.0;

    for (int iter = 0; iter < config.iterations; ++iter) {
        std::fill(grads.begin(), grads.end(), 0.0);
        double loss = 0.0;

        for (const auto& view : views) {
            RenderResult rendered = render(result.cloud, view.camera, config.background, config.render);
            const MetricDepthMap* depth_target = view.depth ? &*view.depth : nullptr;
            const LossBreakdown breakdown =
                composite_loss(rendered, view.image, depth_target, weights);
            loss += breakdown.total;

            // d(loss)/d(image), d(loss)/d(depth) of the mse + depth-l1 terms.
            Image d_image(view.image.width, view.image.height);
            const double mse_scale =
                2.0 * weights.lambda_mse / static_cast<double>(view.image.data.size());
            for (size_t i = 0; i < d_image.data.size(); ++i) {
                d_image.data[i] = mse_scale * (rendered.image.data[i] - view.image.data[i]);
            }
            std::vector<double> d_depth;
            const std::vector<double>* d_depth_ptr = nullptr;
            if (depth_target && weights.lambda_depth > 0.0 && breakdown.depth_valid_count > 0) {
                d_depth.assign(rendered.depth.size(), 0.0);
                const double w = weights.lambda_depth / static_cast<double>(breakdown.depth_valid_count);
                for (int y = 0; y < depth_target->height; ++y) {
                    for (int x = 0; x < depth_target->width; ++x) {
                        if (!depth_target->is_valid(y, x)) continue;
                        const size_t idx = static_cast<size_t>(y) * depth_target->width + x;
                        const double diff = rendered.depth[idx] - depth_target->at(y, x);
                        d_depth[idx] = diff > 0.0 ? w : (diff < 0.0 ? -w : 0.0);
                    }
                }
                d_depth_ptr = &d_depth;
            }

            const RenderGradients rg = render_backward(result.cloud, view.camera, config.background,
                                                       d_image, d_depth_ptr, config.render);
            for (size_t i = 0; i < n; ++i) {
                double* gp = grads.data() + i * stride;
                const double* p = params.data() + i * stride;
                for (int c = 0; c < 3; ++c) {
                    const double s = sigmoid(p[c]);
                    gp[c] += rg.d_color[i][c] * s * (1.0 - s);
                }
                const double so = sigmoid(p[3]);
                gp[3] += rg.d_opacity[i] * so * (1.0 - so);
                if (ray_mode) {
                    gp[4] += sigmoid(p[4]) * cloud.rays[i].direction.dot(rg.d_mean[i]);
                } else {
                    gp[4] += rg.d_mean[i].x();
                    gp[5] += rg.d_mean[i].y();
                    gp[6] += rg.d_mean[i].z();
                }
            }
        }

        result.loss_history.push_back(loss);
        if (iter == 0) initial_loss = loss;
        if (loss > config.divergence_factor * initial_loss + 1e-12) {
            throw DivergenceError("loss " + std::to_string(loss) + " vs initial " +
                                  std::to_string(initial_loss));
        }
        adam.step(params, grads, config.learning_rate, config.beta1, config.beta2);
        decode_params(result.cloud);
    }
    return result;
}

}  // namespace scenecore
