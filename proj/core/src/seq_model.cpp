// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/seq_model.hpp"

#include <cmath>

#include "scenecore/error.hpp"
#include "scenecore/parallel.hpp"
#include "scenecore/rng.hpp"

namespace scenecore {

namespace {

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::MatrixXd random_matrix(int rows, int cols, double scale, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = scale * rng.normal();
    return m;
}

Eigen::MatrixXd rms_norm(const Eigen::MatrixXd& x, const Eigen::VectorXd& gain) {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double rms = std::sqrt(x.row(i).squaredNorm() / x.cols() + 1e-8);
        out.row(i) = (x.row(i) / rms).cwiseProduct(gain.transpose());
    }
    return out;
}

}  // namespace

TokenSequence patchify_latent(const LatentVolume& z, int patch) {
    if (patch <= 0 || z.height % patch != 0 || z.width % patch != 0) {
        throw ShapeMismatch("latent dimensions not divisible by patch");
    }
    TokenSequence out;
    out.layout = TokenLayout{z.frames, z.height / patch, z.width / patch, patch, 1};
    const int token_dim = patch * patch * z.channels;
    out.tokens.resize(out.layout.count(), token_dim);
    for (int t = 0; t < z.frames; ++t) {
        for (int r = 0; r < out.layout.rows; ++r) {
            for (int c = 0; c < out.layout.cols; ++c) {
                int col = 0;
                for (int dy = 0; dy < patch; ++dy)
                    for (int dx = 0; dx < patch; ++dx)
                        for (int ch = 0; ch < z.channels; ++ch)
                            out.tokens(out.layout.index(t, r, c), col++) =
                                z.at(t, r * patch + dy, c * patch + dx, ch);
            }
        }
    }
    return out;
}

LatentVolume unpatchify_latent(const TokenSequence& tokens, int channels) {
    const TokenLayout& l = tokens.layout;
    if (tokens.dim() != l.patch * l.patch * channels || tokens.count() != l.count()) {
        throw LayoutMismatch("token width does not match patch*patch*channels");
    }
    LatentVolume z(l.frames, l.rows * l.patch, l.cols * l.patch, channels);
    for (int t = 0; t < l.frames; ++t) {
        for (int r = 0; r < l.rows; ++r) {
            for (int c = 0; c < l.cols; ++c) {
                int col = 0;
                for (int dy = 0; dy < l.patch; ++dy)
                    for (int dx = 0; dx < l.patch; ++dx)
                        for (int ch = 0; ch < channels; ++ch)
                            z.at(t, r * l.patch + dy, c * l.patch + dx, ch) =
                                tokens.tokens(l.index(t, r, c), col++);
            }
        }
    }
    return z;
}

TokenSequence patchify_rays(const std::vector<RayEmbeddingMap>& rays, int patch,
                            int temporal_patch) {
    if (rays.empty()) throw ShapeMismatch("no ray maps");
    const int t_full = static_cast<int>(rays.size());
    const int h = rays.front().height, w = rays.front().width;
    if (temporal_patch <= 0 || t_full % temporal_patch != 0 || patch <= 0 || h % patch != 0 ||
        w % patch != 0) {
        throw ShapeMismatch("ray map dimensions not divisible by patch sizes");
    }
    for (const auto& m : rays) {
        if (m.height != h || m.width != w) throw ShapeMismatch("inconsistent ray map sizes");
    }
    TokenSequence out;
    out.layout = TokenLayout{t_full / temporal_patch, h / patch, w / patch, patch, temporal_patch};
    const int token_dim = temporal_patch * patch * patch * 6;
    out.tokens.resize(out.layout.count(), token_dim);
    for (int t = 0; t < out.layout.frames; ++t) {
        for (int r = 0; r < out.layout.rows; ++r) {
            for (int c = 0; c < out.layout.cols; ++c) {
                int col = 0;
                for (int dt = 0; dt < temporal_patch; ++dt)
                    for (int dy = 0; dy < patch; ++dy)
                        for (int dx = 0; dx < patch; ++dx)
                            for (int ch = 0; ch < 6; ++ch)
                                out.tokens(out.layout.index(t, r, c), col++) =
                                    rays[t * temporal_patch + dt].at(r * patch + dy,
                                                                     c * patch + dx, ch);
            }
        }
    }
    return out;
}

std::vector<RayEmbeddingMap> unpatchify_rays(const TokenSequence& tokens) {
    const TokenLayout& l = tokens.layout;
    if (tokens.dim() != l.temporal_patch * l.patch * l.patch * 6) {
        throw LayoutMismatch("token width does not match ray patch layout");
    }
    std::vector<RayEmbeddingMap> rays(static_cast<size_t>(l.frames) * l.temporal_patch);
    for (auto& m : rays) {
        m.height = l.rows * l.patch;
        m.width = l.cols * l.patch;
        m.data.assign(static_cast<size_t>(m.height) * m.width * 6, 0.0);
    }
    for (int t = 0; t < l.frames; ++t) {
        for (int r = 0; r < l.rows; ++r) {
            for (int c = 0; c < l.cols; ++c) {
                int col = 0;
                for (int dt = 0; dt < l.temporal_patch; ++dt)
                    for (int dy = 0; dy < l.patch; ++dy)
                        for (int dx = 0; dx < l.patch; ++dx)
                            for (int ch = 0; ch < 6; ++ch)
                                rays[t * l.temporal_patch + dt].at(r * l.patch + dy,
                                                                   c * l.patch + dx, ch) =
                                    tokens.tokens(l.index(t, r, c), col++);
            }
        }
    }
    return rays;
}

TokenSequence fuse_tokens(const TokenSequence& latent, const TokenSequence& pose,
                          const TokenSequence& depth, const Eigen::MatrixXd& proj) {
    if (latent.count() != pose.count() || latent.count() != depth.count() ||
        !(latent.layout.frames == pose.layout.frames && latent.layout.rows == pose.layout.rows &&
          latent.layout.cols == pose.layout.cols) ||
        !(latent.layout.frames == depth.layout.frames && latent.layout.rows == depth.layout.rows &&
          latent.layout.cols == depth.layout.cols)) {
        throw LayoutMismatch("token grids are not aligned");
    }
    const int concat_dim = latent.dim() + pose.dim() + depth.dim();
    if (proj.cols() != concat_dim) throw LayoutMismatch("projection width != concatenated width");

    Eigen::MatrixXd concat(latent.count(), concat_dim);
    concat << latent.tokens, pose.tokens, depth.tokens;
    TokenSequence out;
    out.layout = latent.layout;
    out.tokens = concat * proj.transpose();
    return out;
}

SsmBlockParams SsmBlockParams::random(int dim, int state_dim, std::uint64_t seed) {
    Rng rng(seed);
    SsmBlockParams p;
    p.dim = dim;
    p.state_dim = state_dim;
    // S4D-real style decay ladder with a bit of jitter.
    p.a_log.resize(dim, state_dim);
    for (int c = 0; c < dim; ++c)
        for (int s = 0; s < state_dim; ++s)
            p.a_log(c, s) = std::log(1.0 + s) + 0.1 * rng.normal();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    p.w_delta = random_matrix(dim, dim, scale, rng);
    p.b_delta = Eigen::VectorXd::Constant(dim, -1.0);
    p.w_input = random_matrix(state_dim, dim, scale, rng);
    p.w_output = random_matrix(state_dim, dim, scale, rng);
    p.w_out = random_matrix(dim, dim, scale, rng);
    p.norm_gain = Eigen::VectorXd::Ones(dim);
    return p;
}

TokenSequence ssm_scan(const TokenSequence& x, const SsmBlockParams& params,
                       ScanDirection direction) {
    const int n_tokens = x.count();
    const int dim = params.dim;
    const int states = params.state_dim;
    if (x.dim() != dim) throw LayoutMismatch("token width != ssm dim");

    TokenSequence out;
    out.layout = x.layout;
    out.tokens.setZero(n_tokens, dim);
    if (n_tokens == 0) return out;

    // Position in scan order -> token row.
    auto token_at = [&](int pos) {
        return direction == ScanDirection::forward ? pos : n_tokens - 1 - pos;
    };

    // Per-token inputs of the recurrence.
    Eigen::MatrixXd delta(n_tokens, dim);
    Eigen::MatrixXd b_in(n_tokens, states);
    Eigen::MatrixXd c_out(n_tokens, states);
    parallel_for(static_cast<size_t>(n_tokens), [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            const Eigen::VectorXd xi = x.tokens.row(static_cast<Eigen::Index>(i));
            Eigen::VectorXd d = params.w_delta * xi + params.b_delta;
            for (int c = 0; c < dim; ++c) d[c] = softplus(d[c]);
            delta.row(static_cast<Eigen::Index>(i)) = d;
            b_in.row(static_cast<Eigen::Index>(i)) = params.w_input * xi;
            c_out.row(static_cast<Eigen::Index>(i)) = params.w_output * xi;
        }
    });

    const Eigen::MatrixXd a = -params.a_log.array().exp();  // dim x states, negative

    const int chunk = 64;
    const int n_chunks = (n_tokens + chunk - 1) / chunk;

    // Pass 1: per-chunk decay product and end state from a zero start.
    std::vector<Eigen::MatrixXd> chunk_decay(n_chunks);
    std::vector<Eigen::MatrixXd> chunk_state(n_chunks);
    parallel_for(static_cast<size_t>(n_chunks), [&](size_t begin, size_t end) {
        for (size_t j = begin; j < end; ++j) {
            Eigen::MatrixXd decay = Eigen::MatrixXd::Ones(dim, states);
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, states);
            const int lo = static_cast<int>(j) * chunk;
            const int hi = std::min(n_tokens, lo + chunk);
            for (int pos = lo; pos < hi; ++pos) {
                const int row = token_at(pos);
                for (int c = 0; c < dim; ++c) {
                    const double dt = delta(row, c);
                    const double xv = x.tokens(row, c) * dt;
                    for (int s = 0; s < states; ++s) {
                        const double decay_cs = std::exp(dt * a(c, s));
                        h(c, s) = decay_cs * h(c, s) + xv * b_in(row, s);
                        decay(c, s) *= decay_cs;
                    }
                }
            }
            chunk_decay[j] = std::move(decay);
            chunk_state[j] = std::move(h);
        }
    });

    // Pass 2: carry states across chunks (cheap, sequential).
    std::vector<Eigen::MatrixXd> h_in(n_chunks);
    Eigen::MatrixXd carry = Eigen::MatrixXd::Zero(dim, states);
    for (int j = 0; j < n_chunks; ++j) {
        h_in[j] = carry;
        carry = chunk_decay[j].cwiseProduct(carry) + chunk_state[j];
    }

    // Pass 3: replay each chunk from its incoming state and emit outputs.
    parallel_for(static_cast<size_t>(n_chunks), [&](size_t begin, size_t end) {
        for (size_t j = begin; j < end; ++j) {
            Eigen::MatrixXd h = h_in[j];
            const int lo = static_cast<int>(j) * chunk;
            const int hi = std::min(n_tokens, lo + chunk);
            for (int pos = lo; pos < hi; ++pos) {
                const int row = token_at(pos);
                for (int c = 0; c < dim; ++c) {
                    const double dt = delta(row, c);
                    const double xv = x.tokens(row, c) * dt;
                    double y = 0.0;
                    for (int s = 0; s < states; ++s) {
                        h(c, s) = std::exp(dt * a(c, s)) * h(c, s) + xv * b_in(row, s);
                        y += c_out(row, s) * h(c, s);
                    }
                    out.tokens(row, c) = y;
                }
            }
        }
    });
    return out;
}

TokenSequence ssm_block(const TokenSequence& x, const SsmBlockParams& params) {
    TokenSequence normed;
    normed.layout = x.layout;
    normed.tokens = rms_norm(x.tokens, params.norm_gain);
    const TokenSequence fwd = ssm_scan(normed, params, ScanDirection::forward);
    const TokenSequence bwd = ssm_scan(normed, params, ScanDirection::backward);
    TokenSequence out;
    out.layout = x.layout;
    out.tokens = x.tokens + (fwd.tokens + bwd.tokens) * params.w_out.transpose();
    return out;
}

AttentionParams AttentionParams::random(int dim, int heads, std::uint64_t seed) {
    if (dim % heads != 0) throw LayoutMismatch("width not divisible by heads");
    Rng rng(seed);
    AttentionParams p;
    p.dim = dim;
    p.heads = heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    p.w_q = random_matrix(dim, dim, scale, rng);
    p.w_k = random_matrix(dim, dim, scale, rng);
    p.w_v = random_matrix(dim, dim, scale, rng);
    p.w_o = random_matrix(dim, dim, scale, rng);
    p.norm_gain = Eigen::VectorXd::Ones(dim);
    return p;
}

TokenSequence masked_attention_block(const TokenSequence& x, const AttentionParams& params,
                                     const EpipolarMaskSet* masks) {
    const int n = x.count();
    const int dim = params.dim;
    if (x.dim() != dim) throw LayoutMismatch("token width != attention dim");
    const TokenLayout& l = x.layout;
    if (masks) {
        if (masks->height != l.rows || masks->width != l.cols || masks->n_frames != l.frames) {
            throw LayoutMismatch("mask resolution != token layout");
        }
    }
    const int head_dim = dim / params.heads;
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
    const int pixels = l.rows * l.cols;

    const Eigen::MatrixXd normed = rms_norm(x.tokens, params.norm_gain);
    const Eigen::MatrixXd q = normed * params.w_q.transpose();
    const Eigen::MatrixXd k = normed * params.w_k.transpose();
    const Eigen::MatrixXd v = normed * params.w_v.transpose();

    Eigen::MatrixXd attended(n, dim);
    parallel_for(static_cast<size_t>(n), [&](size_t begin, size_t end) {
        std::vector<int> allowed;
        std::vector<double> logits;
        for (size_t qi = begin; qi < end; ++qi) {
            const int query = static_cast<int>(qi);
            const int q_frame = query / pixels;
            const int q_pixel = query % pixels;
            allowed.clear();
            if (masks) {
                for (int key = 0; key < n; ++key) {
                    const PairMask& pm = masks->pair(key / pixels, q_frame);
                    if (pm.bits.get(q_pixel, key % pixels)) allowed.push_back(key);
                }
                if (allowed.empty()) allowed.push_back(query);  // self fallback
            } else {
                allowed.resize(n);
                for (int key = 0; key < n; ++key) allowed[key] = key;
            }

            for (int h = 0; h < params.heads; ++h) {
                const int off = h * head_dim;
                logits.assign(allowed.size(), 0.0);
                double max_logit = -std::numeric_limits<double>::infinity();
                for (size_t j = 0; j < allowed.size(); ++j) {
                    logits[j] = q.row(query).segment(off, head_dim)
                                    .dot(k.row(allowed[j]).segment(off, head_dim)) *
                                inv_sqrt;
                    max_logit = std::max(max_logit, logits[j]);
                }
                double denom = 0.0;
                for (double& lgt : logits) {
                    lgt = std::exp(lgt - max_logit);
                    denom += lgt;
                }
                Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(head_dim);
                for (size_t j = 0; j < allowed.size(); ++j) {
                    acc += (logits[j] / denom) * v.row(allowed[j]).segment(off, head_dim);
                }
                attended.row(query).segment(off, head_dim) = acc;
            }
        }
    });

    TokenSequence out;
    out.layout = x.layout;
    out.tokens = x.tokens + attended * params.w_o.transpose();
    return out;
}

HybridStackConfig HybridStackConfig::preset(int dim, int state_dim, int heads,
                                            std::uint64_t seed) {
    HybridStackConfig c;
    c.dim = dim;
    c.state_dim = state_dim;
    c.heads = heads;
    c.seed = seed;
    c.blocks = {{BlockKind::ssm, false},
                {BlockKind::attention, true},
                {BlockKind::ssm, false},
                {BlockKind::attention, true}};
    return c;
}

TokenSequence run_stack(const TokenSequence& x, const HybridStackConfig& config,
                        const EpipolarMaskSet* masks) {
    if (x.dim() != config.dim) throw LayoutMismatch("token width != stack width");
    TokenSequence cur = x;
    for (size_t i = 0; i < config.blocks.size(); ++i) {
        const std::uint64_t block_seed = hash_combine(config.seed, i);
        const BlockSpec& spec = config.blocks[i];
        if (spec.kind == BlockKind::ssm) {
            cur = ssm_block(cur, SsmBlockParams::random(config.dim, config.state_dim, block_seed));
        } else {
            const AttentionParams params =
                AttentionParams::random(config.dim, config.heads, block_seed);
            cur = masked_attention_block(cur, params, spec.use_mask ? masks : nullptr);
        }
    }
    return cur;
}

DecoderParams DecoderParams::random(int in_dim, int patch, int temporal_patch,
                                    std::uint64_t seed) {
    Rng rng(seed);
    DecoderParams p;
    p.in_dim = in_dim;
    p.patch = patch;
    p.temporal_patch = temporal_patch;
    const size_t n = static_cast<size_t>(temporal_patch) * patch * patch * 12 * in_dim;
    p.kernel.resize(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (auto& w : p.kernel) w = scale * rng.normal();
    p.bias = Eigen::VectorXd::Zero(12);
    return p;
}

GaussianFeatureMap decode_featuremap(const TokenSequence& y, const DecoderParams& params) {
    const TokenLayout& l = y.layout;
    if (y.dim() != params.in_dim || l.count() != y.count()) {
        throw LayoutMismatch("token sequence does not match decoder input");
    }
    GaussianFeatureMap g(l.frames * params.temporal_patch, l.rows * params.patch,
                         l.cols * params.patch);
    for (int t = 0; t < l.frames; ++t) {
        for (int r = 0; r < l.rows; ++r) {
            for (int c = 0; c < l.cols; ++c) {
                const Eigen::RowVectorXd token = y.tokens.row(l.index(t, r, c));
                for (int dt = 0; dt < params.temporal_patch; ++dt) {
                    for (int dy = 0; dy < params.patch; ++dy) {
                        for (int dx = 0; dx < params.patch; ++dx) {
                            for (int ch = 0; ch < 12; ++ch) {
                                double acc = params.bias[ch];
                                const double* w =
                                    params.kernel.data() + params.kernel_index(dt, dy, dx, ch, 0);
                                for (int d = 0; d < params.in_dim; ++d) acc += w[d] * token[d];
                                g.at(t * params.temporal_patch + dt, r * params.patch + dy,
                                     c * params.patch + dx, ch) = acc;
                            }
                        }
                    }
                }
            }
        }
    }
    return g;
}

std::vector<double> transposed_conv1d(const std::vector<double>& input,
                                      const std::vector<double>& kernel, int stride) {
    if (input.empty() || kernel.empty() || stride <= 0) return {};
    std::vector<double> out((input.size() - 1) * stride + kernel.size(), 0.0);
    for (size_t i = 0; i < input.size(); ++i) {
        for (size_t j = 0; j < kernel.size(); ++j) {
            out[i * stride + j] += kernel[j] * input[i];
        }
    }
    return out;
}

std::vector<double> train_decoder(const TokenSequence& y, DecoderParams& params,
                                  const Trajectory& decode_trajectory,
                                  const std::vector<SupervisionView>& views,
                                  const LossWeights& weights, const TrainDecoderConfig& config) {
    const TokenLayout& l = y.layout;
    const int out_h = l.rows * params.patch;
    const int out_w = l.cols * params.patch;
    const int out_t = l.frames * params.temporal_patch;
    if (out_h > 32 || out_w > 32 || out_t > 4) {
        throw ShapeMismatch("decoder training is restricted to <=32x32, <=4 frames");
    }
    if (views.empty()) throw ShapeMismatch("no supervision views");

    auto sigmoid_d = [](double s) { return s * (1.0 - s); };

    std::vector<double> history;
    std::vector<double> m_kernel(params.kernel.size(), 0.0), v_kernel(params.kernel.size(), 0.0);
    Eigen::VectorXd m_bias = Eigen::VectorXd::Zero(12), v_bias = Eigen::VectorXd::Zero(12);

    for (int iter = 0; iter < config.iterations; ++iter) {
        const GaussianFeatureMap g = decode_featuremap(y, params);
        const GaussianCloud cloud = decode_gaussians(g, decode_trajectory);

        std::vector<double> d_feature(g.data.size(), 0.0);
        double loss = 0.0;
        for (const auto& view : views) {
            const RenderResult rendered =
                render(cloud, view.camera, config.background, config.render);
            const MetricDepthMap* depth_target = view.depth ? &*view.depth : nullptr;
            loss += composite_loss(rendered, view.image, depth_target, weights).total;

            Image d_image(view.image.width, view.image.height);
            const double mse_scale =
                2.0 * weights.lambda_mse / static_cast<double>(view.image.data.size());
            for (size_t i = 0; i < d_image.data.size(); ++i) {
                d_image.data[i] = mse_scale * (rendered.image.data[i] - view.image.data[i]);
            }
            const RenderGradients rg =
                render_backward(cloud, view.camera, config.background, d_image, nullptr,
                                config.render);

            // Chain render gradients back through the activations to the
            // color/opacity/ray-distance channels. Scale and rotation channels
            // receive no gradient from this path.
            for (size_t i = 0; i < cloud.size(); ++i) {
                const Provenance& prov = cloud.provenance[i];
                const int py = prov.pixel / g.width;
                const int px = prov.pixel % g.width;
                const size_t base = g.index(prov.frame, py, px);
                const Gaussian3D& prim = cloud.gaussians[i];
                for (int c = 0; c < 3; ++c) {
                    d_feature[base + c] += rg.d_color[i][c] * sigmoid_d(prim.color[c]);
                }
                d_feature[base + 10] += rg.d_opacity[i] * sigmoid_d(prim.opacity);
                const double raw = g.data[base + 11];
                d_feature[base + 11] +=
                    sigmoid(raw) * cloud.rays[i].direction.dot(rg.d_mean[i]);
            }
        }
        history.push_back(loss);

        // Deconvolution backward: out = W token + bias per covered cell.
        std::vector<double> g_kernel(params.kernel.size(), 0.0);
        Eigen::VectorXd g_bias = Eigen::VectorXd::Zero(12);
        for (int t = 0; t < l.frames; ++t) {
            for (int r = 0; r < l.rows; ++r) {
                for (int c = 0; c < l.cols; ++c) {
                    const Eigen::RowVectorXd token = y.tokens.row(l.index(t, r, c));
                    for (int dt = 0; dt < params.temporal_patch; ++dt) {
                        for (int dy = 0; dy < params.patch; ++dy) {
                            for (int dx = 0; dx < params.patch; ++dx) {
                                const size_t cell = g.index(t * params.temporal_patch + dt,
                                                            r * params.patch + dy,
                                                            c * params.patch + dx);
                                for (int ch = 0; ch < 12; ++ch) {
                                    const double up = d_feature[cell + ch];
                                    if (up == 0.0) continue;
                                    g_bias[ch] += up;
                                    double* gw = g_kernel.data() +
                                                 params.kernel_index(dt, dy, dx, ch, 0);
                                    for (int d = 0; d < params.in_dim; ++d) gw[d] += up * token[d];
                                }
                            }
                        }
                    }
                }
            }
        }

        const int step = iter + 1;
        const double bc1 = 1.0 - std::pow(0.9, step);
        const double bc2 = 1.0 - std::pow(0.999, step);
        for (size_t i = 0; i < params.kernel.size(); ++i) {
            m_kernel[i] = 0.9 * m_kernel[i] + 0.1 * g_kernel[i];
            v_kernel[i] = 0.999 * v_kernel[i] + 0.001 * g_kernel[i] * g_kernel[i];
            params.kernel[i] -=
                config.learning_rate * (m_kernel[i] / bc1) / (std::sqrt(v_kernel[i] / bc2) + 1e-8);
        }
        for (int i = 0; i < 12; ++i) {
            m_bias[i] = 0.9 * m_bias[i] + 0.1 * g_bias[i];
            v_bias[i] = 0.999 * v_bias[i] + 0.001 * g_bias[i] * g_bias[i];
            params.bias[i] -=
                config.learning_rate * (m_bias[i] / bc1) / (std::sqrt(v_bias[i] / bc2) + 1e-8);
        }
    }
    return history;
}

}  // namespace scenecore
