// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/diffusion.hpp"

#include <cmath>

#include "scenecore/error.hpp"
#include "scenecore/rng.hpp"

namespace scenecore {

Eigen::VectorXd ConditioningBundle::assemble() const {
    Eigen::VectorXd out(dim());
    Eigen::Index at = 0;
    out.segment(at, camera_code.size()) = camera_code;
    at += camera_code.size();
    if (boundary_start) {
        out.segment(at, boundary_start->size()) = *boundary_start;
        at += boundary_start->size();
    }
    if (boundary_end) {
        out.segment(at, boundary_end->size()) = *boundary_end;
        at += boundary_end->size();
    }
    return out;
}

ToyDenoiser ToyDenoiser::random(int data_dim, int cond_dim, int hidden, std::uint64_t seed) {
    Rng rng(seed);
    auto init = [&](Eigen::MatrixXd& m, int rows, int cols) {
        m.resize(rows, cols);
        const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) m(r, c) = scale * rng.normal();
    };
    ToyDenoiser d;
    d.data_dim = data_dim;
    d.cond_dim = cond_dim;
    d.hidden = hidden;
    init(d.w1, hidden, data_dim + 1 + cond_dim);
    d.b1 = Eigen::VectorXd::Zero(hidden);
    init(d.w2, hidden, hidden);
    d.b2 = Eigen::VectorXd::Zero(hidden);
    init(d.w3, data_dim, hidden);
    d.b3 = Eigen::VectorXd::Zero(data_dim);
    d.null_token = Eigen::VectorXd::Zero(cond_dim);
    for (int i = 0; i < cond_dim; ++i) d.null_token[i] = 0.01 * rng.normal();
    return d;
}

Eigen::VectorXd ToyDenoiser::forward(const Eigen::VectorXd& x_in, double c_noise,
                                     const Eigen::VectorXd& cond) const {
    if (x_in.size() != data_dim || cond.size() != cond_dim) {
        throw ShapeMismatch("denoiser input dimensions");
    }
    Eigen::VectorXd input(data_dim + 1 + cond_dim);
    input << x_in, c_noise, cond;
    const Eigen::VectorXd a1 = (w1 * input + b1).array().tanh();
    const Eigen::VectorXd a2 = (w2 * a1 + b2).array().tanh();
    return w3 * a2 + b3;
}

Eigen::VectorXd precondition(const ToyDenoiser& denoiser, const Eigen::VectorXd& x,
                             const NoiseLevel& sigma, const ConditioningBundle& cond,
                             const Preconditioner& pre) {
    const Eigen::VectorXd cond_vec = cond.drop_flag ? denoiser.null_token : cond.assemble();
    const Eigen::VectorXd residual =
        denoiser.forward(pre.c_in(sigma.sigma) * x, pre.c_noise(sigma.sigma), cond_vec);
    return pre.c_skip(sigma.sigma) * x + pre.c_out(sigma.sigma) * residual;
}

double dsm_loss(const ToyDenoiser& denoiser, const std::vector<Eigen::VectorXd>& batch,
                const std::vector<double>& sigmas, const std::vector<ConditioningBundle>& conds,
                std::uint64_t rng_seed, const Preconditioner& pre) {
    if (batch.empty() || batch.size() != sigmas.size() || batch.size() != conds.size()) {
        throw ShapeMismatch("dsm batch arrays must be non-empty and equal length");
    }
    double total = 0.0;
    for (size_t i = 0; i < batch.size(); ++i) {
        Rng rng(hash_combine(rng_seed, i));
        Eigen::VectorXd noisy = batch[i];
        for (Eigen::Index j = 0; j < noisy.size(); ++j) noisy[j] += sigmas[i] * rng.normal();
        const Eigen::VectorXd denoised =
            precondition(denoiser, noisy, NoiseLevel{sigmas[i]}, conds[i], pre);
        total += (denoised - batch[i]).squaredNorm();
    }
    return total / static_cast<double>(batch.size());
}

std::vector<double> sigma_schedule(int n_steps, double sigma_min, double sigma_max) {
    std::vector<double> sigmas(static_cast<size_t>(n_steps) + 1, 0.0);
    if (n_steps == 1) {
        sigmas[0] = sigma_max;
        return sigmas;
    }
    const double log_max = std::log(sigma_max);
    const double log_min = std::log(sigma_min);
    for (int i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) / (n_steps - 1);
        sigmas[i] = std::exp(log_max + t * (log_min - log_max));
    }
    return sigmas;  // trailing zero terminates the ladder
}

Eigen::VectorXd sample(const ToyDenoiser& denoiser, const ConditioningBundle& cond, int n_steps,
                       double guidance_w, std::uint64_t rng_seed, const SamplerConfig& config) {
    if (n_steps < 1) throw ShapeMismatch("sampler needs n_steps >= 1");
    const std::vector<double> sigmas =
        sigma_schedule(n_steps, config.sigma_min, config.sigma_max);

    Rng rng(rng_seed);
    Eigen::VectorXd x(denoiser.data_dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = config.sigma_max * rng.normal();

    ConditioningBundle uncond = cond;
    uncond.drop_flag = true;
    ConditioningBundle with_cond = cond;
    with_cond.drop_flag = false;

    for (int i = 0; i < n_steps; ++i) {
        const double sigma = sigmas[i];
        const double sigma_next = sigmas[i + 1];
        Eigen::VectorXd denoised;
        if (guidance_w == 0.0) {
            denoised = precondition(denoiser, x, NoiseLevel{sigma}, uncond, config.pre);
        } else if (guidance_w == 1.0) {
            denoised = precondition(denoiser, x, NoiseLevel{sigma}, with_cond, config.pre);
        } else {
            const Eigen::VectorXd d_cond =
                precondition(denoiser, x, NoiseLevel{sigma}, with_cond, config.pre);
            const Eigen::VectorXd d_uncond =
                precondition(denoiser, x, NoiseLevel{sigma}, uncond, config.pre);
            denoised = d_uncond + guidance_w * (d_cond - d_uncond);
        }
        x += (sigma_next - sigma) * (x - denoised) / sigma;
    }
    return x;
}

ToyDataset toy_trajectory_dataset(int n, int length, std::uint64_t rng_seed, double sigma_data) {
    if (length < 3) throw ShapeMismatch("toy sequences need length >= 3");
    ToyDataset out;
    out.sigma_data = sigma_data;
    out.samples.resize(n, length);
    for (int i = 0; i < n; ++i) {
        Rng rng(hash_combine(rng_seed, static_cast<std::uint64_t>(i)));
        double acc = 0.0;
        for (int j = 0; j < length; ++j) {
            acc += rng.normal();
            out.samples(i, j) = acc;
        }
        const double mean = out.samples.row(i).mean();
        out.samples.row(i).array() -= mean;
        const double std = std::sqrt(out.samples.row(i).squaredNorm() / length);
        if (std > 1e-12) out.samples.row(i) *= sigma_data / std;
    }
    return out;
}

ConditioningBundle ToyDataset::conditioning(int row, bool interpolation) const {
    ConditioningBundle cond;
    cond.camera_code = Eigen::VectorXd(0);
    cond.boundary_start = Eigen::VectorXd::Constant(1, samples(row, 0));
    if (interpolation) {
        cond.boundary_end = Eigen::VectorXd::Constant(1, samples(row, length() - 1));
    }
    return cond;
}

namespace {

// Adam over a flat list of (matrix/vector, gradient) pairs.
struct FlatAdam {
    std::vector<double> m, v;
    int t = 0;

    void ensure(size_t n) {
        if (m.size() != n) {
            m.assign(n, 0.0);
            v.assign(n, 0.0);
        }
    }
    void step(double* params, const double* grads, size_t n, double lr, double beta1,
              double beta2) {
        ensure(n);
        ++t;
        const double bc1 = 1.0 - std::pow(beta1, t);
        const double bc2 = 1.0 - std::pow(beta2, t);
        for (size_t i = 0; i < n; ++i) {
            m[i] = beta1 * m[i] + (1.0 - beta1) * grads[i];
            v[i] = beta2 * v[i] + (1.0 - beta2) * grads[i] * grads[i];
            params[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + 1e-8);
        }
    }
};

}  // namespace

std::vector<TrainHistoryEntry> train_toy(ToyDenoiser& denoiser, const ToyDataset& dataset,
                                         const TrainConfig& config, const Preconditioner& pre) {
    const bool interp = config.mode == ConditioningMode::interpolation;
    const int data_dim = denoiser.data_dim;
    if (dataset.length() != data_dim) throw ShapeMismatch("dataset length != denoiser dim");

    std::vector<TrainHistoryEntry> history;
    history.reserve(config.steps);

    Eigen::MatrixXd g_w1(denoiser.w1.rows(), denoiser.w1.cols());
    Eigen::MatrixXd g_w2(denoiser.w2.rows(), denoiser.w2.cols());
    Eigen::MatrixXd g_w3(denoiser.w3.rows(), denoiser.w3.cols());
    Eigen::VectorXd g_b1(denoiser.b1.size()), g_b2(denoiser.b2.size()), g_b3(denoiser.b3.size());
    Eigen::VectorXd g_null(denoiser.null_token.size());

    FlatAdam adam_w1, adam_w2, adam_w3, adam_b1, adam_b2, adam_b3, adam_null;

    Rng rng(config.seed);
    for (int step = 0; step < config.steps; ++step) {
        g_w1.setZero();
        g_w2.setZero();
        g_w3.setZero();
        g_b1.setZero();
        g_b2.setZero();
        g_b3.setZero();
        g_null.setZero();
        double loss = 0.0;

        for (int b = 0; b < config.batch_size; ++b) {
            const int row = static_cast<int>(rng.uniform_int(0, dataset.count() - 1));
            const Eigen::VectorXd x0 = dataset.samples.row(row).transpose();
            const double sigma =
                std::exp(config.ln_sigma_mean + config.ln_sigma_std * rng.normal());
            const bool drop = rng.uniform() < config.drop_probability;

            ConditioningBundle cond = dataset.conditioning(row, interp);
            const Eigen::VectorXd cond_vec = drop ? denoiser.null_token : cond.assemble();

            Eigen::VectorXd noisy = x0;
            for (int j = 0; j < data_dim; ++j) noisy[j] += sigma * rng.normal();

            // Forward with cached activations.
            const double c_in = pre.c_in(sigma), c_out = pre.c_out(sigma);
            const double c_skip = pre.c_skip(sigma), c_noise = pre.c_noise(sigma);
            Eigen::VectorXd input(data_dim + 1 + denoiser.cond_dim);
            input << c_in * noisy, c_noise, cond_vec;
            const Eigen::VectorXd a1 = (denoiser.w1 * input + denoiser.b1).array().tanh();
            const Eigen::VectorXd a2 = (denoiser.w2 * a1 + denoiser.b2).array().tanh();
            const Eigen::VectorXd residual = denoiser.w3 * a2 + denoiser.b3;
            const Eigen::VectorXd denoised = c_skip * noisy + c_out * residual;

            const Eigen::VectorXd err = denoised - x0;
            loss += err.squaredNorm();

            // Backprop of |err|^2 / batch.
            const Eigen::VectorXd d_res = (2.0 / config.batch_size) * c_out * err;
            g_w3 += d_res * a2.transpose();
            g_b3 += d_res;
            const Eigen::VectorXd d_a2 = denoiser.w3.transpose() * d_res;
            const Eigen::VectorXd d_z2 = d_a2.cwiseProduct((1.0 - a2.array().square()).matrix());
            g_w2 += d_z2 * a1.transpose();
            g_b2 += d_z2;
            const Eigen::VectorXd d_a1 = denoiser.w2.transpose() * d_z2;
            const Eigen::VectorXd d_z1 = d_a1.cwiseProduct((1.0 - a1.array().square()).matrix());
            g_w1 += d_z1 * input.transpose();
            g_b1 += d_z1;
            if (drop && denoiser.cond_dim > 0) {
                g_null += (denoiser.w1.transpose() * d_z1).tail(denoiser.cond_dim);
            }
        }
        loss /= config.batch_size;
        history.push_back({step, loss});

        adam_w1.step(denoiser.w1.data(), g_w1.data(), g_w1.size(), config.learning_rate,
                     config.beta1, config.beta2);
        adam_b1.step(denoiser.b1.data(), g_b1.data(), g_b1.size(), config.learning_rate,
                     config.beta1, config.beta2);
        adam_w2.step(denoiser.w2.data(), g_w2.data(), g_w2.size(), config.learning_rate,
                     config.beta1, config.beta2);
        adam_b2.step(denoiser.b2.data(), g_b2.data(), g_b2.size(), config.learning_rate,
                     config.beta1, config.beta2);
        adam_w3.step(denoiser.w3.data(), g_w3.data(), g_w3.size(), config.learning_rate,
                     config.beta1, config.beta2);
        adam_b3.step(denoiser.b3.data(), g_b3.data(), g_b3.size(), config.learning_rate,
                     config.beta1, config.beta2);
        if (denoiser.cond_dim > 0) {
            adam_null.step(denoiser.null_token.data(), g_null.data(), g_null.size(),
                           config.learning_rate, config.beta1, config.beta2);
        }
    }
    return history;
}

}  // namespace scenecore
