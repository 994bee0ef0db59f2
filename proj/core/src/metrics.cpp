// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "scenecore/error.hpp"

namespace scenecore {

Trajectory normalize_trajectory(const Trajectory& traj) {
    if (traj.size() < 2) throw InvalidFrameCount("normalization needs >= 2 frames");
    Trajectory rel = make_relative(traj);
    double max_norm = 0.0;
    for (const auto& frame : rel.frames) {
        max_norm = std::max(max_norm, frame.pose.translation.norm());
    }
    if (max_norm == 0.0) throw StaticTrajectory();
    for (auto& frame : rel.frames) frame.pose.translation /= max_norm;
    return rel;
}

double rotation_error(const Trajectory& gen, const Trajectory& gt) {
    if (gen.size() != gt.size()) throw LengthMismatch();
    double total = 0.0;
    for (size_t i = 0; i < gen.size(); ++i) {
        const double trace =
            (gen.frames[i].pose.rotation * gt.frames[i].pose.rotation.transpose()).trace();
        total += std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
    }
    return total;
}

double translation_error(const Trajectory& gen, const Trajectory& gt) {
    if (gen.size() != gt.size()) throw LengthMismatch();
    const Trajectory ngen = normalize_trajectory(gen);
    const Trajectory ngt = normalize_trajectory(gt);
    double total = 0.0;
    for (size_t i = 0; i < gen.size(); ++i) {
        total += (ngt.frames[i].pose.translation - ngen.frames[i].pose.translation).norm();
    }
    return total;
}

PoseErrorReport pose_error_report(const Trajectory& gen, const Trajectory& gt) {
    if (gen.size() != gt.size()) throw LengthMismatch();
    const Trajectory rgen = make_relative(gen);
    const Trajectory rgt = make_relative(gt);
    const Trajectory ngen = normalize_trajectory(gen);
    const Trajectory ngt = normalize_trajectory(gt);

    PoseErrorReport report;
    for (size_t i = 0; i < gen.size(); ++i) {
        const double trace =
            (rgen.frames[i].pose.rotation * rgt.frames[i].pose.rotation.transpose()).trace();
        const double r = std::acos(std::clamp((trace - 1.0) / 2.0, -1.0, 1.0));
        const double t =
            (ngt.frames[i].pose.translation - ngen.frames[i].pose.translation).norm();
        report.per_frame_rotation.push_back(r);
        report.per_frame_translation.push_back(t);
        report.r_dist += r;
        report.t_dist += t;
    }
    report.r_mean = report.r_dist / static_cast<double>(gen.size());
    report.t_mean = report.t_dist / static_cast<double>(gen.size());
    return report;
}

double psnr(const Image& a, const Image& b, double max_value) {
    if (!a.same_shape(b)) throw ShapeMismatch("psnr inputs differ in shape");
    double sq = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        const double d = a.data[i] - b.data[i];
        sq += d * d;
    }
    const double mse = sq / static_cast<double>(a.data.size());
    if (mse == 0.0) return 99.0;
    return 10.0 * std::log10(max_value * max_value / mse);
}

namespace {

std::vector<double> gaussian_window(int radius, double sigma) {
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += w[i + radius];
    }
    for (auto& v : w) v /= sum;
    return w;
}

// Separable valid-region Gaussian filter of one channel.
GrayImage filter_valid(const GrayImage& img, const std::vector<double>& window) {
    const int radius = static_cast<int>(window.size() / 2);
    GrayImage horiz(img.width - 2 * radius, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < horiz.width; ++x) {
            double acc = 0.0;
            for (size_t j = 0; j < window.size(); ++j) acc += window[j] * img.at(y, x + static_cast<int>(j));
            horiz.at(y, x) = acc;
        }
    }
    GrayImage out(horiz.width, img.height - 2 * radius);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            double acc = 0.0;
            for (size_t j = 0; j < window.size(); ++j) acc += window[j] * horiz.at(y + static_cast<int>(j), x);
            out.at(y, x) = acc;
        }
    }
    return out;
}

GrayImage channel_of(const Image& img, int c) {
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.at(y, x) = img.at(y, x, c);
    return out;
}

GrayImage product(const GrayImage& a, const GrayImage& b) {
    GrayImage out(a.width, a.height);
    for (size_t i = 0; i < out.data.size(); ++i) out.data[i] = a.data[i] * b.data[i];
    return out;
}

}  // namespace

double ssim(const Image& a, const Image& b, double max_value) {
    if (!a.same_shape(b)) throw ShapeMismatch("ssim inputs differ in shape");
    constexpr int kRadius = 5;  // 11x11 window
    if (a.width < 2 * kRadius + 1 || a.height < 2 * kRadius + 1) {
        throw ImageTooSmall("ssim needs min dimension >= 11");
    }
    const std::vector<double> window = gaussian_window(kRadius, 1.5);
    const double c1 = (0.01 * max_value) * (0.01 * max_value);
    const double c2 = (0.03 * max_value) * (0.03 * max_value);

    double total = 0.0;
    for (int c = 0; c < 3; ++c) {
        const GrayImage xa = channel_of(a, c);
        const GrayImage xb = channel_of(b, c);
        const GrayImage mu_a = filter_valid(xa, window);
        const GrayImage mu_b = filter_valid(xb, window);
        const GrayImage e_aa = filter_valid(product(xa, xa), window);
        const GrayImage e_bb = filter_valid(product(xb, xb), window);
        const GrayImage e_ab = filter_valid(product(xa, xb), window);

        double acc = 0.0;
        for (size_t i = 0; i < mu_a.data.size(); ++i) {
            const double ma = mu_a.data[i], mb = mu_b.data[i];
            const double var_a = e_aa.data[i] - ma * ma;
            const double var_b = e_bb.data[i] - mb * mb;
            const double cov = e_ab.data[i] - ma * mb;
            acc += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                   ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
        }
        total += acc / static_cast<double>(mu_a.data.size());
    }
    return total / 3.0;
}

}  // namespace scenecore
