// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "scenecore/camera.hpp"

namespace scenecore {

struct EssentialMatrix {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
};

struct FundamentalMatrix {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
};

/// Line a*u + b*v + c = 0 with (a, b) unit-normalized when finite, so the
/// point-line distance is |a*u + b*v + c|.
struct EpipolarLine {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    bool at_infinity = false;  // (a, b) vanished; no finite pixel lies on it

    double distance(double u, double v) const {
        if (at_infinity) return std::numeric_limits<double>::infinity();
        return std::abs(a * u + b * v + c);
    }
};

/// Dense boolean matrix packed 64 bits per word, row-major.
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(int rows, int cols, bool fill = false);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool get(int r, int c) const {
        const size_t bit = static_cast<size_t>(r) * words_per_row_ * 64 + c;
        return (words_[bit >> 6] >> (bit & 63)) & 1u;
    }
    void set(int r, int c, bool value) {
        const size_t bit = static_cast<size_t>(r) * words_per_row_ * 64 + c;
        if (value)
            words_[bit >> 6] |= (std::uint64_t{1} << (bit & 63));
        else
            words_[bit >> 6] &= ~(std::uint64_t{1} << (bit & 63));
    }
    std::uint64_t count() const;
    void fill(bool value);
    size_t words_per_row() const { return words_per_row_; }
    const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t>& words() { return words_; }

    bool operator==(const BitMatrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    size_t words_per_row_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Attention mask for one ordered frame pair: entry (q, p) allows destination
/// pixel q to attend source pixel p.
struct PairMask {
    BitMatrix bits;
    bool degenerate = false;  // zero baseline or vanishing F; bits are all-true
};

/// Masks for every ordered frame pair at one feature resolution.
struct EpipolarMaskSet {
    int n_frames = 0;
    int height = 0;  // feature resolution
    int width = 0;
    double tau = 2.0;
    std::vector<PairMask> pairs;  // index (i, k) -> i * n_frames + k

    const PairMask& pair(int i, int k) const { return pairs[static_cast<size_t>(i) * n_frames + k]; }
    PairMask& pair(int i, int k) { return pairs[static_cast<size_t>(i) * n_frames + k]; }
};

/// E = [t]x R from the pose of frame i expressed in frame k's camera frame.
/// Throws DegenerateBaseline when the relative translation vanishes.
EssentialMatrix essential_from_poses(const Pose& pose_i, const Pose& pose_k);

/// F = K_k^-T E K_i^-1.
FundamentalMatrix fundamental_from_essential(const EssentialMatrix& e, const Intrinsics& k_i,
                                             const Intrinsics& k_k);

/// Epipolar line in the destination view for source pixel p (continuous
/// coordinates). Throws EpipoleQuery when F * p~ is the zero vector.
EpipolarLine epipolar_line(const FundamentalMatrix& f, double u, double v);

struct MaskBuildResult {
    BitMatrix bits;  // (dst H*W) x (src H*W)
    bool degenerate = false;
};

/// Thresholded distance-to-epipolar-line mask between two pixel grids. Source
/// pixels are taken at src_res centers, distances measured at dst_res centers.
MaskBuildResult build_mask(const FundamentalMatrix& f, int src_h, int src_w, int dst_h,
                           int dst_w, double tau);

/// Masks for all ordered frame pairs of a trajectory, with intrinsics rescaled
/// to the feature resolution. Diagonal and degenerate pairs are all-true.
EpipolarMaskSet mask_set_for_trajectory(const Trajectory& trajectory, int feature_h,
                                        int feature_w, double tau);

}  // namespace scenecore
