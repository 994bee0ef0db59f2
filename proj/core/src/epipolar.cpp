// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/epipolar.hpp"

#include <bit>
#include <cmath>

#include "scenecore/error.hpp"
#include "scenecore/parallel.hpp"

namespace scenecore {

BitMatrix::BitMatrix(int rows, int cols, bool fill_value) : rows_(rows), cols_(cols) {
    words_per_row_ = (static_cast<size_t>(cols) + 63) / 64;
    words_.assign(static_cast<size_t>(rows) * words_per_row_, 0);
    if (fill_value) fill(true);
}

void BitMatrix::fill(bool value) {
    if (!value) {
        std::fill(words_.begin(), words_.end(), 0);
        return;
    }
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    // Clear padding bits past the last column so popcounts stay exact.
    const int tail = cols_ % 64;
    if (tail != 0) {
        const std::uint64_t mask = (std::uint64_t{1} << tail) - 1;
        for (int r = 0; r < rows_; ++r) words_[static_cast<size_t>(r) * words_per_row_ + words_per_row_ - 1] = mask;
    }
}

std::uint64_t BitMatrix::count() const {
    std::uint64_t n = 0;
    for (const auto w : words_) n += std::popcount(w);
    return n;
}

EssentialMatrix essential_from_poses(const Pose& pose_i, const Pose& pose_k) {
    // Relative pose mapping frame-i camera coordinates into frame k's.
    const Eigen::Matrix3d r_rel = pose_k.rotation.transpose() * pose_i.rotation;
    const Eigen::Vector3d t_rel =
        pose_k.rotation.transpose() * (pose_i.translation - pose_k.translation);
    if (t_rel.norm() < 1e-12) throw DegenerateBaseline("zero relative translation");
    Eigen::Matrix3d tx;
    tx << 0.0, -t_rel.z(), t_rel.y(),
          t_rel.z(), 0.0, -t_rel.x(),
          -t_rel.y(), t_rel.x(), 0.0;
    return EssentialMatrix{tx * r_rel};
}

FundamentalMatrix fundamental_from_essential(const EssentialMatrix& e, const Intrinsics& k_i,
                                             const Intrinsics& k_k) {
    return FundamentalMatrix{k_k.inverse_matrix().transpose() * e.m * k_i.inverse_matrix()};
}

EpipolarLine epipolar_line(const FundamentalMatrix& f, double u, double v) {
    const Eigen::Vector3d l = f.m * Eigen::Vector3d(u, v, 1.0);
    const double scale = f.m.cwiseAbs().maxCoeff();
    if (l.cwiseAbs().maxCoeff() < 1e-12 * std::max(scale, 1e-300)) {
        throw EpipoleQuery("source pixel is the epipole");
    }
    EpipolarLine line;
    const double ab = std::hypot(l.x(), l.y());
    if (ab < 1e-15 * std::abs(l.z())) {
        line.a = l.x();
        line.b = l.y();
        line.c = l.z();
        line.at_infinity = true;
    } else {
        line.a = l.x() / ab;
        line.b = l.y() / ab;
        line.c = l.z() / ab;
    }
    return line;
}

MaskBuildResult build_mask(const FundamentalMatrix& f, int src_h, int src_w, int dst_h,
                           int dst_w, double tau) {
    const size_t n_src = static_cast<size_t>(src_h) * src_w;
    const size_t n_dst = static_cast<size_t>(dst_h) * dst_w;
    MaskBuildResult out;
    if (f.m.cwiseAbs().maxCoeff() < 1e-12) {
        out.bits = BitMatrix(static_cast<int>(n_dst), static_cast<int>(n_src), true);
        out.degenerate = true;
        return out;
    }
    out.bits = BitMatrix(static_cast<int>(n_dst), static_cast<int>(n_src), false);

    // One epipolar line per source pixel. An epipole query is geometrically
    // unconstrained, so its column allows everything.
    std::vector<EpipolarLine> lines(n_src);
    std::vector<std::uint8_t> epipole(n_src, 0);
    for (size_t p = 0; p < n_src; ++p) {
        const int su = static_cast<int>(p % src_w);
        const int sv = static_cast<int>(p / src_w);
        try {
            lines[p] = epipolar_line(f, su + 0.5, sv + 0.5);
        } catch (const EpipoleQuery&) {
            epipole[p] = 1;
        }
    }
    // Rows own disjoint words, so destination pixels can run in parallel.
    parallel_for(n_dst, [&](size_t begin, size_t end) {
        for (size_t q = begin; q < end; ++q) {
            const double qu = static_cast<double>(q % dst_w) + 0.5;
            const double qv = static_cast<double>(q / dst_w) + 0.5;
            for (size_t p = 0; p < n_src; ++p) {
                if (epipole[p] || lines[p].distance(qu, qv) <= tau) {
                    out.bits.set(static_cast<int>(q), static_cast<int>(p), true);
                }
            }
        }
    });
    return out;
}

EpipolarMaskSet mask_set_for_trajectory(const Trajectory& trajectory, int feature_h,
                                        int feature_w, double tau) {
    const int n = static_cast<int>(trajectory.size());
    if (n < 2) throw InvalidFrameCount("mask set needs at least 2 frames");
    EpipolarMaskSet set;
    set.n_frames = n;
    set.height = feature_h;
    set.width = feature_w;
    set.tau = tau;
    set.pairs.resize(static_cast<size_t>(n) * n);

    const size_t tokens = static_cast<size_t>(feature_h) * feature_w;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            PairMask& pm = set.pair(i, k);
            if (i == k) {
                pm.bits = BitMatrix(static_cast<int>(tokens), static_cast<int>(tokens), true);
                continue;
            }
            const Intrinsics k_i =
                trajectory.frames[i].intrinsics.rescaled(feature_w, feature_h);
            const Intrinsics k_k =
                trajectory.frames[k].intrinsics.rescaled(feature_w, feature_h);
            try {
                const EssentialMatrix e =
                    essential_from_poses(trajectory.frames[i].pose, trajectory.frames[k].pose);
                const FundamentalMatrix f = fundamental_from_essential(e, k_i, k_k);
                MaskBuildResult r = build_mask(f, feature_h, feature_w, feature_h, feature_w, tau);
                pm.bits = std::move(r.bits);
                pm.degenerate = r.degenerate;
            } catch (const DegenerateBaseline&) {
                pm.bits = BitMatrix(static_cast<int>(tokens), static_cast<int>(tokens), true);
                pm.degenerate = true;
            }
        }
    }
    return set;
}

}  // namespace scenecore
