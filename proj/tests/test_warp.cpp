// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "scenecore/epipolar.hpp"
#include "scenecore/error.hpp"
#include "scenecore/warp.hpp"
#include "test_util.hpp"

using namespace scenecore;
using testutil::make_intrinsics;

namespace {

Image checker_image(int w, int h) {
    Image img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(y, x, c) = ((x / 4 + y / 4) % 2 == 0) ? 0.2 + 0.1 * c : 0.8 - 0.2 * c;
    return img;
}

}  // namespace

TEST_CASE("warp_frame: identity warp is lossless with radius 0") {
    Rng rng(3);
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(32, 24, 28.0);
    frame.pose = testutil::random_pose(rng, 1.0);
    const Image img = checker_image(32, 24);
    MetricDepthMap depth(32, 24);
    for (int v = 0; v < 24; ++v)
        for (int u = 0; u < 32; ++u)
            if ((u + v) % 5 != 0) depth.set(v, u, rng.uniform(1.0, 4.0));

    WarpOptions options;
    options.splat_radius = 0.0;
    const WarpResult out = warp_frame(frame, img, depth, frame, options);
    for (int v = 0; v < 24; ++v) {
        for (int u = 0; u < 32; ++u) {
            CHECK(out.is_valid(v, u) == depth.is_valid(v, u));
            if (out.is_valid(v, u)) {
                for (int c = 0; c < 3; ++c) CHECK(out.image.at(v, u, c) == img.at(v, u, c));
            } else {
                CHECK(out.image.at(v, u, 0) == 0.5);
            }
        }
    }
}

TEST_CASE("warp_frame: z-buffer keeps the nearer point") {
    // Two source pixels land on the same destination pixel with depths 1 and 2.
    CameraFrame src;
    src.intrinsics = make_intrinsics(2, 1, 1.0);
    src.intrinsics.cx = 1.0;
    src.intrinsics.cy = 0.5;
    Image img(2, 1);
    img.at(0, 0, 0) = 1.0;  // red at depth 1
    img.at(0, 1, 2) = 1.0;  // blue at depth 2
    MetricDepthMap depth(2, 1);
    depth.set(0, 0, 1.0);
    depth.set(0, 1, 2.0);

    // Destination camera which maps both points to its single pixel.
    CameraFrame dst;
    dst.intrinsics.fx = dst.intrinsics.fy = 0.05;
    dst.intrinsics.cx = dst.intrinsics.cy = 0.5;
    dst.intrinsics.width = dst.intrinsics.height = 1;

    WarpOptions options;
    options.splat_radius = 0.0;
    const WarpResult out = warp_frame(src, img, depth, dst, options);
    REQUIRE(out.is_valid(0, 0));
    CHECK(out.image.at(0, 0, 0) == 1.0);
    CHECK(out.image.at(0, 0, 2) == 0.0);
    CHECK(out.depth_buffer[0] == 1.0);
}

TEST_CASE("warp_frame: zoom out shrinks a fronto-parallel plane") {
    CameraFrame src;
    src.intrinsics = make_intrinsics(32, 32, 32.0);
    const Image img = checker_image(32, 32);
    MetricDepthMap depth(32, 32, 1.0, true);  // plane at z = 1

    CameraFrame dst = src;
    dst.pose.translation = Eigen::Vector3d(0, 0, -1.0);  // move back

    WarpOptions options;
    options.splat_radius = 0.0;
    const WarpResult out = warp_frame(src, img, depth, dst, options);

    // The plane-homography oracle: content halves in size, so the valid
    // region must stay strictly inside the destination and cover roughly a
    // quarter of the pixels.
    int valid = 0;
    for (int v = 0; v < 32; ++v) {
        for (int u = 0; u < 32; ++u) {
            if (out.is_valid(v, u)) {
                ++valid;
                CHECK(u >= 7);
                CHECK(u <= 24);
                CHECK(v >= 7);
                CHECK(v <= 24);
            }
        }
    }
    CHECK(valid > 0);
    CHECK(valid <= 18 * 18);
}

TEST_CASE("warp_sequence: count, order, and identity head") {
    Rng rng(11);
    CameraFrame src;
    src.intrinsics = make_intrinsics(16, 16, 14.0);
    const Image img = checker_image(16, 16);
    MetricDepthMap depth(16, 16, 2.0, true);

    Trajectory traj;
    traj.frames.push_back(src);
    for (int i = 1; i < 4; ++i) {
        CameraFrame f = src;
        f.frame_index = i;
        f.pose.translation = Eigen::Vector3d(0.05 * i, 0, 0);
        traj.frames.push_back(f);
    }
    WarpOptions options;
    options.splat_radius = 0.0;
    const auto results = warp_sequence(src, img, depth, traj, options);
    REQUIRE(results.size() == 4);
    for (int v = 0; v < 16; ++v)
        for (int u = 0; u < 16; ++u) CHECK(results[0].is_valid(v, u));

    CHECK_THROWS_AS(warp_sequence(src, img, depth, Trajectory{}, options), EmptyTrajectory);
}

TEST_CASE("warp_sequence: mean depth decreases while zooming into a plane") {
    CameraFrame src;
    src.intrinsics = make_intrinsics(24, 24, 24.0);
    const Image img = checker_image(24, 24);
    MetricDepthMap depth(24, 24, 4.0, true);

    Trajectory traj = generate_trajectory(TrajectoryKind::zoom_in, 5, 2.0, src);
    const auto results = warp_sequence(src, img, depth, traj, WarpOptions{});
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
        double sum = 0.0;
        int n = 0;
        for (size_t i = 0; i < r.depth_buffer.size(); ++i) {
            if (std::isfinite(r.depth_buffer[i])) {
                sum += r.depth_buffer[i];
                ++n;
            }
        }
        REQUIRE(n > 0);
        const double mean = sum / n;
        CHECK(mean <= prev + 1e-9);
        prev = mean;
    }
}

TEST_CASE("warp/epipolar consistency: projections land on epipolar lines") {
    Rng rng(17);
    const Intrinsics k = make_intrinsics(24, 24, 22.0);
    for (int trial = 0; trial < 10; ++trial) {
        const auto scene = testutil::random_two_view_scene(rng, 1, k);
        const FundamentalMatrix f = fundamental_from_essential(
            essential_from_poses(scene.view_a.pose, scene.view_b.pose), k, k);

        MetricDepthMap depth(24, 24);
        for (int v = 0; v < 24; ++v)
            for (int u = 0; u < 24; ++u) depth.set(v, u, rng.uniform(2.0, 6.0));

        const Eigen::Matrix3d k_inv = k.inverse_matrix();
        for (int v = 0; v < 24; ++v) {
            for (int u = 0; u < 24; ++u) {
                const Eigen::Vector3d world = scene.view_a.pose.apply(
                    depth.at(v, u) * (k_inv * Eigen::Vector3d(u + 0.5, v + 0.5, 1.0)));
                if (!testutil::in_front(scene.view_b, world)) continue;
                const Eigen::Vector2d q = testutil::project(scene.view_b, world);
                const EpipolarLine line = epipolar_line(f, u + 0.5, v + 0.5);
                CHECK(line.distance(q.x(), q.y()) < 1e-4);
            }
        }
    }
}

TEST_CASE("warp_frame: shape mismatch") {
    CameraFrame src;
    src.intrinsics = make_intrinsics(8, 8);
    Image img(8, 8);
    MetricDepthMap wrong(7, 8, 1.0, true);
    CHECK_THROWS_AS(warp_frame(src, img, wrong, src, WarpOptions{}), ShapeMismatch);
}
