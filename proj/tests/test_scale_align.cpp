// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <numeric>

#include "scenecore/error.hpp"
#include "scenecore/scale_align.hpp"
#include "test_util.hpp"

using namespace scenecore;
using testutil::make_intrinsics;

namespace {

// Renders the cloud's own camera-space depths (times `depth_scale`) into a
// depth map; the oracle construction for estimate_scale.
MetricDepthMap depth_from_cloud(const PointCloud& cloud, const CameraFrame& frame,
                                double depth_scale) {
    MetricDepthMap depth(frame.intrinsics.width, frame.intrinsics.height);
    for (const auto& p : cloud.points) {
        const Eigen::Vector3d cam = frame.pose.to_camera(p);
        if (cam.z() <= 0.0) continue;
        const int u = static_cast<int>(std::floor(frame.intrinsics.fx * cam.x() / cam.z() +
                                                  frame.intrinsics.cx));
        const int v = static_cast<int>(std::floor(frame.intrinsics.fy * cam.y() / cam.z() +
                                                  frame.intrinsics.cy));
        if (u < 0 || v < 0 || u >= depth.width || v >= depth.height) continue;
        depth.set(v, u, depth_scale * cam.z());
    }
    return depth;
}

PointCloud random_visible_cloud(Rng& rng, const CameraFrame& frame, int n) {
    // One point per distinct pixel so the rendered depth map is unambiguous.
    PointCloud cloud;
    const Intrinsics& k = frame.intrinsics;
    std::vector<int> pixels(static_cast<size_t>(k.width) * k.height);
    std::iota(pixels.begin(), pixels.end(), 0);
    for (size_t i = pixels.size(); i > 1; --i) {
        std::swap(pixels[i - 1], pixels[rng.uniform_int(0, static_cast<std::int64_t>(i) - 1)]);
    }
    for (int i = 0; i < n; ++i) {
        const double u = pixels[i] % k.width + 0.5;
        const double v = pixels[i] / k.width + 0.5;
        const double z = rng.uniform(2.0, 10.0);
        const Eigen::Vector3d cam(z * (u - k.cx) / k.fx, z * (v - k.cy) / k.fy, z);
        cloud.points.push_back(frame.pose.apply(cam));
    }
    return cloud;
}

}  // namespace

TEST_CASE("estimate_scale: recovers a synthetic scale exactly") {
    Rng rng(3);
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    frame.pose = testutil::random_pose(rng, 0.5);
    const PointCloud cloud = random_visible_cloud(rng, frame, 200);

    for (const double truth : {1.0, 2.5}) {
        const MetricDepthMap depth = depth_from_cloud(cloud, frame, truth);
        const ScaleFactor s = estimate_scale(cloud, frame, depth);
        CHECK(std::abs(s.s - truth) < 1e-9);
        CHECK(s.inlier_ratio == 1.0);
    }
}

TEST_CASE("estimate_scale: median shrugs off 20% x10 outliers") {
    Rng rng(5);
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    const PointCloud cloud = random_visible_cloud(rng, frame, 200);
    MetricDepthMap depth = depth_from_cloud(cloud, frame, 3.0);
    int corrupted = 0;
    for (int v = 0; v < depth.height && corrupted < 40; ++v) {
        for (int u = 0; u < depth.width && corrupted < 40; ++u) {
            if (depth.is_valid(v, u)) {
                depth.at(v, u) *= 10.0;
                ++corrupted;
            }
        }
    }
    const ScaleFactor s = estimate_scale(cloud, frame, depth);
    CHECK(std::abs(s.s - 3.0) < 0.03);
    CHECK(s.inlier_count > 0);
}

TEST_CASE("estimate_scale: scale equivariance") {
    Rng rng(7);
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    const PointCloud cloud = random_visible_cloud(rng, frame, 150);
    const MetricDepthMap depth = depth_from_cloud(cloud, frame, 1.7);
    const ScaleFactor base = estimate_scale(cloud, frame, depth);

    const double k = 4.0;
    PointCloud scaled = cloud;
    for (auto& p : scaled.points) p *= k;
    CameraFrame scaled_frame = frame;
    scaled_frame.pose.translation *= k;
    const ScaleFactor after = estimate_scale(scaled, scaled_frame, depth);
    CHECK(std::abs(after.s - base.s / k) < 1e-9);
}

TEST_CASE("estimate_scale: insufficient overlap") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(16, 16, 14.0);
    PointCloud cloud;
    cloud.points = {{0, 0, 5}, {0.1, 0, 5}, {0, 0.1, 5}};
    MetricDepthMap depth(16, 16, 5.0, true);
    CHECK_THROWS_AS(estimate_scale(cloud, frame, depth), InsufficientOverlap);
}

TEST_CASE("apply_scale: identity, linearity, and commutation with make_relative") {
    Rng rng(9);
    Trajectory traj = testutil::random_trajectory(rng, 5, make_intrinsics(), 1.5);

    const Trajectory same = apply_scale(traj, ScaleFactor{1.0, 0, 0.0});
    for (size_t i = 0; i < traj.size(); ++i) {
        CHECK((same.frames[i].pose.translation - traj.frames[i].pose.translation).norm() == 0.0);
    }

    Trajectory one;
    CameraFrame f;
    f.intrinsics = make_intrinsics();
    f.pose.translation = Eigen::Vector3d(1, 2, 3);
    one.frames = {f};
    const Trajectory doubled = apply_scale(one, ScaleFactor{2.0, 0, 0.0});
    CHECK((doubled.frames[0].pose.translation - Eigen::Vector3d(2, 4, 6)).norm() < 1e-15);

    const ScaleFactor s{3.25, 0, 0.0};
    const Trajectory a = make_relative(apply_scale(traj, s));
    const Trajectory b = apply_scale(make_relative(traj), s);
    for (size_t i = 0; i < traj.size(); ++i) {
        CHECK((a.frames[i].pose.translation - b.frames[i].pose.translation).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK((a.frames[i].pose.rotation - b.frames[i].pose.rotation).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("unproject_depth: optical axis point") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    frame.intrinsics.cx = 31.5;
    frame.intrinsics.cy = 23.5;
    MetricDepthMap depth(64, 48);
    depth.set(23, 31, 1.0);
    const PointCloud cloud = unproject_depth(frame, depth);
    REQUIRE(cloud.size() == 1);
    CHECK((cloud.points[0] - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("unproject_depth: projection round trip") {
    Rng rng(13);
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(32, 24, 28.0);
    frame.pose = testutil::random_pose(rng, 1.0);
    MetricDepthMap depth(32, 24);
    for (int v = 0; v < 24; ++v)
        for (int u = 0; u < 32; ++u) depth.set(v, u, rng.uniform(0.5, 6.0));

    const PointCloud cloud = unproject_depth(frame, depth);
    REQUIRE(cloud.size() == 32u * 24u);
    size_t i = 0;
    for (int v = 0; v < 24; ++v) {
        for (int u = 0; u < 32; ++u, ++i) {
            const Eigen::Vector3d cam = frame.pose.to_camera(cloud.points[i]);
            CHECK(std::abs(cam.z() - depth.at(v, u)) < 1e-9);
            const double pu = frame.intrinsics.fx * cam.x() / cam.z() + frame.intrinsics.cx;
            const double pv = frame.intrinsics.fy * cam.y() / cam.z() + frame.intrinsics.cy;
            CHECK(std::abs(pu - (u + 0.5)) < 1e-6);
            CHECK(std::abs(pv - (v + 0.5)) < 1e-6);
        }
    }
}

TEST_CASE("unproject_depth: empty mask and shape mismatch") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(8, 8);
    MetricDepthMap all_invalid(8, 8);
    CHECK(unproject_depth(frame, all_invalid).size() == 0);
    MetricDepthMap wrong(9, 8);
    CHECK_THROWS_AS(unproject_depth(frame, wrong), ShapeMismatch);
}

TEST_CASE("unproject_depth: colors carried through") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(4, 4, 3.0);
    MetricDepthMap depth(4, 4, 2.0, true);
    Image img(4, 4);
    img.at(1, 2, 0) = 0.25;
    img.at(1, 2, 1) = 0.5;
    img.at(1, 2, 2) = 0.75;
    const PointCloud cloud = unproject_depth(frame, depth, &img);
    REQUIRE(cloud.colors.size() == 16);
    CHECK((cloud.colors[1 * 4 + 2] - Eigen::Vector3d(0.25, 0.5, 0.75)).norm() < 1e-12);
}
