// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Geometry>
#include <set>

#include "scenecore/camera.hpp"
#include "scenecore/error.hpp"
#include "test_util.hpp"

using namespace scenecore;
using testutil::make_intrinsics;

TEST_CASE("make_relative: shared pose collapses to identity") {
    Rng rng(11);
    Trajectory traj = testutil::random_trajectory(rng, 4, make_intrinsics(), 1.0);
    for (auto& f : traj.frames) f.pose = traj.frames[0].pose;
    const Trajectory rel = make_relative(traj);
    CHECK(rel.convention == TrajectoryConvention::first_frame_relative);
    for (const auto& f : rel.frames) {
        CHECK((f.pose.rotation - Eigen::Matrix3d::Identity()).norm() < 1e-12);
        CHECK(f.pose.translation.norm() < 1e-12);
    }
}

TEST_CASE("make_relative: pure translation case") {
    Trajectory traj;
    CameraFrame a, b;
    a.intrinsics = b.intrinsics = make_intrinsics();
    b.frame_index = 1;
    b.pose.translation = Eigen::Vector3d(1, 0, 0);
    traj.frames = {a, b};
    const Trajectory rel = make_relative(traj);
    CHECK((rel.frames[1].pose.translation - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("make_relative: round trip over random trajectories") {
    // Oracle: composing the relative poses back with the original first pose
    // must reproduce the input.
    Rng rng(17);
    for (int trial = 0; trial < 1000; ++trial) {
        Trajectory traj = testutil::random_trajectory(rng, 5, make_intrinsics(), 2.0);
        const Trajectory rel = make_relative(traj);
        for (size_t i = 0; i < traj.size(); ++i) {
            const Pose recomposed = traj.frames[0].pose.compose(rel.frames[i].pose);
            CHECK((recomposed.rotation - traj.frames[i].pose.rotation).cwiseAbs().maxCoeff() <
                  1e-9);
            CHECK((recomposed.translation - traj.frames[i].pose.translation).cwiseAbs().maxCoeff() <
                  1e-9);
            CHECK(rel.frames[i].pose.is_valid_rotation(1e-9));
        }
    }
}

TEST_CASE("make_relative: empty trajectory") {
    CHECK_THROWS_AS(make_relative(Trajectory{}), EmptyTrajectory);
}

TEST_CASE("pixel_ray: principal point looks down the optical axis") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    // Principal point on the center of pixel (31, 23).
    frame.intrinsics.cx = 31.5;
    frame.intrinsics.cy = 23.5;
    const Ray ray = pixel_ray(frame, 31, 23);
    CHECK((ray.direction - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
    CHECK(ray.origin.norm() == 0.0);
}

TEST_CASE("pixel_ray: K inverse applied by hand") {
    // Pixel at (cx + fx - 0.5, cy - 0.5): homogeneous direction (1, 0, 1).
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(256, 256, 100.0);
    frame.intrinsics.cx = 127.5;  // principal point on a pixel center
    frame.intrinsics.cy = 127.5;
    const int u = static_cast<int>(frame.intrinsics.cx + frame.intrinsics.fx - 0.5);
    const int v = static_cast<int>(frame.intrinsics.cy - 0.5);
    const Ray ray = pixel_ray(frame, u, v);
    const Eigen::Vector3d expected = Eigen::Vector3d(1, 0, 1).normalized();
    CHECK((ray.direction - expected).norm() < 1e-12);
}

TEST_CASE("pixel_ray: rotated pose turns the optical axis around") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    frame.intrinsics.cx = 31.5;
    frame.intrinsics.cy = 23.5;
    frame.pose.rotation = Eigen::AngleAxisd(M_PI, Eigen::Vector3d::UnitY()).toRotationMatrix();
    const Ray ray = pixel_ray(frame, 31, 23);
    CHECK((ray.direction - Eigen::Vector3d(0, 0, -1)).norm() < 1e-9);
}

TEST_CASE("pixel_ray: bounds") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(8, 8);
    CHECK_THROWS_AS(pixel_ray(frame, 8, 0), PixelOutOfBounds);
    CHECK_THROWS_AS(pixel_ray(frame, 0, -1), PixelOutOfBounds);
}

TEST_CASE("ray_embedding_map: identity pose zeroes the moments") {
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(16, 12);
    const RayEmbeddingMap map = ray_embedding_map(frame);
    CHECK(map.width == 16);
    CHECK(map.height == 12);
    for (int v = 0; v < map.height; ++v) {
        for (int u = 0; u < map.width; ++u) {
            CHECK(map.moment(v, u).norm() == 0.0);
            CHECK(std::abs(map.direction(v, u).norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("ray_embedding_map: translated camera moment by hand") {
    // Camera at (0,1,0) looking down +z: moment at the principal pixel is
    // (0,1,0) x (0,0,1) = (1,0,0).
    CameraFrame frame;
    frame.intrinsics = make_intrinsics(64, 48, 50.0);
    frame.intrinsics.cx = 31.5;
    frame.intrinsics.cy = 23.5;
    frame.pose.translation = Eigen::Vector3d(0, 1, 0);
    const RayEmbeddingMap map = ray_embedding_map(frame);
    CHECK((map.moment(23, 31) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("ray_embedding_map: Plucker identity on random frames") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        CameraFrame frame;
        frame.intrinsics = make_intrinsics(24, 18);
        frame.pose = testutil::random_pose(rng, 2.0);
        const RayEmbeddingMap map = ray_embedding_map(frame);
        for (int v = 0; v < map.height; ++v) {
            for (int u = 0; u < map.width; ++u) {
                CHECK(std::abs(map.moment(v, u).dot(map.direction(v, u))) < 1e-7);
                CHECK(std::abs(map.direction(v, u).norm() - 1.0) < 1e-7);
            }
        }
    }
}

TEST_CASE("generate_trajectory: zoom_in is a linear ramp along +z") {
    CameraFrame base;
    base.intrinsics = make_intrinsics();
    const Trajectory traj = generate_trajectory(TrajectoryKind::zoom_in, 3, 1.0, base);
    CHECK(traj.convention == TrajectoryConvention::first_frame_relative);
    CHECK(traj.frames[0].pose.translation.norm() == 0.0);
    CHECK((traj.frames[1].pose.translation - Eigen::Vector3d(0, 0, 0.5)).norm() < 1e-12);
    CHECK((traj.frames[2].pose.translation - Eigen::Vector3d(0, 0, 1.0)).norm() < 1e-12);
}

TEST_CASE("generate_trajectory: orbit keeps the pivot distance") {
    CameraFrame base;
    base.intrinsics = make_intrinsics();
    const double radius = 2.5;
    const Trajectory traj = generate_trajectory(TrajectoryKind::orbit, 5, radius, base);
    const Eigen::Vector3d pivot(0, 0, radius);
    for (const auto& f : traj.frames) {
        CHECK(std::abs((f.pose.translation - pivot).norm() - radius) < 1e-9);
        CHECK(f.pose.is_valid_rotation(1e-9));
    }
}

TEST_CASE("generate_trajectory: pan endpoint displacement") {
    CameraFrame base;
    base.intrinsics = make_intrinsics();
    const Trajectory traj = generate_trajectory(TrajectoryKind::pan_left, 7, 0.75, base);
    CHECK(std::abs(traj.frames.back().pose.translation.norm() - 0.75) < 1e-9);
    CHECK(traj.frames.back().pose.translation.x() < 0.0);
}

TEST_CASE("generate_trajectory: frame count validation") {
    CameraFrame base;
    base.intrinsics = make_intrinsics();
    CHECK_THROWS_AS(generate_trajectory(TrajectoryKind::zoom_in, 1, 1.0, base),
                    InvalidFrameCount);
}

TEST_CASE("interpolate_poses: degenerate interpolation") {
    Rng rng(31);
    const Pose pose = testutil::random_pose(rng);
    const Trajectory traj = interpolate_poses(pose, pose, 4, make_intrinsics());
    for (const auto& f : traj.frames) {
        CHECK((f.pose.rotation - pose.rotation).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((f.pose.translation - pose.translation).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("interpolate_poses: slerp midpoint of a 90 degree turn") {
    Pose start;
    Pose end;
    end.rotation = Eigen::AngleAxisd(M_PI / 2, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    const Trajectory traj = interpolate_poses(start, end, 3, make_intrinsics());
    const Eigen::Matrix3d expected =
        Eigen::AngleAxisd(M_PI / 4, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    CHECK((traj.frames[1].pose.rotation - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("interpolate_poses: linear translations and exact endpoints") {
    Pose start;
    Pose end;
    end.translation = Eigen::Vector3d(2, 0, 0);
    const Trajectory traj = interpolate_poses(start, end, 5, make_intrinsics());
    for (int i = 0; i < 5; ++i) {
        CHECK(std::abs(traj.frames[i].pose.translation.x() - 0.5 * i) < 1e-15);
    }
    CHECK((traj.frames.front().pose.translation - start.translation).norm() == 0.0);
    CHECK((traj.frames.back().pose.translation - end.translation).norm() == 0.0);
}

TEST_CASE("interpolate_poses: constant angular velocity") {
    Rng rng(37);
    const Pose start = testutil::random_pose(rng);
    Pose end = testutil::random_pose(rng);
    const int n = 9;
    const Trajectory traj = interpolate_poses(start, end, n, make_intrinsics());
    std::vector<double> steps;
    for (int i = 0; i + 1 < n; ++i) {
        const Eigen::Matrix3d rel =
            traj.frames[i].pose.rotation.transpose() * traj.frames[i + 1].pose.rotation;
        steps.push_back(Eigen::AngleAxisd(rel).angle());
    }
    for (const double s : steps) CHECK(std::abs(s - steps[0]) < 1e-6);
}

TEST_CASE("interpolate_poses: ambiguous half-turn") {
    Pose start;
    Pose end;
    end.rotation = Eigen::AngleAxisd(M_PI, Eigen::Vector3d::UnitX()).toRotationMatrix();
    CHECK_THROWS_AS(interpolate_poses(start, end, 3, make_intrinsics()), AmbiguousGeodesic);
}

TEST_CASE("sample_interval: linear ramp endpoints and midpoint") {
    IntervalSchedule schedule{2, 10, IntervalMode::linear, 9};
    CHECK(sample_interval(schedule, 0, 0) == 2);
    CHECK(sample_interval(schedule, 8, 0) == 10);
    CHECK(sample_interval(schedule, 4, 0) == 6);
    CHECK_THROWS_AS(sample_interval(schedule, 9, 0), StepOutOfRange);
}

TEST_CASE("sample_interval: seeded random draws are in range and stable") {
    IntervalSchedule schedule{2, 10, IntervalMode::random, 100};
    std::set<int> seen;
    for (int step = 0; step < 50; ++step) {
        const int a = sample_interval(schedule, step, 777);
        const int b = sample_interval(schedule, step, 777);
        CHECK(a == b);
        CHECK(a >= 2);
        CHECK(a <= 10);
        seen.insert(a);
    }
    CHECK(seen.size() > 3);  // actually random across steps
}
