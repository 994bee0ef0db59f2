// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/gspc_io.hpp"

#include "scenecore/error.hpp"
#include "scenecore/io_util.hpp"
#include "scenecore/ply_io.hpp"

namespace scenecore {

namespace {
constexpr char kMagic[4] = {'G', 'S', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_gspc(const std::filesystem::path& path, const GaussianCloud& cloud) {
    ByteWriter w;
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(cloud.size()));
    for (const Gaussian3D& g : cloud.gaussians) {
        for (int c = 0; c < 3; ++c) w.f32(static_cast<float>(g.mean[c]));
        for (int c = 0; c < 3; ++c) w.f32(static_cast<float>(g.scales[c]));
        w.f32(static_cast<float>(g.rotation.w()));
        w.f32(static_cast<float>(g.rotation.x()));
        w.f32(static_cast<float>(g.rotation.y()));
        w.f32(static_cast<float>(g.rotation.z()));
        w.f32(static_cast<float>(g.opacity));
        for (int c = 0; c < 3; ++c) w.f32(static_cast<float>(g.color[c]));
    }
    write_file_atomic(path, w.bytes());
}

GaussianCloud read_gspc(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw ParseError("not a GSPC file: " + path.string());
    if (r.u32() != kVersion) throw ParseError("unsupported GSPC version");
    const std::uint32_t count = r.u32();
    GaussianCloud cloud;
    cloud.gaussians.resize(count);
    cloud.provenance.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Gaussian3D& g = cloud.gaussians[i];
        for (int c = 0; c < 3; ++c) g.mean[c] = r.f32();
        for (int c = 0; c < 3; ++c) g.scales[c] = r.f32();
        const float qw = r.f32(), qx = r.f32(), qy = r.f32(), qz = r.f32();
        g.rotation = Eigen::Quaterniond(qw, qx, qy, qz);
        g.opacity = r.f32();
        for (int c = 0; c < 3; ++c) g.color[c] = r.f32();
        cloud.provenance[i] = Provenance{0, static_cast<int>(i)};
    }
    return cloud;
}

void export_cloud_ply(const std::filesystem::path& path, const GaussianCloud& cloud) {
    PointCloud points;
    points.points.reserve(cloud.size());
    points.colors.reserve(cloud.size());
    for (const Gaussian3D& g : cloud.gaussians) {
        points.points.push_back(g.mean);
        points.colors.push_back(g.color);
    }
    write_ply(path, points);
}

}  // namespace scenecore
