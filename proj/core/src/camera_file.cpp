// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/camera_file.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "scenecore/error.hpp"
#include "scenecore/io_util.hpp"

namespace scenecore {

CameraFileResult parse_camera_file(const std::filesystem::path& path, int width, int height) {
    const std::vector<char> bytes = read_file(path);
    std::istringstream in(std::string(bytes.begin(), bytes.end()));

    CameraFileResult result;
    result.trajectory.convention = TrajectoryConvention::world;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty camera file: " + path.string());
    result.url = line;

    int line_number = 1;
    double prev_timestamp = -std::numeric_limits<double>::infinity();
    int frame_index = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ls(line);
        double values[19];
        for (int i = 0; i < 19; ++i) {
            if (!(ls >> values[i])) {
                throw ParseError("camera file line " + std::to_string(line_number) +
                                 ": expected 19 numbers");
            }
        }
        double trailing;
        if (ls >> trailing) {
            throw ParseError("camera file line " + std::to_string(line_number) +
                             ": trailing values");
        }
        if (values[0] < prev_timestamp) result.monotone_timestamps = false;
        prev_timestamp = values[0];

        CameraFrame frame;
        frame.frame_index = frame_index++;
        frame.intrinsics.fx = values[1] * width;
        frame.intrinsics.fy = values[2] * height;
        frame.intrinsics.cx = values[3] * width;
        frame.intrinsics.cy = values[4] * height;
        frame.intrinsics.width = width;
        frame.intrinsics.height = height;
        // values[5], values[6] are reserved zeros in the distribution format.

        Eigen::Matrix3d r_cw;
        Eigen::Vector3d t_cw;
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) r_cw(row, col) = values[7 + row * 4 + col];
            t_cw[row] = values[7 + row * 4 + 3];
        }
        // Camera-from-world on disk; store world-from-camera.
        frame.pose.rotation = r_cw.transpose();
        frame.pose.translation = -(r_cw.transpose() * t_cw);
        result.trajectory.frames.push_back(frame);
    }
    if (result.trajectory.empty()) throw ParseError("camera file has no frames");
    return result;
}

void write_camera_file(const std::filesystem::path& path, const Trajectory& trajectory,
                       const std::string& url) {
    std::ostringstream out;
    out << url << "\n";
    char buf[64];
    for (const auto& frame : trajectory.frames) {
        const Intrinsics& k = frame.intrinsics;
        out << frame.frame_index;
        const double norm[4] = {k.fx / k.width, k.fy / k.height, k.cx / k.width, k.cy / k.height};
        for (const double v : norm) {
            std::snprintf(buf, sizeof buf, " %.17g", v);
            out << buf;
        }
        out << " 0 0";
        const Eigen::Matrix3d r_cw = frame.pose.rotation.transpose();
        const Eigen::Vector3d t_cw = -(r_cw * frame.pose.translation);
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) {
                std::snprintf(buf, sizeof buf, " %.17g", r_cw(row, col));
                out << buf;
            }
            std::snprintf(buf, sizeof buf, " %.17g", t_cw[row]);
            out << buf;
        }
        out << "\n";
    }
    write_file_atomic(path, out.str());
}

}  // namespace scenecore
