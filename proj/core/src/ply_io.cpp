// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/ply_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scenecore/error.hpp"
#include "scenecore/io_util.hpp"

namespace scenecore {

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
    ByteWriter w;
    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n";
    header << "element vertex " << cloud.points.size() << "\n";
    header << "property float x\nproperty float y\nproperty float z\n";
    if (cloud.has_colors()) {
        header << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    }
    header << "end_header\n";
    w.text(header.str());
    for (size_t i = 0; i < cloud.points.size(); ++i) {
        for (int c = 0; c < 3; ++c) w.f32(static_cast<float>(cloud.points[i][c]));
        if (cloud.has_colors()) {
            for (int c = 0; c < 3; ++c) {
                w.u8(static_cast<std::uint8_t>(
                    std::lround(std::clamp(cloud.colors[i][c], 0.0, 1.0) * 255.0)));
            }
        }
    }
    write_file_atomic(path, w.bytes());
}

namespace {

struct PlyProperty {
    std::string type;
    std::string name;
};

double read_scalar(ByteReader& r, const std::string& t) {
    if (t == "float" || t == "float32") return r.f32();
    if (t == "double" || t == "float64") return r.f64();
    if (t == "uchar" || t == "uint8") return r.u8();
    if (t == "ushort" || t == "uint16") return r.u16();
    if (t == "uint" || t == "uint32") return r.u32();
    if (t == "char" || t == "int8") return static_cast<std::int8_t>(r.u8());
    if (t == "short" || t == "int16") return static_cast<std::int16_t>(r.u16());
    if (t == "int" || t == "int32") return static_cast<std::int32_t>(r.u32());
    throw ParseError("unsupported ply property type: " + t);
}

}  // namespace

PointCloud read_ply(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    // Header is ASCII lines up to end_header.
    size_t pos = 0;
    auto next_line = [&]() {
        std::string line;
        while (pos < bytes.size() && bytes[pos] != '\n') line.push_back(bytes[pos++]);
        if (pos < bytes.size()) ++pos;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };
    if (next_line() != "ply") throw ParseError("not a ply file: " + path.string());

    size_t vertex_count = 0;
    std::vector<PlyProperty> props;
    bool in_vertex = false;
    bool binary_le = false;
    for (;;) {
        if (pos >= bytes.size()) throw ParseError("ply header without end_header");
        const std::string line = next_line();
        std::istringstream ss(line);
        std::string word;
        ss >> word;
        if (word == "end_header") break;
        if (word == "format") {
            std::string fmt;
            ss >> fmt;
            binary_le = fmt == "binary_little_endian";
        } else if (word == "element") {
            std::string name;
            ss >> name >> vertex_count;
            in_vertex = name == "vertex";
            if (!in_vertex && !props.empty()) {
                throw ParseError("only leading vertex elements are supported");
            }
        } else if (word == "property" && in_vertex) {
            PlyProperty p;
            ss >> p.type >> p.name;
            if (p.type == "list") throw ParseError("list properties unsupported in vertex");
            props.push_back(p);
        }
    }
    if (!binary_le) throw ParseError("only binary_little_endian ply supported");

    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1;
    for (size_t i = 0; i < props.size(); ++i) {
        if (props[i].name == "x") ix = static_cast<int>(i);
        if (props[i].name == "y") iy = static_cast<int>(i);
        if (props[i].name == "z") iz = static_cast<int>(i);
        if (props[i].name == "red") ir = static_cast<int>(i);
        if (props[i].name == "green") ig = static_cast<int>(i);
        if (props[i].name == "blue") ib = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0) throw ParseError("ply lacks x/y/z vertex properties");
    const bool has_rgb = ir >= 0 && ig >= 0 && ib >= 0;

    PointCloud cloud;
    cloud.points.reserve(vertex_count);
    ByteReader r(bytes.data() + pos, bytes.size() - pos);
    std::vector<double> values(props.size());
    for (size_t v = 0; v < vertex_count; ++v) {
        for (size_t p = 0; p < props.size(); ++p) values[p] = read_scalar(r, props[p].type);
        cloud.points.emplace_back(values[ix], values[iy], values[iz]);
        if (has_rgb) {
            auto channel = [&](int idx) {
                const double raw = values[idx];
                return props[idx].type == "uchar" || props[idx].type == "uint8" ? raw / 255.0 : raw;
            };
            cloud.colors.emplace_back(channel(ir), channel(ig), channel(ib));
        }
    }
    return cloud;
}

}  // namespace scenecore
