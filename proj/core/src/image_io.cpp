// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "scenecore/error.hpp"
#include "scenecore/io_util.hpp"

namespace scenecore {

namespace {

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Reads one whitespace-delimited token, skipping '#' comments.
std::string next_token(ByteReader& r) {
    std::string token;
    while (r.remaining() > 0) {
        char c;
        r.raw(&c, 1);
        if (c == '#') {
            while (r.remaining() > 0) {
                r.raw(&c, 1);
                if (c == '\n') break;
            }
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(c);
    }
    if (token.empty()) throw ParseError("truncated netpbm header");
    return token;
}

}  // namespace

void write_ppm(const std::filesystem::path& path, const Image& image) {
    ByteWriter w;
    w.text("P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n");
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c) w.u8(to_byte(image.at(y, x, c)));
    write_file_atomic(path, w.bytes());
}

Image read_ppm(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    if (next_token(r) != "P6") throw ParseError("not a P6 ppm: " + path.string());
    const int width = std::stoi(next_token(r));
    const int height = std::stoi(next_token(r));
    const int maxval = std::stoi(next_token(r));
    if (maxval != 255) throw ParseError("only maxval 255 ppm supported");
    Image image(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            for (int c = 0; c < 3; ++c) image.at(y, x, c) = r.u8() / 255.0;
    return image;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& image) {
    ByteWriter w;
    w.text("P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n");
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) w.u8(to_byte(image.at(y, x)));
    write_file_atomic(path, w.bytes());
}

GrayImage read_pgm(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    if (next_token(r) != "P5") throw ParseError("not a P5 pgm: " + path.string());
    const int width = std::stoi(next_token(r));
    const int height = std::stoi(next_token(r));
    const int maxval = std::stoi(next_token(r));
    GrayImage image(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v;
            if (maxval > 255) {
                const int hi = r.u8();
                const int lo = r.u8();
                v = hi * 256 + lo;
            } else {
                v = r.u8();
            }
            image.at(y, x) = v / maxval;
        }
    }
    return image;
}

void write_pfm(const std::filesystem::path& path, const GrayImage& image) {
    ByteWriter w;
    // Negative scale marks little-endian data; rows run bottom-to-top.
    w.text("Pf\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n-1.0\n");
    for (int y = image.height - 1; y >= 0; --y)
        for (int x = 0; x < image.width; ++x) w.f32(static_cast<float>(image.at(y, x)));
    write_file_atomic(path, w.bytes());
}

GrayImage read_pfm(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    const std::string magic = next_token(r);
    if (magic != "Pf") throw ParseError("only single-channel Pf supported: " + path.string());
    const int width = std::stoi(next_token(r));
    const int height = std::stoi(next_token(r));
    const double scale = std::stod(next_token(r));
    const bool little = scale < 0.0;
    GrayImage image(width, height);
    for (int y = height - 1; y >= 0; --y) {
        for (int x = 0; x < width; ++x) {
            std::uint32_t raw = r.u32();
            if (!little) raw = __builtin_bswap32(raw);
            float v;
            std::memcpy(&v, &raw, 4);
            image.at(y, x) = v;
        }
    }
    return image;
}

void write_png(const std::filesystem::path& path, const Image& image) {
    // libpng wants a FILE*; write to the temp path then rename for atomicity.
    const std::filesystem::path tmp = path.string() + ".tmp";
    FILE* fp = std::fopen(tmp.string().c_str(), "wb");
    if (!fp) throw IoError("cannot open " + tmp.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("png encode failed for " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(static_cast<size_t>(image.width) * 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x)
            for (int c = 0; c < 3; ++c) row[x * 3 + c] = to_byte(image.at(y, x, c));
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path.string() + ": " + ec.message());
}

MetricDepthMap read_depth(const std::filesystem::path& path, double pgm_scale) {
    const std::string ext = path.extension().string();
    GrayImage gray;
    double scale = 1.0;
    if (ext == ".pfm") {
        gray = read_pfm(path);
    } else if (ext == ".pgm") {
        const std::vector<char> bytes = read_file(path);
        ByteReader r(bytes.data(), bytes.size());
        if (next_token(r) != "P5") throw ParseError("not a P5 pgm: " + path.string());
        const int width = std::stoi(next_token(r));
        const int height = std::stoi(next_token(r));
        const int maxval = std::stoi(next_token(r));
        gray = GrayImage(width, height);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                if (maxval > 255) {
                    const int hi = r.u8();
                    const int lo = r.u8();
                    gray.at(y, x) = hi * 256 + lo;
                } else {
                    gray.at(y, x) = r.u8();
                }
            }
        }
        scale = pgm_scale;
    } else {
        throw ParseError("unsupported depth format: " + path.string());
    }
    MetricDepthMap depth(gray.width, gray.height);
    for (int y = 0; y < gray.height; ++y) {
        for (int x = 0; x < gray.width; ++x) {
            const double v = gray.at(y, x) * scale;
            if (std::isfinite(v) && v > 0.0) depth.set(y, x, v);
        }
    }
    return depth;
}

void write_depth_pfm(const std::filesystem::path& path, const MetricDepthMap& depth) {
    GrayImage gray(depth.width, depth.height);
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x)
            gray.at(y, x) = depth.is_valid(y, x) ? depth.at(y, x) : 0.0;
    write_pfm(path, gray);
}

void write_image_auto(const std::filesystem::path& path, const Image& image) {
    if (path.extension() == ".png") {
        write_png(path, image);
    } else {
        write_ppm(path, image);
    }
}

}  // namespace scenecore
