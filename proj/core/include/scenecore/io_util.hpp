// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace scenecore {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

/// Byte buffer with append helpers for the binary file formats.
class ByteWriter {
public:
    void raw(const void* data, size_t n) {
        const auto* p = static_cast<const char*>(data);
        bytes_.insert(bytes_.end(), p, p + n);
    }
    void u8(std::uint8_t v) { raw(&v, 1); }
    void u16(std::uint16_t v) { raw(&v, 2); }
    void u32(std::uint32_t v) { raw(&v, 4); }
    void u64(std::uint64_t v) { raw(&v, 8); }
    void f32(float v) { raw(&v, 4); }
    void f64(double v) { raw(&v, 8); }
    void text(const std::string& s) { raw(s.data(), s.size()); }

    const std::vector<char>& bytes() const { return bytes_; }

private:
    std::vector<char> bytes_;
};

class ByteReader {
public:
    ByteReader(const char* data, size_t size) : data_(data), size_(size) {}

    bool ok(size_t n) const { return pos_ + n <= size_; }
    void raw(void* out, size_t n);
    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    float f32();
    double f64();
    size_t position() const { return pos_; }
    size_t remaining() const { return size_ - pos_; }

private:
    const char* data_;
    size_t size_;
    size_t pos_ = 0;
};

/// Writes to <path>.tmp then renames, so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::vector<char>& bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

std::vector<char> read_file(const std::filesystem::path& path);

}  // namespace scenecore
