// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/io_util.hpp"

#include <fstream>

#include "scenecore/error.hpp"

namespace scenecore {

void ByteReader::raw(void* out, size_t n) {
    if (!ok(n)) throw ParseError("unexpected end of file");
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
}

std::uint8_t ByteReader::u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
}
std::uint16_t ByteReader::u16() {
    std::uint16_t v;
    raw(&v, 2);
    return v;
}
std::uint32_t ByteReader::u32() {
    std::uint32_t v;
    raw(&v, 4);
    return v;
}
std::uint64_t ByteReader::u64() {
    std::uint64_t v;
    raw(&v, 8);
    return v;
}
float ByteReader::f32() {
    float v;
    raw(&v, 4);
    return v;
}
double ByteReader::f64() {
    double v;
    raw(&v, 8);
    return v;
}

void write_file_atomic(const std::filesystem::path& path, const std::vector<char>& bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path.string() + ": " + ec.message());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    write_file_atomic(path, std::vector<char>(text.begin(), text.end()));
}

std::vector<char> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    const std::streamsize size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<char> bytes(static_cast<size_t>(size));
    in.read(bytes.data(), size);
    if (!in) throw IoError("short read from " + path.string());
    return bytes;
}

}  // namespace scenecore
