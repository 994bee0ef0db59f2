// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/epim_io.hpp"

#include <cmath>

#include "scenecore/error.hpp"
#include "scenecore/io_util.hpp"

namespace scenecore {

namespace {
constexpr char kMagic[4] = {'E', 'P', 'I', 'M'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_epim(const std::filesystem::path& path, const EpipolarMaskSet& set) {
    ByteWriter w;
    w.raw(kMagic, 4);
    w.u32(kVersion);
    w.u32(static_cast<std::uint32_t>(set.height));
    w.u32(static_cast<std::uint32_t>(set.width));
    w.u32(static_cast<std::uint32_t>(set.pairs.size()));
    w.f64(set.tau);
    const int tokens = set.height * set.width;
    const size_t row_bytes = (static_cast<size_t>(tokens) + 7) / 8;
    for (const PairMask& pm : set.pairs) {
        w.u8(pm.degenerate ? 1 : 0);
        for (int r = 0; r < tokens; ++r) {
            std::uint8_t packed = 0;
            int bit = 0;
            size_t emitted = 0;
            for (int c = 0; c < tokens; ++c) {
                if (pm.bits.get(r, c)) packed |= static_cast<std::uint8_t>(1u << bit);
                if (++bit == 8) {
                    w.u8(packed);
                    ++emitted;
                    packed = 0;
                    bit = 0;
                }
            }
            if (bit != 0) {
                w.u8(packed);
                ++emitted;
            }
            // Row padding is implicit in ceil(tokens/8).
            (void)row_bytes;
            (void)emitted;
        }
    }
    write_file_atomic(path, w.bytes());
}

EpipolarMaskSet read_epim(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    char magic[4];
    r.raw(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw ParseError("not an EPIM file: " + path.string());
    const std::uint32_t version = r.u32();
    if (version != kVersion) throw ParseError("unsupported EPIM version");
    EpipolarMaskSet set;
    set.height = static_cast<int>(r.u32());
    set.width = static_cast<int>(r.u32());
    const std::uint32_t n_pairs = r.u32();
    set.tau = r.f64();
    const int frames = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n_pairs))));
    if (static_cast<std::uint32_t>(frames) * frames != n_pairs) {
        throw ParseError("EPIM pair count is not a perfect square");
    }
    set.n_frames = frames;
    const int tokens = set.height * set.width;
    set.pairs.resize(n_pairs);
    for (auto& pm : set.pairs) {
        pm.degenerate = r.u8() != 0;
        pm.bits = BitMatrix(tokens, tokens, false);
        for (int row = 0; row < tokens; ++row) {
            int bit = 0;
            std::uint8_t packed = 0;
            for (int c = 0; c < tokens; ++c) {
                if (bit == 0) packed = r.u8();
                if (packed & (1u << bit)) pm.bits.set(row, c, true);
                bit = (bit + 1) % 8;
            }
        }
    }
    return set;
}

}  // namespace scenecore
