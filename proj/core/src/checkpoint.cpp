// Copyright 2026 The Scenecore Authors
// SPDX-License-Identifier: Apache-2.0

#include "scenecore/checkpoint.hpp"

#include <numeric>

#include "scenecore/error.hpp"
#include "scenecore/io_util.hpp"

namespace scenecore {

const NamedTensor* Checkpoint::find(const std::string& name) const {
    for (const auto& t : tensors) {
        if (t.name == name) return &t;
    }
    return nullptr;
}

void Checkpoint::add(const std::string& name, const std::vector<std::uint32_t>& dims,
                     const std::vector<float>& values) {
    size_t expected = 1;
    for (const auto d : dims) expected *= d;
    if (expected != values.size()) throw ShapeMismatch("tensor dims do not match value count");
    tensors.push_back(NamedTensor{name, dims, values});
}

void Checkpoint::add_matrix(const std::string& name, const Eigen::MatrixXd& m) {
    std::vector<float> values;
    values.reserve(static_cast<size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) values.push_back(static_cast<float>(m(r, c)));
    add(name, {static_cast<std::uint32_t>(m.rows()), static_cast<std::uint32_t>(m.cols())},
        values);
}

void Checkpoint::add_vector(const std::string& name, const Eigen::VectorXd& v) {
    std::vector<float> values;
    values.reserve(static_cast<size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) values.push_back(static_cast<float>(v[i]));
    add(name, {static_cast<std::uint32_t>(v.size())}, values);
}

Eigen::MatrixXd Checkpoint::matrix(const std::string& name) const {
    const NamedTensor* t = find(name);
    if (!t || t->dims.size() != 2) throw ParseError("missing matrix tensor: " + name);
    Eigen::MatrixXd m(t->dims[0], t->dims[1]);
    size_t i = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = t->values[i++];
    return m;
}

Eigen::VectorXd Checkpoint::vector(const std::string& name) const {
    const NamedTensor* t = find(name);
    if (!t || t->dims.size() != 1) throw ParseError("missing vector tensor: " + name);
    Eigen::VectorXd v(t->dims[0]);
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = t->values[static_cast<size_t>(i)];
    return v;
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
    ByteWriter w;
    for (const auto& t : ckpt.tensors) {
        w.u16(static_cast<std::uint16_t>(t.name.size()));
        w.text(t.name);
        w.u8(static_cast<std::uint8_t>(t.dims.size()));
        for (const auto d : t.dims) w.u32(d);
        for (const float v : t.values) w.f32(v);
    }
    write_file_atomic(path, w.bytes());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    const std::vector<char> bytes = read_file(path);
    ByteReader r(bytes.data(), bytes.size());
    Checkpoint ckpt;
    while (r.remaining() > 0) {
        NamedTensor t;
        const std::uint16_t name_len = r.u16();
        t.name.resize(name_len);
        r.raw(t.name.data(), name_len);
        const std::uint8_t rank = r.u8();
        t.dims.resize(rank);
        size_t count = 1;
        for (int i = 0; i < rank; ++i) {
            t.dims[i] = r.u32();
            count *= t.dims[i];
        }
        t.values.resize(count);
        for (size_t i = 0; i < count; ++i) t.values[i] = r.f32();
        ckpt.tensors.push_back(std::move(t));
    }
    return ckpt;
}

Checkpoint denoiser_to_checkpoint(const ToyDenoiser& denoiser) {
    Checkpoint ckpt;
    ckpt.add("meta",
             {4},
             {static_cast<float>(denoiser.data_dim), static_cast<float>(denoiser.cond_dim),
              static_cast<float>(denoiser.hidden), 0.0f});
    ckpt.add_matrix("w1", denoiser.w1);
    ckpt.add_vector("b1", denoiser.b1);
    ckpt.add_matrix("w2", denoiser.w2);
    ckpt.add_vector("b2", denoiser.b2);
    ckpt.add_matrix("w3", denoiser.w3);
    ckpt.add_vector("b3", denoiser.b3);
    ckpt.add_vector("null_token", denoiser.null_token);
    return ckpt;
}

ToyDenoiser denoiser_from_checkpoint(const Checkpoint& ckpt) {
    const NamedTensor* meta = ckpt.find("meta");
    if (!meta || meta->values.size() < 3) throw ParseError("checkpoint lacks meta tensor");
    ToyDenoiser d;
    d.data_dim = static_cast<int>(meta->values[0]);
    d.cond_dim = static_cast<int>(meta->values[1]);
    d.hidden = static_cast<int>(meta->values[2]);
    d.w1 = ckpt.matrix("w1");
    d.b1 = ckpt.vector("b1");
    d.w2 = ckpt.matrix("w2");
    d.b2 = ckpt.vector("b2");
    d.w3 = ckpt.matrix("w3");
    d.b3 = ckpt.vector("b3");
    d.null_token = ckpt.vector("null_token");
    return d;
}

}  // namespace scenecore
