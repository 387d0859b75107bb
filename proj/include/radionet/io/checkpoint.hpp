// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// RNCK checkpoint file.
//
// Layout (little-endian; str = u32 length + bytes):
//   char[4] "RNCK", u32 version (1)
//   str variant, u64 config digest, str canonical model config
//   u64 iteration (completed optimizer steps)
//   u32 entry count, then per entry:
//     str name, u32 rank, u64 dims[rank], f32 data[prod(dims)]
// Model weights are stored as "model/<param>", Adam moments as
// "optim/m/<param>" and "optim/v/<param>".
#pragma once

#include <string>
#include <vector>

#include "radionet/io/binary.hpp"
#include "radionet/model/radionet.hpp"
#include "radionet/train/adam.hpp"

namespace radionet {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointEntry {
    std::string name;
    Shape shape;
    std::vector<float> data;
    bool operator==(const CheckpointEntry&) const = default;
};

struct Checkpoint {
    std::string variant;
    std::uint64_t digest = 0;
    std::string config_text;
    std::uint64_t iteration = 0;
    std::vector<CheckpointEntry> entries;

    ModelConfig model_config() const {
        auto c = ModelConfig::from_canonical(config_text);
        if (c.digest() != digest) throw FormatError("checkpoint: stored config does not match its digest");
        return c;
    }

    const CheckpointEntry* find(const std::string& name) const {
        for (const auto& e : entries) {
            if (e.name == name) return &e;
        }
        return nullptr;
    }

    bool operator==(const Checkpoint&) const = default;
};

inline std::string serialize_checkpoint(const Checkpoint& c) {
    std::string out = "RNCK";
    bin::put_u32(out, kCheckpointVersion);
    bin::put_str(out, c.variant);
    bin::put_u64(out, c.digest);
    bin::put_str(out, c.config_text);
    bin::put_u64(out, c.iteration);
    bin::put_u32(out, static_cast<std::uint32_t>(c.entries.size()));
    for (const auto& e : c.entries) {
        if (numel_of(e.shape) != static_cast<Index>(e.data.size())) {
            throw DimensionError("checkpoint: entry '" + e.name + "' data does not match its shape");
        }
        bin::put_str(out, e.name);
        bin::put_u32(out, static_cast<std::uint32_t>(e.shape.size()));
        for (Index d : e.shape) bin::put_u64(out, static_cast<std::uint64_t>(d));
        bin::put_f32s(out, e.data);
    }
    return out;
}

inline Checkpoint deserialize_checkpoint(std::string_view bytes) {
    bin::Reader r(bytes, "checkpoint");
    if (r.take(4) != "RNCK") throw FormatError("checkpoint: bad magic");
    if (const auto v = r.u32(); v != kCheckpointVersion) throw FormatError("checkpoint: unsupported version " + std::to_string(v));
    Checkpoint c;
    c.variant = r.str();
    c.digest = r.u64();
    c.config_text = r.str();
    c.iteration = r.u64();
    const auto n = r.u32();
    for (std::uint32_t k = 0; k < n; ++k) {
        CheckpointEntry e;
        e.name = r.str();
        const auto rank = r.u32();
        if (rank > 8) throw FormatError("checkpoint: entry '" + e.name + "' has rank " + std::to_string(rank));
        std::uint64_t count = 1;
        for (std::uint32_t a = 0; a < rank; ++a) {
            const auto d = r.u64();
            if (d > (1ULL << 32)) throw FormatError("checkpoint: entry '" + e.name + "' dimension too large");
            count *= d;
            if (count > bytes.size()) throw FormatError("checkpoint: entry '" + e.name + "' larger than the file");
            e.shape.push_back(static_cast<Index>(d));
        }
        e.data.resize(static_cast<std::size_t>(count));
        r.f32s(e.data);
        c.entries.push_back(std::move(e));
    }
    if (!r.done()) throw FormatError("checkpoint: trailing bytes after last entry");
    return c;
}

inline void save_checkpoint(const std::string& path, const Checkpoint& c) { bin::write_file(path, serialize_checkpoint(c)); }
inline Checkpoint load_checkpoint(const std::string& path) { return deserialize_checkpoint(bin::read_file(path)); }

/// Snapshot of a model and, when given, its optimizer state.
inline Checkpoint capture_checkpoint(const RadioNetModel& model, const Adam* optim, std::uint64_t iteration) {
    Checkpoint c;
    const auto& cfg = model.config();
    c.variant = cfg.variant;
    c.digest = cfg.digest();
    c.config_text = cfg.canonical();
    c.iteration = iteration;
    const auto params = model.parameters();
    for (const auto& p : params) {
        c.entries.push_back({"model/" + p.name, p.tensor.shape(), {p.tensor.data().begin(), p.tensor.data().end()}});
    }
    if (optim) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            c.entries.push_back({"optim/m/" + params[k].name, params[k].tensor.shape(), optim->first_moment(k)});
        }
        for (std::size_t k = 0; k < params.size(); ++k) {
            c.entries.push_back({"optim/v/" + params[k].name, params[k].tensor.shape(), optim->second_moment(k)});
        }
    }
    return c;
}

/// Loads weights (and moments, when `optim` is given and present) into a
/// model of the same configuration; a digest mismatch is refused.
inline void restore_checkpoint(const Checkpoint& c, RadioNetModel& model, Adam* optim = nullptr) {
    if (c.digest != model.config().digest()) {
        throw ConfigError("checkpoint: config digest mismatch (checkpoint variant '" + c.variant + "', model variant '" +
                          model.config().variant + "')");
    }
    auto copy_into = [&](const std::string& name, const Shape& shape, std::span<float> dst) {
        const auto* e = c.find(name);
        if (!e) throw FormatError("checkpoint: missing entry '" + name + "'");
        if (e->shape != shape) {
            throw FormatError("checkpoint: entry '" + name + "' has shape " + shape_str(e->shape) + ", expected " +
                              shape_str(shape));
        }
        std::copy(e->data.begin(), e->data.end(), dst.begin());
    };
    const auto params = model.parameters();
    for (auto p : params) copy_into("model/" + p.name, p.tensor.shape(), p.tensor.data());
    if (optim && c.find("optim/m/" + params.front().name)) {
        for (std::size_t k = 0; k < params.size(); ++k) {
            copy_into("optim/m/" + params[k].name, params[k].tensor.shape(), optim->first_moment(k));
            copy_into("optim/v/" + params[k].name, params[k].tensor.shape(), optim->second_moment(k));
        }
        optim->set_step_count(static_cast<std::int64_t>(c.iteration));
    }
}

}  // namespace radionet
