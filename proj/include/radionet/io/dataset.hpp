// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sample generation and the RMAP dataset file.
//
// Layout (little-endian):
//   0  char[4] "RMAP"
//   4  u32     version (1)
//   8  u32     sample count
//  12  u32     H_in, W_in, C_in, H_out, W_out
//  32  records: C_in*H_in*W_in input floats, then H_out*W_out target floats
#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "radionet/io/binary.hpp"
#include "radionet/oracle/oracle.hpp"
#include "radionet/scene/raster.hpp"
#include "radionet/scene/scene.hpp"
#include "radionet/train/data.hpp"

namespace radionet {

struct DatasetSpec {
    SceneParams scene;
    OracleConfig oracle;
    Index in_res = 128;
    Index out_res = 32;

    SampleDims dims() const { return {kInputChannels, in_res, in_res, out_res, out_res}; }
};

struct GeneratedSample {
    SceneSpec scene;
    std::vector<float> input;   // [6, in, in]
    std::vector<float> target;  // [out, out], normalized
};

/// Sample `index` of the dataset with master seed `seed`.
inline GeneratedSample generate_sample(const DatasetSpec& spec, std::uint64_t seed, Index index) {
    GeneratedSample s;
    s.scene = generate_scene(derive_seed(seed, static_cast<std::uint64_t>(index)), spec.scene);
    const auto maps = rasterize_scene(s.scene, spec.in_res, spec.in_res);
    const Tensor t = maps.to_tensor(true);
    s.input.assign(t.data().begin(), t.data().end());
    s.target = trace_radio_map(s.scene, spec.oracle, spec.out_res, spec.out_res).normalized;
    return s;
}

/// Generates samples [0, count) on `threads` workers and hands them to
/// `sink` strictly in index order.
inline void generate_samples(const DatasetSpec& spec, std::uint64_t seed, Index count, unsigned threads,
                             const std::function<void(Index, GeneratedSample&&)>& sink) {
    threads = std::max(1u, threads);
    const Index chunk = std::max<Index>(1, static_cast<Index>(threads) * 2);
    for (Index start = 0; start < count; start += chunk) {
        const Index end = std::min(count, start + chunk);
        std::vector<GeneratedSample> buf(static_cast<std::size_t>(end - start));
        std::vector<std::exception_ptr> errs(threads);
        {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w) {
                pool.emplace_back([&, w] {
                    try {
                        for (Index i = start + w; i < end; i += threads) {
                            buf[static_cast<std::size_t>(i - start)] = generate_sample(spec, seed, i);
                        }
                    } catch (...) {
                        errs[w] = std::current_exception();
                    }
                });
            }
        }
        for (auto& e : errs) {
            if (e) std::rethrow_exception(e);
        }
        for (Index i = start; i < end; ++i) sink(i, std::move(buf[static_cast<std::size_t>(i - start)]));
    }
}

inline constexpr std::size_t kDatasetHeaderBytes = 32;
inline constexpr std::uint32_t kDatasetVersion = 1;

inline std::string dataset_header(const SampleDims& d, std::uint32_t count) {
    std::string h = "RMAP";
    bin::put_u32(h, kDatasetVersion);
    bin::put_u32(h, count);
    for (Index v : {d.h_in, d.w_in, d.c_in, d.h_out, d.w_out}) bin::put_u32(h, static_cast<std::uint32_t>(v));
    return h;
}

/// Streams records to disk; the count in the header is fixed up on close.
class DatasetWriter {
public:
    DatasetWriter(const std::string& path, SampleDims dims) : path_(path), dims_(dims), out_(path, std::ios::binary | std::ios::trunc) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
        out_ << dataset_header(dims_, 0);
    }
    ~DatasetWriter() {
        try {
            close();
        } catch (...) {
        }
    }

    void append(std::span<const float> input, std::span<const float> target) {
        if (static_cast<Index>(input.size()) != dims_.input_size() ||
            static_cast<Index>(target.size()) != dims_.target_size()) {
            throw DimensionError("dataset writer: record size does not match header");
        }
        for (auto part : {input, target}) {
            for (float v : part) {
                if (!(v >= 0.0f && v <= 1.0f)) throw FormatError("dataset writer: value outside [0, 1]");
            }
        }
        std::string rec;
        bin::put_f32s(rec, input);
        bin::put_f32s(rec, target);
        out_.write(rec.data(), static_cast<std::streamsize>(rec.size()));
        ++count_;
    }

    void close() {
        if (!out_.is_open()) return;
        out_.seekp(0);
        out_ << dataset_header(dims_, count_);
        out_.close();
        if (out_.fail()) throw std::runtime_error("write to '" + path_ + "' failed");
    }

    std::uint32_t count() const { return count_; }

private:
    std::string path_;
    SampleDims dims_;
    std::ofstream out_;
    std::uint32_t count_ = 0;
};

/// Random-access reader; records are read on demand.
class DatasetFile final : public SampleSource {
public:
    explicit DatasetFile(const std::string& path) : path_(path), in_(path, std::ios::binary) {
        if (!in_) throw std::runtime_error("cannot open dataset '" + path + "'");
        std::string head(kDatasetHeaderBytes, '\0');
        in_.read(head.data(), static_cast<std::streamsize>(head.size()));
        if (in_.gcount() != static_cast<std::streamsize>(head.size())) throw FormatError("dataset: truncated header");
        bin::Reader r(head, "dataset header");
        if (r.take(4) != "RMAP") throw FormatError("dataset: bad magic in '" + path + "'");
        if (const auto v = r.u32(); v != kDatasetVersion) throw FormatError("dataset: unsupported version " + std::to_string(v));
        count_ = r.u32();
        dims_.h_in = r.u32();
        dims_.w_in = r.u32();
        dims_.c_in = r.u32();
        dims_.h_out = r.u32();
        dims_.w_out = r.u32();
        in_.seekg(0, std::ios::end);
        const auto len = static_cast<std::uint64_t>(in_.tellg());
        const auto expect = kDatasetHeaderBytes + static_cast<std::uint64_t>(count_) * record_bytes();
        if (len != expect) {
            throw FormatError("dataset: file length " + std::to_string(len) + " does not match header (" +
                              std::to_string(expect) + ")");
        }
    }

    const SampleDims& dims() const override { return dims_; }
    Index size() const override { return count_; }

    void read(Index i, std::span<float> input, std::span<float> target) const override {
        if (i < 0 || i >= count_) throw ContractError("dataset: index " + std::to_string(i) + " out of range");
        if (static_cast<Index>(input.size()) != dims_.input_size() ||
            static_cast<Index>(target.size()) != dims_.target_size()) {
            throw DimensionError("dataset: destination size does not match record");
        }
        buf_.resize(record_bytes());
        in_.clear();
        in_.seekg(static_cast<std::streamoff>(kDatasetHeaderBytes + static_cast<std::uint64_t>(i) * record_bytes()));
        in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!in_) throw FormatError("dataset: short read of record " + std::to_string(i));
        bin::f32s_from_le(buf_.data(), input);
        bin::f32s_from_le(buf_.data() + input.size_bytes(), target);
    }

    const std::string& path() const { return path_; }

private:
    std::uint64_t record_bytes() const {
        return static_cast<std::uint64_t>(dims_.input_size() + dims_.target_size()) * 4u;
    }

    std::string path_;
    mutable std::ifstream in_;
    mutable std::string buf_;
    SampleDims dims_;
    Index count_ = 0;
};

/// Writes every sample of `src` in index order.
inline void write_dataset(const std::string& path, const SampleSource& src) {
    DatasetWriter w(path, src.dims());
    std::vector<float> in(static_cast<std::size_t>(src.dims().input_size()));
    std::vector<float> tg(static_cast<std::size_t>(src.dims().target_size()));
    for (Index i = 0; i < src.size(); ++i) {
        src.read(i, in, tg);
        w.append(in, tg);
    }
    w.close();
}

inline std::uint64_t file_checksum(const std::string& path) { return bin::fnv1a(bin::read_file(path)); }

}  // namespace radionet
