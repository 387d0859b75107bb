// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Random-access sample sources and batch assembly.
#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/tensor.hpp"

namespace radionet {

struct SampleDims {
    Index c_in = 0, h_in = 0, w_in = 0;
    Index h_out = 0, w_out = 0;

    Index input_size() const { return c_in * h_in * w_in; }
    Index target_size() const { return h_out * w_out; }
    bool operator==(const SampleDims&) const = default;
};

/// Sample i = (input planes [C,H,W], normalized target map [h,w]).
class SampleSource {
public:
    virtual ~SampleSource() = default;
    virtual const SampleDims& dims() const = 0;
    virtual Index size() const = 0;
    virtual void read(Index i, std::span<float> input, std::span<float> target) const = 0;
};

class MemoryDataset final : public SampleSource {
public:
    explicit MemoryDataset(SampleDims dims) : dims_(dims) {}

    void add(std::span<const float> input, std::span<const float> target) {
        if (static_cast<Index>(input.size()) != dims_.input_size() ||
            static_cast<Index>(target.size()) != dims_.target_size()) {
            throw DimensionError("dataset: sample size does not match dims");
        }
        inputs_.insert(inputs_.end(), input.begin(), input.end());
        targets_.insert(targets_.end(), target.begin(), target.end());
        ++count_;
    }

    const SampleDims& dims() const override { return dims_; }
    Index size() const override { return count_; }

    void read(Index i, std::span<float> input, std::span<float> target) const override {
        if (i < 0 || i >= count_) throw ContractError("dataset: index " + std::to_string(i) + " out of range");
        std::copy_n(inputs_.begin() + i * dims_.input_size(), dims_.input_size(), input.begin());
        std::copy_n(targets_.begin() + i * dims_.target_size(), dims_.target_size(), target.begin());
    }

private:
    SampleDims dims_;
    Index count_ = 0;
    std::vector<float> inputs_, targets_;
};

struct Batch {
    Tensor input;   // [B, C, H, W]
    Tensor target;  // [B, 1, h, w]
};

inline Batch make_batch(const SampleSource& src, std::span<const Index> indices) {
    const auto& d = src.dims();
    const auto B = static_cast<Index>(indices.size());
    if (B == 0) throw ContractError("make_batch: empty index list");
    std::vector<float> in(static_cast<std::size_t>(B * d.input_size()));
    std::vector<float> tg(static_cast<std::size_t>(B * d.target_size()));
    for (Index b = 0; b < B; ++b) {
        src.read(indices[static_cast<std::size_t>(b)],
                 std::span(in).subspan(static_cast<std::size_t>(b * d.input_size()), static_cast<std::size_t>(d.input_size())),
                 std::span(tg).subspan(static_cast<std::size_t>(b * d.target_size()), static_cast<std::size_t>(d.target_size())));
    }
    return {Tensor({B, d.c_in, d.h_in, d.w_in}, std::move(in)), Tensor({B, 1, d.h_out, d.w_out}, std::move(tg))};
}

}  // namespace radionet
