// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Named parameter lists and initializers shared by every layer.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "radionet/core/tensor.hpp"

namespace radionet {

struct NamedParam {
    std::string name;
    Tensor tensor;
};

/// Handles, not copies: updating an entry updates the owning layer.
using ParamList = std::vector<NamedParam>;

/// Glorot-uniform matrix [fan_in, fan_out], trainable.
inline Tensor glorot(Index fan_in, Index fan_out, Rng& rng) {
    const auto a = static_cast<float>(std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)));
    return Tensor::uniform({fan_in, fan_out}, rng, -a, a, true);
}

/// He-uniform conv kernel [F, C, k, k] for relu stacks, trainable.
inline Tensor he_kernel(Index out_ch, Index in_ch, Index k, Rng& rng) {
    const auto a = static_cast<float>(std::sqrt(6.0 / static_cast<double>(in_ch * k * k)));
    return Tensor::uniform({out_ch, in_ch, k, k}, rng, -a, a, true);
}

inline Tensor trainable_zeros(Shape shape) { return Tensor::zeros(std::move(shape), true); }
inline Tensor trainable_ones(Shape shape) { return Tensor::ones(std::move(shape), true); }

inline Index parameter_count(const ParamList& params) {
    Index n = 0;
    for (const auto& p : params) n += p.tensor.numel();
    return n;
}

inline void zero_grads(const ParamList& params) {
    for (auto p : params) p.tensor.zero_grad();
}

}  // namespace radionet
