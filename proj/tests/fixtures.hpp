// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared test setup for transformer and model checks.
#pragma once

#include <algorithm>
#include <cmath>

#include "radionet/nn/transformer.hpp"
#include "radionet/scene/raster.hpp"

namespace radionet::testref {

/// Moves layer-norm scale/shift and FFN biases off their 1/0 init.
inline void perturb_norms(TransformerLayerParams& p, Rng& rng) {
    for (auto* t : {&p.norm1.gamma, &p.norm2.gamma}) {
        for (auto& v : t->data()) v = rng.uniform_f(0.5f, 1.5f);
    }
    for (auto* t : {&p.norm1.beta, &p.norm2.beta, &p.ffn.b1, &p.ffn.b2}) {
        for (auto& v : t->data()) v = rng.uniform_f(-0.3f, 0.3f);
    }
}

/// Picks each FFN bias b1[j] on a 0.01 grid in [-0.3, 0.3] so that the
/// hidden pre-activations of x sit as far from the relu kink as possible.
/// Returns the smallest |pre-activation| achieved.
inline float clear_ffn_kinks(const Tensor& x, TransformerLayerParams& p, Index seq_len = 0) {
    NoGradGuard guard;
    Tensor y1 = layer_norm(add(x, mhsa_forward(x, p.mhsa, seq_len)), p.norm1.gamma, p.norm1.beta);
    Tensor h = matmul(y1, p.ffn.w1);
    const Index rows = h.dim(0), hidden = h.dim(1);
    float worst = INFINITY;
    for (Index j = 0; j < hidden; ++j) {
        float best_b = 0.0f, best_margin = -1.0f;
        for (int k = -30; k <= 30; ++k) {
            const float b = 0.01f * static_cast<float>(k);
            float margin = INFINITY;
            for (Index r = 0; r < rows; ++r) margin = std::min(margin, std::abs(h.at({r, j}) + b));
            if (margin > best_margin) {
                best_margin = margin;
                best_b = b;
            }
        }
        p.ffn.b1.data()[static_cast<std::size_t>(j)] = best_b;
        worst = std::min(worst, best_margin);
    }
    return worst;
}

/// Random scene-like input [B, 6, res, res] with a single tx pixel per sample.
inline Tensor scene_like_input(Index B, Index res, Rng& rng) {
    Tensor x = Tensor::uniform({B, kInputChannels, res, res}, rng, 0.0f, 1.0f);
    auto d = x.data();
    for (Index b = 0; b < B; ++b) {
        float* tx = d.data() + (b * kInputChannels + kTx) * res * res;
        std::fill_n(tx, res * res, 0.0f);
        tx[rng.below(static_cast<std::uint64_t>(res * res))] = 0.5f;
        for (Index i = 0; i < res; ++i) {
            for (Index j = 0; j < res; ++j) {
                d[static_cast<std::size_t>(((b * kInputChannels + kGridX) * res + i) * res + j)] = grid_coordinate(j, res);
                d[static_cast<std::size_t>(((b * kInputChannels + kGridY) * res + i) * res + j)] = grid_coordinate(i, res);
            }
        }
    }
    return x;
}

}  // namespace radionet::testref
