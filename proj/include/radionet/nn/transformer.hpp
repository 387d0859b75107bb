// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Multi-head self-attention, position-wise FFN and the post-norm
// Transformer layer.
//
// Inputs are token matrices [N, d_item] holding N / seq_len independent
// sequences stacked row-wise; seq_len = 0 means a single sequence. Linear
// maps and layer norms act on all rows at once, attention mixes rows only
// within a sequence.
//
// Per head i: A = softmax_keys(Q K^T / sqrt(d_head)), Z = A V, with
// Q = X W_Q^i etc. and d_head = d_item / n_heads. Heads are concatenated
// and fused by W_O.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/ops.hpp"
#include "radionet/nn/params.hpp"

namespace radionet {

struct TransformerConfig {
    Index d_item = 128;
    Index n_heads = 4;
    Index d_hidden = 256;

    Index d_head() const { return d_item / n_heads; }

    void validate() const {
        if (d_item <= 0 || n_heads <= 0 || d_hidden <= 0) {
            throw ConfigError("transformer dimensions must be positive");
        }
        if (d_item % n_heads != 0) {
            throw ConfigError("d_item " + std::to_string(d_item) + " not divisible by n_heads " +
                              std::to_string(n_heads));
        }
    }
};

struct MhsaParams {
    std::vector<Tensor> wq, wk, wv;  // n_heads x [d_item, d_head]
    Tensor wo;                       // [d_item, d_item]

    static MhsaParams init(const TransformerConfig& cfg, Rng& rng) {
        cfg.validate();
        MhsaParams p;
        for (Index h = 0; h < cfg.n_heads; ++h) {
            p.wq.push_back(glorot(cfg.d_item, cfg.d_head(), rng));
            p.wk.push_back(glorot(cfg.d_item, cfg.d_head(), rng));
            p.wv.push_back(glorot(cfg.d_item, cfg.d_head(), rng));
        }
        p.wo = glorot(cfg.d_item, cfg.d_item, rng);
        return p;
    }

    Index n_heads() const { return static_cast<Index>(wq.size()); }
    Index d_item() const { return wo.dim(0); }

    void collect(const std::string& prefix, ParamList& out) const {
        for (std::size_t h = 0; h < wq.size(); ++h) {
            const std::string hp = prefix + "head" + std::to_string(h) + ".";
            out.push_back({hp + "wq", wq[h]});
            out.push_back({hp + "wk", wk[h]});
            out.push_back({hp + "wv", wv[h]});
        }
        out.push_back({prefix + "wo", wo});
    }
};

struct FfnParams {
    Tensor w1, b1, w2, b2;

    static FfnParams init(const TransformerConfig& cfg, Rng& rng) {
        FfnParams p;
        p.w1 = glorot(cfg.d_item, cfg.d_hidden, rng);
        p.b1 = trainable_zeros({cfg.d_hidden});
        p.w2 = glorot(cfg.d_hidden, cfg.d_item, rng);
        p.b2 = trainable_zeros({cfg.d_item});
        return p;
    }

    void collect(const std::string& prefix, ParamList& out) const {
        out.push_back({prefix + "w1", w1});
        out.push_back({prefix + "b1", b1});
        out.push_back({prefix + "w2", w2});
        out.push_back({prefix + "b2", b2});
    }
};

struct LayerNormParams {
    Tensor gamma, beta;

    static LayerNormParams init(Index d) { return {trainable_ones({d}), trainable_zeros({d})}; }

    void collect(const std::string& prefix, ParamList& out) const {
        out.push_back({prefix + "gamma", gamma});
        out.push_back({prefix + "beta", beta});
    }
};

struct TransformerLayerParams {
    MhsaParams mhsa;
    FfnParams ffn;
    LayerNormParams norm1, norm2;

    static TransformerLayerParams init(const TransformerConfig& cfg, Rng& rng) {
        TransformerLayerParams p;
        p.mhsa = MhsaParams::init(cfg, rng);
        p.ffn = FfnParams::init(cfg, rng);
        p.norm1 = LayerNormParams::init(cfg.d_item);
        p.norm2 = LayerNormParams::init(cfg.d_item);
        return p;
    }

    void collect(const std::string& prefix, ParamList& out) const {
        mhsa.collect(prefix + "mhsa.", out);
        ffn.collect(prefix + "ffn.", out);
        norm1.collect(prefix + "norm1.", out);
        norm2.collect(prefix + "norm2.", out);
    }
};

namespace detail {

inline Index sequences_in(const Tensor& x, Index d_item, Index& seq_len, const char* op) {
    if (x.rank() != 2 || x.dim(1) != d_item) {
        throw DimensionError(std::string(op) + ": expected [N, " + std::to_string(d_item) + "], got " +
                             shape_str(x.shape()));
    }
    const Index n = x.dim(0);
    if (seq_len == 0) seq_len = n;
    if (n < 1 || seq_len < 1 || n % seq_len != 0) {
        throw DimensionError(std::string(op) + ": " + std::to_string(n) + " rows do not split into sequences of " +
                             std::to_string(seq_len));
    }
    return n / seq_len;
}

}  // namespace detail

/// Self-attention over each sequence of x. When `attention` is non-null it
/// receives the detached [L, L] weights, sequence-major then head-major.
inline Tensor mhsa_forward(const Tensor& x, const MhsaParams& p, Index seq_len = 0,
                           std::vector<Tensor>* attention = nullptr) {
    const Index n_seq = detail::sequences_in(x, p.d_item(), seq_len, "mhsa_forward");
    const Index heads = p.n_heads();
    const Index d_head = p.d_item() / heads;
    const float inv_scale = 1.0f / std::sqrt(static_cast<float>(d_head));

    std::vector<Tensor> q(heads), k(heads), v(heads);
    for (Index h = 0; h < heads; ++h) {
        q[h] = linear(x, p.wq[h]);
        k[h] = linear(x, p.wk[h]);
        v[h] = linear(x, p.wv[h]);
    }
    std::vector<Tensor> per_seq;
    per_seq.reserve(n_seq);
    for (Index s = 0; s < n_seq; ++s) {
        std::vector<Tensor> z(heads);
        for (Index h = 0; h < heads; ++h) {
            const auto sl = [&](const Tensor& t) { return n_seq == 1 ? t : narrow(t, 0, s * seq_len, seq_len); };
            Tensor scores = scale(matmul(sl(q[h]), transpose(sl(k[h]))), inv_scale);
            Tensor a = softmax(scores, 1);
            if (attention) attention->push_back(a.detach());
            z[h] = matmul(a, sl(v[h]));
        }
        per_seq.push_back(heads == 1 ? z[0] : concat(z, 1));
    }
    Tensor fused = n_seq == 1 ? per_seq[0] : concat(per_seq, 0);
    return linear(fused, p.wo);
}

/// W2 relu(W1 x + b1) + b2 applied to every row.
inline Tensor ffn_forward(const Tensor& x, const FfnParams& p) {
    if (x.rank() != 2 || x.dim(1) != p.w1.dim(0)) {
        throw DimensionError("ffn_forward: input " + shape_str(x.shape()) + " does not match W1 " +
                             shape_str(p.w1.shape()));
    }
    return linear(relu(linear(x, p.w1, p.b1)), p.w2, p.b2);
}

/// y1 = LN(x + MHSA(x)); y = LN(y1 + FFN(y1)).
inline Tensor transformer_layer_forward(const Tensor& x, const TransformerLayerParams& p, Index seq_len = 0,
                                        std::vector<Tensor>* attention = nullptr) {
    Tensor y1 = layer_norm(add(x, mhsa_forward(x, p.mhsa, seq_len, attention)), p.norm1.gamma, p.norm1.beta);
    return layer_norm(add(y1, ffn_forward(y1, p.ffn)), p.norm2.gamma, p.norm2.beta);
}

/// Checks parameter shapes against a config.
inline void validate_layer(const TransformerConfig& cfg, const TransformerLayerParams& p) {
    cfg.validate();
    if (p.mhsa.n_heads() != cfg.n_heads || p.mhsa.d_item() != cfg.d_item || p.ffn.w1.dim(1) != cfg.d_hidden) {
        throw DimensionError("transformer parameters do not match config");
    }
}

inline Tensor transformer_layer_forward(const Tensor& x, const TransformerConfig& cfg,
                                        const TransformerLayerParams& p, Index seq_len = 0) {
    validate_layer(cfg, p);
    return transformer_layer_forward(x, p, seq_len);
}

}  // namespace radionet
