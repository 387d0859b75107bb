// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// RadioNet and its baselines: a conv encoder, a conv decoder with
// Spread layers after every upsampling stage, and a sigmoid head.
//
// Spread layer on a feature map [B,C,h,w]: split into a g x g patch grid,
// project each flattened patch to d_item, add the grid embedding (or a
// learned positional table), run one Transformer layer over the g*g patch
// tokens of each sample, project back and reassemble. With the skip on the
// input map is added to the result.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "radionet/core/conv.hpp"
#include "radionet/core/ops.hpp"
#include "radionet/model/config.hpp"
#include "radionet/nn/params.hpp"
#include "radionet/nn/transformer.hpp"
#include "radionet/scene/raster.hpp"

namespace radionet {

/// Grid embedding rows for patch p = pi * g + pj:
/// [(pj+.5)/g, (pi+.5)/g, (pj+.5)/g - tx_x, (pi+.5)/g - tx_y].
/// tx is in normalized map coordinates, x along columns.
inline Tensor grid_embedding(Index grid, double tx_x, double tx_y) {
    if (grid < 1) throw ContractError("grid_embedding: grid must be positive");
    if (!(tx_x >= 0.0 && tx_x <= 1.0 && tx_y >= 0.0 && tx_y <= 1.0)) {
        throw ContractError("grid_embedding: tx position outside [0,1]^2");
    }
    std::vector<float> v(static_cast<std::size_t>(grid * grid * 4));
    const double g = static_cast<double>(grid);
    for (Index pi = 0; pi < grid; ++pi) {
        for (Index pj = 0; pj < grid; ++pj) {
            const double cx = (static_cast<double>(pj) + 0.5) / g, cy = (static_cast<double>(pi) + 0.5) / g;
            float* r = v.data() + (pi * grid + pj) * 4;
            r[0] = static_cast<float>(cx);
            r[1] = static_cast<float>(cy);
            r[2] = static_cast<float>(cx - tx_x);
            r[3] = static_cast<float>(cy - tx_y);
        }
    }
    return Tensor({grid * grid, 4}, std::move(v));
}

/// Transmitter cell centre of each sample, from the argmax of the tx plane.
inline std::vector<std::pair<double, double>> tx_positions(const Tensor& x) {
    if (x.rank() != 4 || x.dim(1) <= kTx) {
        throw DimensionError("tx_positions: expected [B,C>=3,H,W], got " + shape_str(x.shape()));
    }
    const Index B = x.dim(0), C = x.dim(1), H = x.dim(2), W = x.dim(3);
    std::vector<std::pair<double, double>> out;
    auto d = x.data();
    for (Index b = 0; b < B; ++b) {
        const float* plane = d.data() + (b * C + kTx) * H * W;
        Index best = 0;
        for (Index k = 1; k < H * W; ++k) {
            if (plane[k] > plane[best]) best = k;
        }
        out.emplace_back(grid_coordinate(best % W, W), grid_coordinate(best / W, H));
    }
    return out;
}

/// Stacked grid embeddings [B*g*g, 4] for a batch of inputs.
inline Tensor grid_embedding_batch(const Tensor& x, Index grid) {
    std::vector<float> v;
    for (auto [tx, ty] : tx_positions(x)) {
        auto e = grid_embedding(grid, tx, ty);
        v.insert(v.end(), e.data().begin(), e.data().end());
    }
    const auto rows = static_cast<Index>(v.size() / 4);
    return Tensor({rows, 4}, std::move(v));
}

struct ConvParams {
    Tensor w, b;

    static ConvParams init(Index out_ch, Index in_ch, Index k, Rng& rng) {
        return {he_kernel(out_ch, in_ch, k, rng), trainable_zeros({out_ch})};
    }
    /// Transposed conv kernel [in_ch, out_ch, k, k].
    static ConvParams init_transposed(Index in_ch, Index out_ch, Index k, Rng& rng) {
        return {he_kernel(in_ch, out_ch, k, rng), trainable_zeros({out_ch})};
    }
    void collect(const std::string& prefix, ParamList& out) const {
        out.push_back({prefix + "weight", w});
        out.push_back({prefix + "bias", b});
    }
};

struct SpreadParams {
    Tensor w_in, b_in;    // [C*ph*pw, d], [d]
    Tensor w_ge, b_ge;    // [4, d], [d] with GE
    Tensor pe;            // [g*g, d] with PE
    TransformerLayerParams block;
    Tensor w_out, b_out;  // [d, C*ph*pw], [C*ph*pw]

    static SpreadParams init(Index patch_features, Index grid, const ModelConfig& cfg, Rng& rng) {
        const Index d = cfg.transformer.d_item;
        SpreadParams p;
        p.w_in = glorot(patch_features, d, rng);
        p.b_in = trainable_zeros({d});
        if (cfg.use_ge) {
            p.w_ge = glorot(4, d, rng);
            p.b_ge = trainable_zeros({d});
        }
        if (cfg.use_pe) p.pe = Tensor::randn({grid * grid, d}, rng, 0.02f, true);
        p.block = TransformerLayerParams::init(cfg.transformer, rng);
        p.w_out = glorot(d, patch_features, rng);
        p.b_out = trainable_zeros({patch_features});
        return p;
    }

    void collect(const std::string& prefix, ParamList& out) const {
        out.push_back({prefix + "in.weight", w_in});
        out.push_back({prefix + "in.bias", b_in});
        if (w_ge.defined()) {
            out.push_back({prefix + "ge.weight", w_ge});
            out.push_back({prefix + "ge.bias", b_ge});
        }
        if (pe.defined()) out.push_back({prefix + "pe", pe});
        block.collect(prefix + "block.", out);
        out.push_back({prefix + "out.weight", w_out});
        out.push_back({prefix + "out.bias", b_out});
    }
};

/// Spread layer on [B,C,h,w]. `ge` is [B*g*g, 4] when the layer has a GE
/// projection and ignored otherwise.
inline Tensor spread_layer_forward(const Tensor& feat, const SpreadParams& p, Index grid, bool skip,
                                   const Tensor& ge = {}, std::vector<Tensor>* attention = nullptr) {
    if (feat.rank() != 4) throw DimensionError("spread: expected [B,C,H,W], got " + shape_str(feat.shape()));
    const Index B = feat.dim(0), C = feat.dim(1), H = feat.dim(2), W = feat.dim(3);
    const Index n_tok = grid * grid;
    Tensor tokens = patchify(feat, grid);
    const Index P = tokens.dim(2);
    if (p.w_in.dim(0) != P) {
        throw DimensionError("spread: patch features " + std::to_string(P) + " do not match projection " +
                             shape_str(p.w_in.shape()));
    }
    Tensor h = linear(reshape(tokens, {B * n_tok, P}), p.w_in, p.b_in);
    if (p.w_ge.defined()) {
        if (!ge.defined() || ge.dim(0) != B * n_tok) throw ContractError("spread: grid embedding missing or misshaped");
        h = add(h, linear(ge, p.w_ge, p.b_ge));
    }
    if (p.pe.defined()) {
        if (p.pe.dim(0) != n_tok) throw DimensionError("spread: positional table does not match the patch grid");
        h = add(h, B == 1 ? p.pe : concat(std::vector<Tensor>(static_cast<std::size_t>(B), p.pe), 0));
    }
    h = transformer_layer_forward(h, p.block, n_tok, attention);
    Tensor out = combine_patches(reshape(linear(h, p.w_out, p.b_out), {B, n_tok, P}), grid, C, H, W);
    return skip ? add(out, feat) : out;
}

struct EncoderStage {
    ConvParams conv_a, conv_b;
};

struct DecoderStage {
    ConvParams up, fuse;
    bool has_spread = false;
    SpreadParams spread;
};

class RadioNetModel {
public:
    RadioNetModel() = default;

    static RadioNetModel init(const ModelConfig& cfg, std::uint64_t seed) {
        cfg.validate();
        RadioNetModel m;
        m.cfg_ = cfg;
        Rng rng(seed);
        Index in_ch = cfg.in_channels();
        for (Index s = 1; s <= cfg.enc_stages; ++s) {
            const Index c = cfg.stage_channels(s);
            m.enc_.push_back({ConvParams::init(c, in_ch, 3, rng), ConvParams::init(c, c, 3, rng)});
            in_ch = c;
        }
        if (cfg.bottleneck_transformer) {
            const Index g = cfg.bottleneck_grid(), r = cfg.stage_res(cfg.enc_stages) / g;
            m.bottleneck_ = SpreadParams::init(in_ch * r * r, g, cfg, rng);
        }
        for (Index k = 1; k <= cfg.dec_stages; ++k) {
            const Index c = cfg.stage_channels(cfg.enc_stages - k);
            DecoderStage st;
            st.up = ConvParams::init_transposed(in_ch, c, 2, rng);
            st.fuse = ConvParams::init(c, 2 * c, 3, rng);
            if (cfg.use_spread) {
                const Index r = cfg.decoder_res(k) / cfg.patch_grid;
                st.has_spread = true;
                st.spread = SpreadParams::init(c * r * r, cfg.patch_grid, cfg, rng);
            }
            m.dec_.push_back(std::move(st));
            in_ch = c;
        }
        m.head_ = ConvParams::init(1, in_ch, 1, rng);
        return m;
    }

    const ModelConfig& config() const { return cfg_; }

    /// Input [B, 6 or 4, in, in]; the grid planes are dropped when GE is off.
    /// Output [B, 1, out, out] in (0, 1).
    Tensor forward(const Tensor& input, std::vector<Tensor>* attention = nullptr) const {
        if (input.rank() != 4 || input.dim(2) != cfg_.in_res || input.dim(3) != cfg_.in_res) {
            throw DimensionError("model: expected [B,C," + std::to_string(cfg_.in_res) + "," +
                                 std::to_string(cfg_.in_res) + "], got " + shape_str(input.shape()));
        }
        const Index need = cfg_.in_channels();
        if (input.dim(1) < need) {
            throw DimensionError("model: needs " + std::to_string(need) + " input channels, got " +
                                 std::to_string(input.dim(1)));
        }
        Tensor x = input.dim(1) == need ? input : narrow(input, 1, 0, need);
        const auto skips = encode(x);
        Tensor ge;
        if (cfg_.use_spread && cfg_.use_ge) ge = grid_embedding_batch(input, cfg_.patch_grid);
        return decode(skips, ge, attention);
    }

    /// Encoder pyramid: entry s-1 is stage s, [B, ch_s, in/2^s, in/2^s].
    std::vector<Tensor> encode(const Tensor& x) const {
        std::vector<Tensor> out;
        Tensor h = x;
        for (const auto& st : enc_) {
            h = relu(conv2d(h, st.conv_a.w, st.conv_a.b, 1, 1));
            h = maxpool2d(h, 2, 2);
            h = relu(conv2d(h, st.conv_b.w, st.conv_b.b, 1, 1));
            out.push_back(h);
        }
        return out;
    }

    Tensor decode(const std::vector<Tensor>& skips, const Tensor& ge, std::vector<Tensor>* attention = nullptr) const {
        Tensor h = skips.back();
        if (cfg_.bottleneck_transformer) h = spread_layer_forward(h, bottleneck_, cfg_.bottleneck_grid(), false, {}, attention);
        for (std::size_t k = 0; k < dec_.size(); ++k) {
            const auto& st = dec_[k];
            h = conv_transpose2d(h, st.up.w, st.up.b, 2, 0);
            h = concat({h, skips[skips.size() - 2 - k]}, 1);
            h = relu(conv2d(h, st.fuse.w, st.fuse.b, 1, 1));
            if (st.has_spread) h = spread_layer_forward(h, st.spread, cfg_.patch_grid, cfg_.use_spread_skip, ge, attention);
        }
        return sigmoid(conv2d(h, head_.w, head_.b, 1, 0));
    }

    ParamList parameters() const {
        ParamList out;
        for (std::size_t s = 0; s < enc_.size(); ++s) {
            const std::string p = "enc" + std::to_string(s + 1) + ".";
            enc_[s].conv_a.collect(p + "conv_a.", out);
            enc_[s].conv_b.collect(p + "conv_b.", out);
        }
        if (cfg_.bottleneck_transformer) bottleneck_.collect("bottleneck.", out);
        for (std::size_t k = 0; k < dec_.size(); ++k) {
            const std::string p = "dec" + std::to_string(k + 1) + ".";
            dec_[k].up.collect(p + "up.", out);
            dec_[k].fuse.collect(p + "fuse.", out);
            if (dec_[k].has_spread) dec_[k].spread.collect(p + "spread.", out);
        }
        head_.collect("head.", out);
        return out;
    }

    const std::vector<DecoderStage>& decoder() const { return dec_; }
    std::vector<DecoderStage>& decoder() { return dec_; }

private:
    ModelConfig cfg_;
    std::vector<EncoderStage> enc_;
    SpreadParams bottleneck_;
    std::vector<DecoderStage> dec_;
    ConvParams head_;
};

}  // namespace radionet
