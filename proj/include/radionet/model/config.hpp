// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Architecture description shared by RadioNet and the baselines.
//
// Encoder stage s = 1..enc_stages halves the resolution and has
// ch * 2^min(s-1, channel_cap) channels. Decoder stage k = 1..dec_stages
// doubles it again, so the output side is in_res / 2^(enc_stages - dec_stages).
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "radionet/core/errors.hpp"
#include "radionet/nn/transformer.hpp"
#include "radionet/scene/raster.hpp"

namespace radionet {

inline constexpr std::array<std::string_view, 6> kVariantNames{
    "radionet", "radionet_no_skip", "radionet_no_ge", "radionet_pe", "unet", "transunet"};

inline std::string variant_list() {
    std::string s;
    for (auto n : kVariantNames) {
        if (!s.empty()) s += ", ";
        s += n;
    }
    return s;
}

struct ModelConfig {
    std::string variant = "radionet";
    Index in_res = 128;
    Index out_res = 32;
    Index ch = 16;
    Index enc_stages = 4;
    Index dec_stages = 2;
    Index channel_cap = 3;
    Index patch_grid = 8;
    TransformerConfig transformer{128, 4, 256};
    bool use_spread = true;
    bool use_ge = true;
    bool use_pe = false;
    bool use_spread_skip = true;
    /// One transformer layer on the encoder bottleneck (TransUnet baseline).
    bool bottleneck_transformer = false;

    Index in_channels() const { return use_ge ? kInputChannels : kSceneChannels; }
    Index stage_channels(Index s) const { return ch << std::min(s - 1, channel_cap); }
    Index stage_res(Index s) const { return in_res >> s; }
    /// Resolution after decoder stage k.
    Index decoder_res(Index k) const { return stage_res(enc_stages - k); }
    /// Patch grid of the bottleneck transformer; one token per pixel on small maps.
    Index bottleneck_grid() const { return std::min(patch_grid, stage_res(enc_stages)); }

    void validate() const {
        transformer.validate();
        if (in_res <= 0 || ch <= 0 || enc_stages < 1 || dec_stages < 1 || channel_cap < 0 || patch_grid < 1) {
            throw ConfigError("model: sizes must be positive");
        }
        if (dec_stages >= enc_stages) throw ConfigError("model: dec_stages must be below enc_stages");
        if (in_res % (Index{1} << enc_stages) != 0) {
            throw ConfigError("model: input resolution " + std::to_string(in_res) + " not divisible by 2^" +
                              std::to_string(enc_stages));
        }
        if (decoder_res(dec_stages) != out_res) {
            throw ConfigError("model: decoder ends at " + std::to_string(decoder_res(dec_stages)) +
                              " but output resolution is " + std::to_string(out_res));
        }
        if (use_ge && use_pe) throw ConfigError("model: use_ge and use_pe are mutually exclusive");
        if (use_spread) {
            for (Index k = 1; k <= dec_stages; ++k) {
                if (decoder_res(k) % patch_grid != 0) {
                    throw ConfigError("model: patch grid " + std::to_string(patch_grid) +
                                      " does not divide spread resolution " + std::to_string(decoder_res(k)));
                }
            }
        }
        if (bottleneck_transformer && stage_res(enc_stages) % bottleneck_grid() != 0) {
            throw ConfigError("model: patch grid does not divide the bottleneck");
        }
    }

    /// Stable text form; its FNV-1a hash is the checkpoint digest.
    std::string canonical() const {
        std::ostringstream os;
        os << "variant=" << variant << "\nin_res=" << in_res << "\nout_res=" << out_res << "\nch=" << ch
           << "\nenc_stages=" << enc_stages << "\ndec_stages=" << dec_stages << "\nchannel_cap=" << channel_cap
           << "\npatch_grid=" << patch_grid << "\nd_item=" << transformer.d_item << "\nn_heads=" << transformer.n_heads
           << "\nd_hidden=" << transformer.d_hidden << "\nuse_spread=" << use_spread << "\nuse_ge=" << use_ge
           << "\nuse_pe=" << use_pe << "\nuse_spread_skip=" << use_spread_skip
           << "\nbottleneck_transformer=" << bottleneck_transformer << '\n';
        return os.str();
    }

    /// Inverse of canonical(); unknown or missing keys are format errors.
    static ModelConfig from_canonical(std::string_view text) {
        ModelConfig c;
        std::istringstream in{std::string(text)};
        std::string line;
        int seen = 0;
        auto num = [](const std::string& v) -> Index {
            Index x = 0;
            const auto* end = v.data() + v.size();
            const auto r = std::from_chars(v.data(), end, x);
            if (r.ec != std::errc{} || r.ptr != end) throw FormatError("model config: bad integer '" + v + "'");
            return x;
        };
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw FormatError("model config: missing '=' in '" + line + "'");
            const std::string k = line.substr(0, eq), v = line.substr(eq + 1);
            ++seen;
            if (k == "variant") c.variant = v;
            else if (k == "in_res") c.in_res = num(v);
            else if (k == "out_res") c.out_res = num(v);
            else if (k == "ch") c.ch = num(v);
            else if (k == "enc_stages") c.enc_stages = num(v);
            else if (k == "dec_stages") c.dec_stages = num(v);
            else if (k == "channel_cap") c.channel_cap = num(v);
            else if (k == "patch_grid") c.patch_grid = num(v);
            else if (k == "d_item") c.transformer.d_item = num(v);
            else if (k == "n_heads") c.transformer.n_heads = num(v);
            else if (k == "d_hidden") c.transformer.d_hidden = num(v);
            else if (k == "use_spread") c.use_spread = num(v) != 0;
            else if (k == "use_ge") c.use_ge = num(v) != 0;
            else if (k == "use_pe") c.use_pe = num(v) != 0;
            else if (k == "use_spread_skip") c.use_spread_skip = num(v) != 0;
            else if (k == "bottleneck_transformer") c.bottleneck_transformer = num(v) != 0;
            else throw FormatError("model config: unknown key '" + k + "'");
        }
        if (seen != 16) throw FormatError("model config: expected 16 keys, got " + std::to_string(seen));
        return c;
    }

    std::uint64_t digest() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

/// Variant flags on top of the size fields of `base`.
inline ModelConfig build_variant(std::string_view name, ModelConfig base = {}) {
    base.variant = std::string(name);
    base.use_spread = base.use_ge = base.use_pe = base.use_spread_skip = base.bottleneck_transformer = false;
    if (name == "radionet") {
        base.use_spread = base.use_ge = base.use_spread_skip = true;
    } else if (name == "radionet_no_skip") {
        base.use_spread = base.use_ge = true;
    } else if (name == "radionet_no_ge") {
        base.use_spread = base.use_spread_skip = true;
    } else if (name == "radionet_pe") {
        base.use_spread = base.use_spread_skip = base.use_pe = true;
    } else if (name == "unet") {
    } else if (name == "transunet") {
        base.bottleneck_transformer = base.use_pe = true;
    } else {
        throw ConfigError("unknown variant '" + std::string(name) + "'; valid: " + variant_list());
    }
    return base;
}

/// Tiny configuration for gradient checks: 32x32 input, ch 4, d_item 32.
inline ModelConfig tiny_config(std::string_view variant = "radionet") {
    ModelConfig c;
    c.in_res = 32;
    c.out_res = 16;
    c.ch = 4;
    c.enc_stages = 3;
    c.dec_stages = 2;
    c.transformer = {32, 4, 64};
    return build_variant(variant, c);
}

}  // namespace radionet
