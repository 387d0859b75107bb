// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scene -> network input planes, all in [0, 1]:
//   building, tree  tallest covering object at the cell centre / 100 m
//   tx              single pixel, tx height / 100 m
//   freq            constant (f - 5.735) / 0.09
//   grid_x, grid_y  cell-centre coordinates (j + 0.5) / W, (i + 0.5) / H
// Row i spans y in [i, i+1) * world/H, column j spans x likewise.
#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "radionet/core/tensor.hpp"
#include "radionet/scene/scene.hpp"

namespace radionet {

inline constexpr double kHeightNormalizer = 100.0;

enum InputChannel : Index { kBuilding = 0, kTree = 1, kTx = 2, kFreq = 3, kGridX = 4, kGridY = 5 };
inline constexpr Index kInputChannels = 6;
inline constexpr Index kSceneChannels = 4;

struct InputFeatureMaps {
    Index height = 0, width = 0;
    std::array<std::vector<float>, kInputChannels> planes;

    float at(Index channel, Index i, Index j) const {
        return planes[static_cast<std::size_t>(channel)][static_cast<std::size_t>(i * width + j)];
    }

    /// [channels, H, W]; grid channels appended when with_grid.
    Tensor to_tensor(bool with_grid = true) const {
        const Index c = with_grid ? kInputChannels : kSceneChannels;
        std::vector<float> data;
        data.reserve(static_cast<std::size_t>(c * height * width));
        for (Index k = 0; k < c; ++k) data.insert(data.end(), planes[k].begin(), planes[k].end());
        return Tensor({c, height, width}, std::move(data));
    }
};

inline float grid_coordinate(Index index, Index size) {
    return static_cast<float>((static_cast<double>(index) + 0.5) / static_cast<double>(size));
}

inline float normalize_freq(double f_ghz) {
    return static_cast<float>((f_ghz - kFreqMinGhz) / (kFreqMaxGhz - kFreqMinGhz));
}

/// Cell containing a world point, clamped to the grid.
inline std::pair<Index, Index> world_to_cell(double x, double y, double world_size, Index H, Index W) {
    auto cell = [](double v, double world, Index n) {
        const auto k = static_cast<Index>(std::floor(v / world * static_cast<double>(n)));
        return std::clamp<Index>(k, 0, n - 1);
    };
    return {cell(y, world_size, H), cell(x, world_size, W)};
}

/// Tallest building / tree covering a world point, metres (0 when none).
inline double building_height_at(const SceneSpec& s, double x, double y) {
    double h = 0;
    for (const auto& b : s.buildings) {
        if (b.height > h && b.contains(x, y)) h = b.height;
    }
    return h;
}

inline double tree_height_at(const SceneSpec& s, double x, double y) {
    double h = 0;
    for (const auto& t : s.trees) {
        const double dx = x - t.x, dy = y - t.y;
        if (t.height > h && dx * dx + dy * dy <= kTreeCanopyRadius * kTreeCanopyRadius) h = t.height;
    }
    return h;
}

inline InputFeatureMaps rasterize_scene(const SceneSpec& s, Index H, Index W) {
    if (H < 8 || W < 8) throw ContractError("rasterize_scene: resolution must be at least 8x8");
    if (!(s.tx.x >= 0 && s.tx.x <= s.world_size && s.tx.y >= 0 && s.tx.y <= s.world_size)) {
        throw ContractError("rasterize_scene: transmitter outside world bounds");
    }
    InputFeatureMaps m;
    m.height = H;
    m.width = W;
    const auto n = static_cast<std::size_t>(H * W);
    for (auto& p : m.planes) p.assign(n, 0.0f);

    const double cw = s.world_size / static_cast<double>(W), ch = s.world_size / static_cast<double>(H);
    const float freq = normalize_freq(s.freq_ghz);
    for (Index i = 0; i < H; ++i) {
        for (Index j = 0; j < W; ++j) {
            const auto k = static_cast<std::size_t>(i * W + j);
            m.planes[kFreq][k] = freq;
            m.planes[kGridX][k] = grid_coordinate(j, W);
            m.planes[kGridY][k] = grid_coordinate(i, H);
        }
    }
    // Visit the cells whose centres may fall in [x0, x1] x [y0, y1].
    auto stamp = [&](double x0, double y0, double x1, double y1, auto covers, double height, Index plane) {
        const auto first = [](double v, double cell) { return static_cast<Index>(std::floor(v / cell - 0.5)); };
        const Index i0 = std::max<Index>(0, first(y0, ch)), i1 = std::min<Index>(H - 1, first(y1, ch) + 1);
        const Index j0 = std::max<Index>(0, first(x0, cw)), j1 = std::min<Index>(W - 1, first(x1, cw) + 1);
        auto& out = m.planes[static_cast<std::size_t>(plane)];
        const auto v = static_cast<float>(height / kHeightNormalizer);
        for (Index i = i0; i <= i1; ++i) {
            const double y = (static_cast<double>(i) + 0.5) * ch;
            for (Index j = j0; j <= j1; ++j) {
                const double x = (static_cast<double>(j) + 0.5) * cw;
                auto& cell = out[static_cast<std::size_t>(i * W + j)];
                if (v > cell && covers(x, y)) cell = v;
            }
        }
    };
    for (const auto& b : s.buildings) {
        for (const auto& r : b.parts) {
            stamp(r.x0, r.y0, r.x1, r.y1, [&](double x, double y) { return r.contains(x, y); }, b.height, kBuilding);
        }
    }
    constexpr double r = kTreeCanopyRadius;
    for (const auto& t : s.trees) {
        auto covers = [&](double x, double y) { return (x - t.x) * (x - t.x) + (y - t.y) * (y - t.y) <= r * r; };
        stamp(t.x - r, t.y - r, t.x + r, t.y + r, covers, t.height, kTree);
    }
    const auto [ti, tj] = world_to_cell(s.tx.x, s.tx.y, s.world_size, H, W);
    m.planes[kTx][static_cast<std::size_t>(ti * W + tj)] = static_cast<float>(s.tx.height / kHeightNormalizer);
    return m;
}

}  // namespace radionet
