// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Urban scene description and the seeded generator.
//
// Coordinates are metres in [0, world_size]^2; x grows with the column
// index of rasters, y with the row index. Buildings are unions of
// non-overlapping axis-aligned rectangles (rectangular, L, T or H
// footprints), extruded to a single height. Trees are canopy disks of
// fixed radius along road corridors.
//
// Layout: the world is cut along x and along y into alternating road
// corridors and lots. Each lot can hold one building inset by a setback.
// Trees line both edges of every corridor.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/rng.hpp"

namespace radionet {

struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    /// Half-open on the max side so tiled rects never both claim a point.
    bool contains(double x, double y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

    bool operator==(const Rect&) const = default;
};

enum class ShapeFamily { rect, l_shape, t_shape, h_shape };

inline constexpr std::array<std::string_view, 4> kShapeNames{"rect", "L", "T", "H"};

inline std::string_view shape_name(ShapeFamily s) { return kShapeNames[static_cast<std::size_t>(s)]; }

inline ShapeFamily parse_shape(std::string_view name) {
    for (std::size_t i = 0; i < kShapeNames.size(); ++i) {
        if (kShapeNames[i] == name) return static_cast<ShapeFamily>(i);
    }
    throw FormatError("unknown building shape '" + std::string(name) + "'");
}

struct Building {
    ShapeFamily shape = ShapeFamily::rect;
    double height = 0;
    std::vector<Rect> parts;

    bool contains(double x, double y) const {
        return std::any_of(parts.begin(), parts.end(), [&](const Rect& r) { return r.contains(x, y); });
    }
    double area() const {
        double a = 0;
        for (const auto& r : parts) a += r.area();
        return a;
    }
    bool operator==(const Building&) const = default;

    Rect bounds() const {
        Rect b = parts.front();
        for (const auto& r : parts) {
            b.x0 = std::min(b.x0, r.x0);
            b.y0 = std::min(b.y0, r.y0);
            b.x1 = std::max(b.x1, r.x1);
            b.y1 = std::max(b.y1, r.y1);
        }
        return b;
    }
};

struct Tree {
    double x = 0, y = 0, height = 0;
    bool operator==(const Tree&) const = default;
};

struct Transmitter {
    double x = 0, y = 0, height = 0;
    bool operator==(const Transmitter&) const = default;
};

inline constexpr double kTreeCanopyRadius = 3.0;

struct SceneSpec {
    double world_size = 512.0;
    std::vector<Building> buildings;
    std::vector<Tree> trees;
    Transmitter tx;
    double freq_ghz = 5.78;

    bool inside_building(double x, double y) const {
        return std::any_of(buildings.begin(), buildings.end(), [&](const Building& b) { return b.contains(x, y); });
    }

    bool operator==(const SceneSpec&) const = default;
};

struct Range {
    double lo, hi;
    double sample(Rng& rng) const { return rng.uniform(lo, hi); }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct SceneParams {
    double world_size = 512.0;
    Range road_width{12.0, 24.0};
    Range lot_size{50.0, 110.0};
    double setback = 3.0;
    /// Target fraction of the world covered by building footprints.
    double building_density = 0.25;
    /// Exact building count when >= 0; overrides building_density.
    int building_count = -1;
    Range building_height{30.0, 70.0};
    Range tree_height{10.0, 50.0};
    Range tree_spacing{7.0, 13.0};
    Range tx_height{20.0, 80.0};
    Range freq_ghz{5.735, 5.825};
    int max_retries = 50;

    void validate() const {
        if (!(world_size > 0)) throw ConfigError("scene: world_size must be positive");
        if (building_density < 0 || building_density > 1) throw ConfigError("scene: building_density outside [0, 1]");
        if (setback < 0 || road_width.lo <= 0 || lot_size.lo <= 2 * setback || tree_spacing.lo <= 0) {
            throw ConfigError("scene: non-positive road, lot, spacing or setback");
        }
        if (max_retries < 1) throw ConfigError("scene: max_retries must be >= 1");
    }
};

/// Frequency channel normalization.
inline constexpr double kFreqMinGhz = 5.735;
inline constexpr double kFreqMaxGhz = 5.825;

namespace scene_detail {

struct Interval {
    double lo, hi;
};

/// Alternating road/lot cut of [0, size], starting with a road. A remainder
/// too short for a lot widens the final road; the last lot may run to the
/// world edge. Returns lots and appends roads.
inline std::vector<Interval> cut_axis(double size, const SceneParams& p, Rng& rng, std::vector<Interval>& roads) {
    std::vector<Interval> lots;
    double pos = 0.0;
    while (true) {
        const double road = p.road_width.sample(rng);
        roads.push_back({pos, std::min(size, pos + road)});
        pos += road;
        if (size - pos < p.lot_size.lo) {
            roads.back().hi = size;
            break;
        }
        double lot = p.lot_size.sample(rng);
        if (size - (pos + lot) < p.road_width.lo + p.lot_size.lo) lot = size - pos;
        lots.push_back({pos, pos + lot});
        pos += lot;
        if (pos >= size) break;
    }
    return lots;
}

/// Footprint parts inside `box` in unit coordinates, then oriented.
inline std::vector<Rect> shape_parts(ShapeFamily shape, const Rect& box, Rng& rng) {
    // unit-square rects, (u, v) in [0,1]^2
    std::vector<Rect> unit;
    switch (shape) {
        case ShapeFamily::rect:
            unit = {{0, 0, 1, 1}};
            break;
        case ShapeFamily::l_shape: {
            const double a = rng.uniform(0.35, 0.5);
            unit = {{0, 0, a, 1}, {a, 0, 1, a}};
            break;
        }
        case ShapeFamily::t_shape: {
            const double a = rng.uniform(0.3, 0.45);
            unit = {{0, 1 - a, 1, 1}, {0.5 - a / 2, 0, 0.5 + a / 2, 1 - a}};
            break;
        }
        case ShapeFamily::h_shape: {
            const double a = rng.uniform(0.25, 0.35);
            const double c = rng.uniform(0.25, 0.4);
            unit = {{0, 0, a, 1}, {1 - a, 0, 1, 1}, {a, 0.5 - c / 2, 1 - a, 0.5 + c / 2}};
            break;
        }
    }
    const bool swap_uv = rng.bernoulli(0.5);
    const bool flip_u = rng.bernoulli(0.5);
    const bool flip_v = rng.bernoulli(0.5);
    std::vector<Rect> out;
    for (Rect r : unit) {
        if (swap_uv) r = {r.y0, r.x0, r.y1, r.x1};
        if (flip_u) r = {1 - r.x1, r.y0, 1 - r.x0, r.y1};
        if (flip_v) r = {r.x0, 1 - r.y1, r.x1, 1 - r.y0};
        out.push_back({box.x0 + r.x0 * box.width(), box.y0 + r.y0 * box.height(), box.x0 + r.x1 * box.width(),
                       box.y0 + r.y1 * box.height()});
    }
    return out;
}

inline bool inside_any(const std::vector<Interval>& ivs, double v) {
    return std::any_of(ivs.begin(), ivs.end(), [&](const Interval& i) { return v >= i.lo && v < i.hi; });
}

/// Trees along both edges of every corridor, 1.5 m into the road, skipping
/// crossings with perpendicular corridors.
inline void plant_trees(double size, const std::vector<Interval>& along, const std::vector<Interval>& across,
                        bool vertical, const SceneParams& p, Rng& rng, std::vector<Tree>& trees) {
    constexpr double kInset = 1.5;
    for (const auto& road : along) {
        if (road.hi - road.lo < 2 * kInset) continue;
        for (double edge : {road.lo + kInset, road.hi - kInset}) {
            for (double t = rng.uniform(0.0, p.tree_spacing.hi); t < size; t += p.tree_spacing.sample(rng)) {
                const double height = p.tree_height.sample(rng);
                if (inside_any(across, t)) continue;
                trees.push_back(vertical ? Tree{edge, t, height} : Tree{t, edge, height});
            }
        }
    }
}

inline std::optional<SceneSpec> try_generate(const SceneParams& p, Rng& rng) {
    SceneSpec scene;
    scene.world_size = p.world_size;
    std::vector<Interval> roads_x, roads_y;
    const auto lots_x = cut_axis(p.world_size, p, rng, roads_x);
    const auto lots_y = cut_axis(p.world_size, p, rng, roads_y);

    std::vector<Rect> lots;
    for (const auto& ly : lots_y) {
        for (const auto& lx : lots_x) lots.push_back({lx.lo, ly.lo, lx.hi, ly.hi});
    }
    rng.shuffle(std::span(lots));

    const double world_area = p.world_size * p.world_size;
    const bool by_count = p.building_count >= 0;
    if (by_count && static_cast<std::size_t>(p.building_count) > lots.size()) return std::nullopt;
    double covered = 0.0;
    for (const auto& lot : lots) {
        if (by_count ? scene.buildings.size() >= static_cast<std::size_t>(p.building_count)
                     : covered >= p.building_density * world_area) {
            break;
        }
        const Rect inner{lot.x0 + p.setback, lot.y0 + p.setback, lot.x1 - p.setback, lot.y1 - p.setback};
        const double w = inner.width() * rng.uniform(0.75, 1.0);
        const double h = inner.height() * rng.uniform(0.75, 1.0);
        const double bx = inner.x0 + rng.uniform(0.0, inner.width() - w);
        const double by = inner.y0 + rng.uniform(0.0, inner.height() - h);
        Building b;
        b.shape = static_cast<ShapeFamily>(rng.below(4));
        b.height = p.building_height.sample(rng);
        b.parts = shape_parts(b.shape, {bx, by, bx + w, by + h}, rng);
        covered += b.area();
        scene.buildings.push_back(std::move(b));
    }
    if (!by_count && covered < p.building_density * world_area) return std::nullopt;

    plant_trees(p.world_size, roads_x, roads_y, true, p, rng, scene.trees);
    plant_trees(p.world_size, roads_y, roads_x, false, p, rng, scene.trees);

    constexpr int kTxAttempts = 1000;
    for (int i = 0; i < kTxAttempts; ++i) {
        const double x = rng.uniform(0.0, p.world_size), y = rng.uniform(0.0, p.world_size);
        if (!scene.inside_building(x, y)) {
            scene.tx = {x, y, p.tx_height.sample(rng)};
            scene.freq_ghz = p.freq_ghz.sample(rng);
            return scene;
        }
    }
    return std::nullopt;
}

}  // namespace scene_detail

/// Pure function of (rng state, params). Infeasible targets (density the
/// lots cannot hold, more buildings than lots, no free tx spot) are retried
/// with fresh layouts and then reported as GenerationError.
inline SceneSpec generate_scene(Rng& rng, const SceneParams& params = {}) {
    params.validate();
    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        if (auto scene = scene_detail::try_generate(params, rng)) return std::move(*scene);
    }
    throw GenerationError("scene generation failed after " + std::to_string(params.max_retries) +
                          " attempts (density " + std::to_string(params.building_density) + ", count " +
                          std::to_string(params.building_count) + ")");
}

inline SceneSpec generate_scene(std::uint64_t seed, const SceneParams& params = {}) {
    Rng rng(seed);
    return generate_scene(rng, params);
}

/// Checks the range and placement invariants; empty string when valid.
inline std::string scene_violation(const SceneSpec& s, const SceneParams& p = {}) {
    for (const auto& b : s.buildings) {
        if (!p.building_height.contains(b.height)) return "building height out of range";
        if (b.parts.empty()) return "building without footprint";
    }
    for (std::size_t i = 0; i < s.buildings.size(); ++i) {
        const Rect a = s.buildings[i].bounds();
        for (std::size_t j = i + 1; j < s.buildings.size(); ++j) {
            const Rect b = s.buildings[j].bounds();
            if (a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1) return "overlapping buildings";
        }
    }
    for (const auto& t : s.trees) {
        if (!p.tree_height.contains(t.height)) return "tree height out of range";
    }
    if (!p.tx_height.contains(s.tx.height)) return "tx height out of range";
    if (!p.freq_ghz.contains(s.freq_ghz)) return "frequency out of range";
    if (s.inside_building(s.tx.x, s.tx.y)) return "tx inside building";
    return {};
}

}  // namespace radionet
