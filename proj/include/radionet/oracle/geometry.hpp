// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Building walls and the 2.5-D ray kernel.
//
// Walls are the outer boundary of each footprint union; edges shared by two
// parts of one building are dropped. Each wall keeps its outward normal.
//
// A ray leaves the transmitter at height tx_h and is followed towards a
// receiver at height rx_h whose unfolded horizontal distance from the
// transmitter is path_length. At unfolded distance s its height is
//   h(s) = tx_h + (rx_h - tx_h) * s / path_length,
// and a wall of height H blocks it iff h(s) < H.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "radionet/scene/scene.hpp"

namespace radionet {

struct Wall {
    double x0, y0, x1, y1;
    double height;
    int building;
    /// Outward unit normal, axis-aligned.
    double nx, ny;
};

namespace oracle_detail {

inline void add_edge_pieces(const Building& b, int bi, std::size_t part, double fixed, double lo, double hi,
                            bool vertical, double nx, double ny, std::vector<Wall>& out) {
    // split at every coordinate of the other parts that falls inside the edge
    std::vector<double> cuts{lo, hi};
    for (std::size_t q = 0; q < b.parts.size(); ++q) {
        if (q == part) continue;
        const Rect& r = b.parts[q];
        const double ends[2] = {vertical ? r.y0 : r.x0, vertical ? r.y1 : r.x1};
        for (double c : ends) {
            if (c > lo && c < hi) cuts.push_back(c);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    constexpr double kProbe = 1e-6;
    bool open = false;
    double start = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        // a point just outside this piece lying in another part makes it interior
        const double px = vertical ? fixed + nx * kProbe : mid;
        const double py = vertical ? mid : fixed + ny * kProbe;
        bool interior = false;
        for (std::size_t q = 0; q < b.parts.size() && !interior; ++q) {
            interior = q != part && b.parts[q].contains(px, py);
        }
        if (!interior && !open) {
            open = true;
            start = cuts[k];
        }
        if ((interior || k + 2 == cuts.size()) && open) {
            const double end = interior ? cuts[k] : cuts[k + 1];
            if (vertical) {
                out.push_back({fixed, start, fixed, end, b.height, bi, nx, ny});
            } else {
                out.push_back({start, fixed, end, fixed, b.height, bi, nx, ny});
            }
            open = false;
        }
    }
}

}  // namespace oracle_detail

inline std::vector<Wall> building_walls(const SceneSpec& scene) {
    std::vector<Wall> walls;
    for (std::size_t bi = 0; bi < scene.buildings.size(); ++bi) {
        const Building& b = scene.buildings[bi];
        const int id = static_cast<int>(bi);
        for (std::size_t p = 0; p < b.parts.size(); ++p) {
            const Rect& r = b.parts[p];
            oracle_detail::add_edge_pieces(b, id, p, r.y0, r.x0, r.x1, false, 0, -1, walls);
            oracle_detail::add_edge_pieces(b, id, p, r.y1, r.x0, r.x1, false, 0, 1, walls);
            oracle_detail::add_edge_pieces(b, id, p, r.x0, r.y0, r.y1, true, -1, 0, walls);
            oracle_detail::add_edge_pieces(b, id, p, r.x1, r.y0, r.y1, true, 1, 0, walls);
        }
    }
    return walls;
}

/// Parameter t > 0 where o + t*d crosses the wall, if it does.
inline std::optional<double> intersect_wall(double ox, double oy, double dx, double dy, const Wall& w) {
    const double ex = w.x1 - w.x0, ey = w.y1 - w.y0;
    const double denom = dx * ey - dy * ex;
    if (std::abs(denom) < 1e-15) return std::nullopt;
    const double qx = w.x0 - ox, qy = w.y0 - oy;
    const double t = (qx * ey - qy * ex) / denom;
    const double u = (qx * dy - qy * dx) / denom;
    if (t <= 1e-9 || u < 0.0 || u > 1.0) return std::nullopt;
    return t;
}

struct HeightProfile {
    double tx_height = 0;
    double rx_height = 1.5;
    /// Unfolded horizontal distance from tx to the receiver; crossings
    /// beyond it are not on the path.
    double path_length = std::numeric_limits<double>::infinity();
    /// Unfolded distance already travelled when the ray starts at `origin`.
    double start_offset = 0;

    double height_at(double s) const {
        if (!std::isfinite(path_length)) return tx_height;
        return tx_height + (rx_height - tx_height) * s / path_length;
    }
};

struct RayHit {
    std::size_t wall;
    double distance;
};

/// Nearest wall that occludes the ray, or none. `direction` must be unit length.
inline std::optional<RayHit> ray_cast(double ox, double oy, double dx, double dy, const std::vector<Wall>& walls,
                                      const HeightProfile& h) {
    std::optional<RayHit> best;
    for (std::size_t i = 0; i < walls.size(); ++i) {
        const auto t = intersect_wall(ox, oy, dx, dy, walls[i]);
        if (!t) continue;
        const double s = h.start_offset + *t;
        if (s > h.path_length) continue;
        if (h.height_at(s) >= walls[i].height) continue;
        if (!best || *t < best->distance) best = RayHit{i, *t};
    }
    return best;
}

inline std::optional<RayHit> ray_cast(double ox, double oy, double dx, double dy, const SceneSpec& scene,
                                      const HeightProfile& h) {
    return ray_cast(ox, oy, dx, dy, building_walls(scene), h);
}

}  // namespace radionet
