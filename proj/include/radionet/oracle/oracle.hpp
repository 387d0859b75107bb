// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// 2.5-D ray-launching radio map.
//
// n_rays directions, uniform in azimuth, leave the transmitter. A ray is a
// chain of straight branches; along a branch every wall crossing either
//   - passes the ray over the roof for receivers far enough away: with the
//     height profile h(s) a receiver at unfolded distance D sees past a wall
//     of height H crossed at s iff D >= (tx_h - rx_h) * s / (tx_h - H), or
//   - reflects it specularly (wall hit from outside, bounce budget left),
//     the reflected branch serving only receivers below that clearance.
// So each branch piece carries an interval [d_min, d_max) of receiver
// distances for which it is unobstructed.
//
// A cell is captured by a branch when its centre lies within half a cell
// diagonal of it. The receiver distance is D = s0 + |centre - origin| with
// s0 the unfolded length before the branch, i.e. the distance to the image
// source. Its contribution is
//   P_tx - FSPL(sqrt(D^2 + (tx_h - rx_h)^2)) - bounces * reflection_loss - foliage
// in dB, or nothing when the piece is obstructed for that D. Foliage is the
// 2-D chord through each canopy disk times tree_loss * height / 50 m.
//
// Many rays capture the same cell along the same geometric path. Per cell
// the captures of each path (keyed by the sequence of reflecting walls) are
// averaged in linear power, obstructed captures counting as zero, and the
// path averages are summed. Cells no path reaches read power_min.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/rng.hpp"
#include "radionet/core/tensor.hpp"
#include "radionet/oracle/geometry.hpp"
#include "radionet/scene/scene.hpp"

namespace radionet {

/// Free-space path loss in dB, d in metres, f in GHz.
inline double fspl(double d_m, double f_ghz) {
    if (!(d_m > 0)) throw DomainError("fspl: distance must be positive, got " + std::to_string(d_m));
    if (!(f_ghz > 0)) throw DomainError("fspl: frequency must be positive, got " + std::to_string(f_ghz));
    return 20.0 * std::log10(d_m / 1000.0) + 20.0 * std::log10(f_ghz * 1000.0) + 32.45;
}

/// Transmit power (dB) reading -70 dB at 10 m in free space at 5.78 GHz.
inline double tx_power_db() { return -70.0 + fspl(10.0, 5.78); }

struct OracleConfig {
    int n_rays = 14400;
    int max_bounces = 5;
    double reflection_loss_db = 6.0;
    /// dB per metre of canopy for a 50 m tree, scaled by height / 50 m.
    double tree_loss_db_per_m = 0.5;
    double rx_height = 1.5;
    double power_min = -250.0;
    double power_max = -70.0;

    void validate() const {
        if (n_rays < 360) throw ConfigError("oracle: n_rays must be >= 360");
        if (max_bounces < 0 || max_bounces > 5) throw ConfigError("oracle: max_bounces must be in [0, 5]");
        if (!(power_max > power_min)) throw ConfigError("oracle: power_max must exceed power_min");
        if (reflection_loss_db < 0 || tree_loss_db_per_m < 0) throw ConfigError("oracle: losses must be >= 0");
    }
};

struct RadioMap {
    Index height = 0, width = 0;
    double power_min = -250.0, power_max = -70.0;
    std::vector<float> power_db;
    std::vector<float> normalized;

    float db(Index i, Index j) const { return power_db[static_cast<std::size_t>(i * width + j)]; }

    static float normalize(double db, double lo, double hi) { return static_cast<float>((db - lo) / (hi - lo)); }

    /// Builds both views from dB values, clamping into [power_min, power_max].
    static RadioMap from_db(Index H, Index W, std::vector<double> db, double lo, double hi) {
        RadioMap m;
        m.height = H;
        m.width = W;
        m.power_min = lo;
        m.power_max = hi;
        m.power_db.resize(db.size());
        m.normalized.resize(db.size());
        for (std::size_t k = 0; k < db.size(); ++k) {
            const double v = std::clamp(db[k], lo, hi);
            m.power_db[k] = static_cast<float>(v);
            m.normalized[k] = normalize(m.power_db[k], lo, hi);
        }
        return m;
    }

    /// Inverse of the normalization, for predicted maps.
    static RadioMap from_normalized(Index H, Index W, std::span<const float> norm, double lo, double hi) {
        std::vector<double> db(norm.size());
        for (std::size_t k = 0; k < norm.size(); ++k) db[k] = lo + static_cast<double>(norm[k]) * (hi - lo);
        return from_db(H, W, std::move(db), lo, hi);
    }

    Tensor to_tensor() const { return Tensor({1, height, width}, normalized); }
};

namespace oracle_detail {

struct Branch {
    double ox, oy, dx, dy;
    double s0;
    double d_min, d_max;
    double foliage_db;
    int bounces;
    std::uint64_t path;
    int skip_wall;
};

struct PathAccum {
    std::uint64_t path;
    double sum;
    std::uint32_t count;
};

struct Crossing {
    double t;
    std::size_t wall;
};

struct Chord {
    double a, b, rate;
};

inline std::uint64_t extend_path(std::uint64_t path, std::size_t wall) {
    return splitmix64_mix(path ^ ((static_cast<std::uint64_t>(wall) + 1) * 0x9e3779b97f4a7c15ULL));
}

class Tracer {
public:
    Tracer(const SceneSpec& scene, const OracleConfig& cfg, Index H, Index W)
        : scene_(scene), cfg_(cfg), H_(H), W_(W), walls_(building_walls(scene)) {
        cw_ = scene.world_size / static_cast<double>(W);
        ch_ = scene.world_size / static_cast<double>(H);
        radius_ = 0.5 * std::hypot(cw_, ch_);
        dh_ = scene.tx.height - cfg.rx_height;
        p_tx_ = tx_power_db();
        cells_.resize(static_cast<std::size_t>(H * W));
    }

    RadioMap run() {
        std::vector<Branch> stack;
        for (int k = 0; k < cfg_.n_rays; ++k) {
            const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(cfg_.n_rays);
            stack.push_back({scene_.tx.x, scene_.tx.y, std::cos(theta), std::sin(theta), 0.0, 0.0,
                             std::numeric_limits<double>::infinity(), 0.0, 0, 0, -1});
            while (!stack.empty()) {
                const Branch b = stack.back();
                stack.pop_back();
                trace(b, stack);
            }
        }
        std::vector<double> db(cells_.size(), cfg_.power_min);
        for (std::size_t c = 0; c < cells_.size(); ++c) {
            double linear = 0.0;
            for (const auto& p : cells_[c]) linear += p.sum / p.count;
            if (linear > 0.0) db[c] = 10.0 * std::log10(linear);
        }
        return RadioMap::from_db(H_, W_, std::move(db), cfg_.power_min, cfg_.power_max);
    }

private:
    double exit_distance(const Branch& b) const {
        const double S = scene_.world_size;
        double t = std::numeric_limits<double>::infinity();
        if (b.dx > 1e-15) t = std::min(t, (S - b.ox) / b.dx);
        if (b.dx < -1e-15) t = std::min(t, -b.ox / b.dx);
        if (b.dy > 1e-15) t = std::min(t, (S - b.oy) / b.dy);
        if (b.dy < -1e-15) t = std::min(t, -b.oy / b.dy);
        return std::max(0.0, t);
    }

    /// Receivers with D below this are obstructed by a wall of height H at s.
    double clearance(double s, double H) const {
        if (scene_.tx.height <= H) return std::numeric_limits<double>::infinity();
        return dh_ * s / (scene_.tx.height - H);
    }

    void trace(const Branch& b, std::vector<Branch>& stack) {
        const double t_exit = exit_distance(b);
        crossings_.clear();
        for (std::size_t w = 0; w < walls_.size(); ++w) {
            if (static_cast<int>(w) == b.skip_wall) continue;
            const auto t = intersect_wall(b.ox, b.oy, b.dx, b.dy, walls_[w]);
            if (t && *t < t_exit) crossings_.push_back({*t, w});
        }
        std::sort(crossings_.begin(), crossings_.end(),
                  [](const Crossing& a, const Crossing& c) { return a.t < c.t || (a.t == c.t && a.wall < c.wall); });

        // piece k spans [breaks_[k], breaks_[k+1]) with receiver bound d_min_[k]
        breaks_.assign(1, 0.0);
        d_min_.assign(1, b.d_min);
        double t_end = t_exit;
        for (const auto& c : crossings_) {
            const Wall& w = walls_[c.wall];
            const double clear = clearance(b.s0 + c.t, w.height);
            const double lo = d_min_.back();
            const bool outside = b.dx * w.nx + b.dy * w.ny < 0.0;
            if (outside && b.bounces < cfg_.max_bounces && lo < std::min(b.d_max, clear)) {
                const double hx = b.ox + c.t * b.dx, hy = b.oy + c.t * b.dy;
                const double rdx = w.nx != 0.0 ? -b.dx : b.dx;
                const double rdy = w.ny != 0.0 ? -b.dy : b.dy;
                reflections_.push_back({hx, hy, rdx, rdy, b.s0 + c.t, lo, std::min(b.d_max, clear), 0.0,
                                        b.bounces + 1, extend_path(b.path, c.wall), static_cast<int>(c.wall)});
            }
            const double next = std::max(lo, clear);
            if (next >= b.d_max) {
                t_end = c.t;
                break;
            }
            breaks_.push_back(c.t);
            d_min_.push_back(next);
        }
        breaks_.push_back(t_end);

        collect_chords(b, t_end);
        // foliage is path state: reflected branches start with what was accumulated up to the wall
        for (auto& r : reflections_) {
            r.foliage_db = b.foliage_db + foliage(std::hypot(r.ox - b.ox, r.oy - b.oy));
        }
        capture(b, t_end);
        // push in reverse so branches are traced in crossing order
        for (auto it = reflections_.rbegin(); it != reflections_.rend(); ++it) stack.push_back(*it);
        reflections_.clear();
    }

    void collect_chords(const Branch& b, double t_end) {
        chords_.clear();
        constexpr double r = kTreeCanopyRadius;
        for (const auto& tr : scene_.trees) {
            const double qx = tr.x - b.ox, qy = tr.y - b.oy;
            const double along = qx * b.dx + qy * b.dy;
            const double perp2 = qx * qx + qy * qy - along * along;
            if (perp2 >= r * r) continue;
            const double half = std::sqrt(r * r - perp2);
            const double a = std::max(0.0, along - half), e = std::min(t_end, along + half);
            if (e <= a) continue;
            chords_.push_back({a, e, cfg_.tree_loss_db_per_m * tr.height / 50.0});
        }
    }

    double foliage(double tau) const {
        double loss = 0.0;
        for (const auto& c : chords_) {
            if (tau > c.a) loss += c.rate * (std::min(tau, c.b) - c.a);
        }
        return loss;
    }

    void capture(const Branch& b, double t_end) {
        const double R = radius_;
        // rows whose centres can be within R of the segment
        const double y_lo = std::min(b.oy, b.oy + t_end * b.dy) - R;
        const double y_hi = std::max(b.oy, b.oy + t_end * b.dy) + R;
        const auto i0 = std::max<Index>(0, static_cast<Index>(std::ceil(y_lo / ch_ - 0.5)));
        const auto i1 = std::min<Index>(H_ - 1, static_cast<Index>(std::floor(y_hi / ch_ - 0.5)));
        for (Index i = i0; i <= i1; ++i) {
            const double yc = (static_cast<double>(i) + 0.5) * ch_;
            const double ry = yc - b.oy;
            // band |(x - ox) dy - ry dx| <= R intersected with 0 <= tau <= t_end
            double x_lo = -std::numeric_limits<double>::infinity(), x_hi = std::numeric_limits<double>::infinity();
            if (std::abs(b.dy) > 1e-12) {
                const double c0 = b.ox + (ry * b.dx - R) / b.dy, c1 = b.ox + (ry * b.dx + R) / b.dy;
                x_lo = std::min(c0, c1);
                x_hi = std::max(c0, c1);
            } else if (std::abs(ry * b.dx) > R) {
                continue;
            }
            if (std::abs(b.dx) > 1e-12) {
                const double c0 = b.ox + (0.0 - ry * b.dy) / b.dx, c1 = b.ox + (t_end - ry * b.dy) / b.dx;
                x_lo = std::max(x_lo, std::min(c0, c1));
                x_hi = std::min(x_hi, std::max(c0, c1));
            } else {
                const double tau = ry * b.dy;
                if (tau < 0.0 || tau > t_end) continue;
            }
            const auto j0 = std::max<Index>(0, static_cast<Index>(std::ceil(x_lo / cw_ - 0.5)));
            const auto j1 = std::min<Index>(W_ - 1, static_cast<Index>(std::floor(x_hi / cw_ - 0.5)));
            for (Index j = j0; j <= j1; ++j) {
                const double xc = (static_cast<double>(j) + 0.5) * cw_;
                const double rx = xc - b.ox;
                const double tau = rx * b.dx + ry * b.dy;
                const double D = b.s0 + std::hypot(rx, ry);
                const auto piece = static_cast<std::size_t>(
                    std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, tau) - breaks_.begin() - 1);
                double linear = 0.0;
                if (D >= d_min_[piece] && D < b.d_max) {
                    const double d3 = std::sqrt(D * D + dh_ * dh_);
                    const double p_db = p_tx_ - fspl(d3, scene_.freq_ghz) - b.bounces * cfg_.reflection_loss_db -
                                        b.foliage_db - foliage(std::clamp(tau, 0.0, t_end));
                    linear = std::pow(10.0, p_db / 10.0);
                }
                add(static_cast<std::size_t>(i * W_ + j), b.path, linear);
            }
        }
    }

    void add(std::size_t cell, std::uint64_t path, double linear) {
        auto& acc = cells_[cell];
        for (auto& p : acc) {
            if (p.path == path) {
                p.sum += linear;
                ++p.count;
                return;
            }
        }
        acc.push_back({path, linear, 1});
    }

    const SceneSpec& scene_;
    const OracleConfig& cfg_;
    Index H_, W_;
    std::vector<Wall> walls_;
    double cw_, ch_, radius_, dh_, p_tx_;
    std::vector<std::vector<PathAccum>> cells_;
    std::vector<Crossing> crossings_;
    std::vector<double> breaks_, d_min_;
    std::vector<Chord> chords_;
    std::vector<Branch> reflections_;
};

}  // namespace oracle_detail

inline RadioMap trace_radio_map(const SceneSpec& scene, const OracleConfig& cfg, Index H, Index W) {
    cfg.validate();
    if (H < 1 || W < 1) throw ContractError("trace_radio_map: empty output grid");
    if (scene.inside_building(scene.tx.x, scene.tx.y)) {
        throw ContractError("trace_radio_map: transmitter inside a building");
    }
    if (!(scene.tx.x >= 0 && scene.tx.x <= scene.world_size && scene.tx.y >= 0 && scene.tx.y <= scene.world_size)) {
        throw ContractError("trace_radio_map: transmitter outside the world");
    }
    if (!(scene.tx.height > cfg.rx_height)) {
        throw ContractError("trace_radio_map: transmitter must be above receiver height");
    }
    return oracle_detail::Tracer(scene, cfg, H, W).run();
}

}  // namespace radionet
