// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Binary PGM (P5) output. Power maps use a linear dB ramp:
// power_min -> 0, power_max -> 255. Error maps use |error| in dB over
// [0, error_span_db] -> [0, 255].
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "radionet/io/binary.hpp"
#include "radionet/oracle/oracle.hpp"

namespace radionet {

inline std::uint8_t db_to_gray(double db, double power_min = -250.0, double power_max = -70.0) {
    const double t = std::clamp((db - power_min) / (power_max - power_min), 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(t * 255.0));
}

inline std::string encode_pgm(Index height, Index width, std::span<const std::uint8_t> pixels) {
    if (static_cast<Index>(pixels.size()) != height * width) throw DimensionError("pgm: pixel count does not match size");
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    return out;
}

inline std::vector<std::uint8_t> power_pixels(const RadioMap& m) {
    std::vector<std::uint8_t> px(m.power_db.size());
    for (std::size_t k = 0; k < px.size(); ++k) px[k] = db_to_gray(m.power_db[k], m.power_min, m.power_max);
    return px;
}

/// |pred - truth| in dB; 0 dB is black.
inline std::vector<std::uint8_t> error_pixels(const RadioMap& pred, const RadioMap& truth, double error_span_db = 60.0) {
    if (pred.power_db.size() != truth.power_db.size()) throw DimensionError("pgm: error map sizes differ");
    std::vector<std::uint8_t> px(pred.power_db.size());
    for (std::size_t k = 0; k < px.size(); ++k) {
        const double e = std::abs(static_cast<double>(pred.power_db[k]) - truth.power_db[k]);
        px[k] = static_cast<std::uint8_t>(std::lround(std::clamp(e / error_span_db, 0.0, 1.0) * 255.0));
    }
    return px;
}

inline void write_pgm(const std::string& path, Index height, Index width, std::span<const std::uint8_t> pixels) {
    bin::write_file(path, encode_pgm(height, width, pixels));
}

}  // namespace radionet
