// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/rng.hpp"

namespace radionet {

struct DatasetSplit {
    std::vector<std::size_t> train, val;
};

/// Seeded shuffle of [0, n), then floor(n * a / (a + b)) train indices and
/// the rest validation, keeping at least one index on each side.
inline DatasetSplit split_dataset(std::size_t n, unsigned ratio_train, unsigned ratio_val, std::uint64_t seed = 0) {
    if (n < 2) throw ContractError("split_dataset: need at least 2 samples");
    if (ratio_train == 0 || ratio_val == 0) throw ConfigError("split_dataset: ratio terms must be positive");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span(idx));
    const auto total = static_cast<std::uint64_t>(ratio_train) + ratio_val;
    auto n_train = static_cast<std::size_t>(static_cast<std::uint64_t>(n) * ratio_train / total);
    n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
    DatasetSplit s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.val.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return s;
}

}  // namespace radionet
