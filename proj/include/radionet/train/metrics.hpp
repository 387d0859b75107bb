// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Error metrics on normalized radio maps. One normalized unit spans the
// 180 dB clamp range, so an L1 of l is an average error of l * 180 dB.
#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "radionet/core/errors.hpp"
#include "radionet/core/tensor.hpp"

namespace radionet {

inline constexpr double kDbPerUnit = 180.0;
inline constexpr double kReliabilityThresholdDb = 10.0;

inline double l1_to_db(double l1) { return l1 * kDbPerUnit; }

enum class MapErrorAggregate { mean, max };

struct Metrics {
    double l1 = 0.0;
    double e_db = 0.0;
    double reliability = 0.0;
    double threshold_db = kReliabilityThresholdDb;
    /// Error of each map in dB, by the chosen aggregate.
    std::vector<double> per_map_errors;
};

/// Accumulates maps one at a time; `finish` yields the metrics.
class MetricsAccumulator {
public:
    explicit MetricsAccumulator(double threshold_db = kReliabilityThresholdDb,
                                MapErrorAggregate aggregate = MapErrorAggregate::mean)
        : threshold_db_(threshold_db), aggregate_(aggregate) {}

    void add_map(std::span<const float> pred, std::span<const float> target) {
        if (pred.size() != target.size() || pred.empty()) {
            throw DimensionError("metrics: prediction and target maps differ in size or are empty");
        }
        double sum = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            const double e = std::abs(static_cast<double>(pred[i]) - static_cast<double>(target[i]));
            sum += e;
            worst = std::max(worst, e);
        }
        abs_sum_ += sum;
        pixels_ += pred.size();
        const double map_l1 = sum / static_cast<double>(pred.size());
        errors_.push_back(aggregate_ == MapErrorAggregate::mean ? l1_to_db(map_l1) : l1_to_db(worst));
    }

    /// Adds every map of [B,1,h,w] prediction/target tensors.
    void add_batch(const Tensor& pred, const Tensor& target) {
        if (pred.shape() != target.shape() || pred.rank() != 4) {
            throw DimensionError("metrics: batch shapes " + shape_str(pred.shape()) + " and " +
                                 shape_str(target.shape()));
        }
        const auto per = static_cast<std::size_t>(pred.numel() / pred.dim(0));
        for (Index b = 0; b < pred.dim(0); ++b) {
            const auto off = static_cast<std::size_t>(b) * per;
            add_map(pred.data().subspan(off, per), target.data().subspan(off, per));
        }
    }

    std::size_t maps() const { return errors_.size(); }

    Metrics finish() const {
        if (errors_.empty()) throw ContractError("metrics: no maps evaluated");
        Metrics m;
        m.l1 = abs_sum_ / static_cast<double>(pixels_);
        m.e_db = l1_to_db(m.l1);
        m.threshold_db = threshold_db_;
        std::size_t good = 0;
        for (double e : errors_) good += e < threshold_db_;
        m.reliability = static_cast<double>(good) / static_cast<double>(errors_.size());
        m.per_map_errors = errors_;
        return m;
    }

private:
    double threshold_db_;
    MapErrorAggregate aggregate_;
    double abs_sum_ = 0.0;
    std::size_t pixels_ = 0;
    std::vector<double> errors_;
};

}  // namespace radionet
