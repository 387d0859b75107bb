// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Training loop, evaluation and the inference benchmark.
//
// The batch at iteration t is a pure function of (seed, t): training
// indices are visited in per-epoch permutations drawn from
// derive_seed(seed, epoch), so every variant trained with one seed sees the
// same data order, and a resumed run continues the exact schedule.
#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "radionet/model/radionet.hpp"
#include "radionet/oracle/oracle.hpp"
#include "radionet/scene/raster.hpp"
#include "radionet/scene/split.hpp"
#include "radionet/train/adam.hpp"
#include "radionet/train/data.hpp"
#include "radionet/train/metrics.hpp"

namespace radionet {

enum class LossKind { l1, l2 };

struct TrainConfig {
    float lr = 1e-4f;
    Index batch_size = 8;
    Index iterations = 20000;
    std::uint64_t seed = 0;
    unsigned split_train = 9;
    unsigned split_val = 1;
    LossKind loss = LossKind::l1;
    Index log_every = 100;
    /// Validation maps used for the logged val_l1; 0 uses the whole split.
    Index val_samples = 0;
    Index eval_batch = 16;

    void validate() const {
        if (!(lr >= 0.0f) || !std::isfinite(lr)) throw ConfigError("train: lr must be a finite value >= 0");
        if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
        if (iterations < 0) throw ConfigError("train: iterations must be >= 0");
        if (log_every < 1) throw ConfigError("train: log_every must be >= 1");
        if (eval_batch < 1) throw ConfigError("train: eval_batch must be >= 1");
        if (split_train == 0 || split_val == 0) throw ConfigError("train: split ratio terms must be positive");
    }
};

struct LogRow {
    Index iteration = 0;  // completed iterations
    double train_l1 = 0.0;
    double val_l1 = 0.0;
};

/// Training indices of iteration t.
inline std::vector<Index> batch_indices(std::uint64_t seed, Index iteration, Index batch_size,
                                        const std::vector<std::size_t>& train_ids) {
    const auto n = static_cast<Index>(train_ids.size());
    if (n == 0) throw ContractError("batch_indices: empty training split");
    std::vector<Index> out;
    out.reserve(static_cast<std::size_t>(batch_size));
    Index epoch = -1;
    std::vector<std::size_t> perm;
    for (Index k = 0; k < batch_size; ++k) {
        const Index pos = iteration * batch_size + k;
        if (pos / n != epoch) {
            epoch = pos / n;
            perm = train_ids;
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(epoch)));
            rng.shuffle(std::span(perm));
        }
        out.push_back(static_cast<Index>(perm[static_cast<std::size_t>(pos % n)]));
    }
    return out;
}

inline Tensor training_loss(const Tensor& pred, const Tensor& target, LossKind kind) {
    return kind == LossKind::l1 ? l1_loss(pred, target) : mse_loss(pred, target);
}

/// Metrics of `model` on the listed samples.
inline Metrics evaluate(const RadioNetModel& model, const SampleSource& data, const std::vector<std::size_t>& ids,
                        Index batch = 16, double threshold_db = kReliabilityThresholdDb,
                        MapErrorAggregate aggregate = MapErrorAggregate::mean) {
    if (ids.empty()) throw ContractError("evaluate: empty split");
    NoGradGuard guard;
    MetricsAccumulator acc(threshold_db, aggregate);
    for (std::size_t start = 0; start < ids.size(); start += static_cast<std::size_t>(batch)) {
        const std::size_t end = std::min(ids.size(), start + static_cast<std::size_t>(batch));
        std::vector<Index> chunk(ids.begin() + static_cast<std::ptrdiff_t>(start),
                                 ids.begin() + static_cast<std::ptrdiff_t>(end));
        const Batch b = make_batch(data, chunk);
        acc.add_batch(model.forward(b.input), b.target);
    }
    return acc.finish();
}

class Trainer {
public:
    Trainer(RadioNetModel& model, const SampleSource& data, TrainConfig cfg)
        : model_(model), data_(data), cfg_(cfg) {
        cfg_.validate();
        const auto& d = data.dims();
        const auto& mc = model.config();
        if (d.h_in != mc.in_res || d.w_in != mc.in_res || d.h_out != mc.out_res || d.w_out != mc.out_res ||
            d.c_in < mc.in_channels()) {
            throw ConfigError("train: dataset " + std::to_string(d.c_in) + "x" + std::to_string(d.h_in) + " -> " +
                              std::to_string(d.h_out) + " does not match model " + std::to_string(mc.in_res) +
                              " -> " + std::to_string(mc.out_res));
        }
        split_ = split_dataset(static_cast<std::size_t>(data.size()), cfg_.split_train, cfg_.split_val, cfg_.seed);
        val_ids_ = split_.val;
        if (cfg_.val_samples > 0 && static_cast<std::size_t>(cfg_.val_samples) < val_ids_.size()) {
            val_ids_.resize(static_cast<std::size_t>(cfg_.val_samples));
        }
        optim_ = Adam(model.parameters(), AdamConfig{cfg_.lr});
    }

    Adam& optimizer() { return optim_; }
    const DatasetSplit& split() const { return split_; }
    const TrainConfig& config() const { return cfg_; }
    Index iteration() const { return iteration_; }
    /// Resume point: the next step runs iteration `it`.
    void set_iteration(Index it) { iteration_ = it; }

    /// One optimizer step on the scheduled batch; returns its L1.
    double step() {
        const auto ids = batch_indices(cfg_.seed, iteration_, cfg_.batch_size, split_.train);
        const Batch b = make_batch(data_, ids);
        const Tensor pred = model_.forward(b.input);
        const Tensor loss = training_loss(pred, b.target, cfg_.loss);
        const double value = loss.item();
        if (!std::isfinite(value)) {
            throw DivergenceError("non-finite loss at iteration " + std::to_string(iteration_ + 1));
        }
        double l1 = value;
        if (cfg_.loss != LossKind::l1) {
            NoGradGuard g;
            l1 = l1_loss(pred.detach(), b.target).item();
        }
        backward(loss);
        optim_.step();
        optim_.zero_grad();
        ++iteration_;
        return l1;
    }

    double validation_l1() const { return evaluate(model_, data_, val_ids_, cfg_.eval_batch).l1; }

    /// Trains up to cfg.iterations, logging every log_every iterations and at the end.
    std::vector<LogRow> run(const std::function<void(const LogRow&)>& on_log = {}) {
        std::vector<LogRow> rows;
        double acc = 0.0;
        Index n = 0;
        while (iteration_ < cfg_.iterations) {
            acc += step();
            ++n;
            if (iteration_ % cfg_.log_every == 0 || iteration_ == cfg_.iterations) {
                LogRow row{iteration_, acc / static_cast<double>(n), validation_l1()};
                rows.push_back(row);
                if (on_log) on_log(row);
                acc = 0.0;
                n = 0;
            }
        }
        return rows;
    }

private:
    RadioNetModel& model_;
    const SampleSource& data_;
    TrainConfig cfg_;
    DatasetSplit split_;
    std::vector<std::size_t> val_ids_;
    Adam optim_;
    Index iteration_ = 0;
};

inline std::string curve_csv(const std::vector<LogRow>& rows) {
    std::string s = "iteration,train_l1,val_l1\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%lld,%.9g,%.9g\n", static_cast<long long>(r.iteration), r.train_l1, r.val_l1);
        s += buf;
    }
    return s;
}

struct BenchReport {
    std::vector<double> model_seconds, oracle_seconds;  // per scene
    double mean_model = 0.0, mean_oracle = 0.0;
    double ratio = 0.0;  // oracle / model
};

/// Per-scene wall clock of model inference (rasterization + forward) and of
/// oracle tracing on the same scenes.
inline BenchReport benchmark_inference(const RadioNetModel& model, const std::vector<SceneSpec>& scenes,
                                       const OracleConfig& oracle) {
    if (scenes.size() < 10) throw ContractError("benchmark_inference: needs at least 10 scenes");
    using clock = std::chrono::steady_clock;
    const auto& mc = model.config();
    NoGradGuard guard;
    auto infer = [&](const SceneSpec& s) {
        const auto maps = rasterize_scene(s, mc.in_res, mc.in_res);
        return model.forward(reshape(maps.to_tensor(true), {1, kInputChannels, mc.in_res, mc.in_res}));
    };
    (void)infer(scenes.front());  // warm-up
    BenchReport r;
    for (const auto& s : scenes) {
        auto t0 = clock::now();
        (void)infer(s);
        auto t1 = clock::now();
        (void)trace_radio_map(s, oracle, mc.out_res, mc.out_res);
        auto t2 = clock::now();
        r.model_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
        r.oracle_seconds.push_back(std::chrono::duration<double>(t2 - t1).count());
    }
    for (std::size_t i = 0; i < scenes.size(); ++i) {
        r.mean_model += r.model_seconds[i];
        r.mean_oracle += r.oracle_seconds[i];
    }
    r.mean_model /= static_cast<double>(scenes.size());
    r.mean_oracle /= static_cast<double>(scenes.size());
    r.ratio = r.mean_oracle / r.mean_model;
    return r;
}

}  // namespace radionet
