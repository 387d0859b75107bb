// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// The five CLI commands as library calls. Progress goes to `log`;
// reports are written to files and returned as values.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "radionet/io/checkpoint.hpp"
#include "radionet/io/dataset.hpp"
#include "radionet/io/image.hpp"
#include "radionet/io/run_config.hpp"
#include "radionet/scene/scene_io.hpp"
#include "radionet/train/trainer.hpp"

namespace radionet {

/// Model init and training share the global seed; the two streams differ.
inline std::uint64_t model_init_seed(std::uint64_t seed) { return derive_seed(seed, 0x6d6f64656cULL); }

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// ---- gen-dataset ----

struct GenDatasetResult {
    Index count = 0;
    std::uint64_t checksum = 0;
};

/// With a non-empty `scenes_dir` every scene is also saved as scene_<i>.txt.
inline GenDatasetResult cmd_gen_dataset(const RunConfig& cfg, std::uint64_t seed, Index count, const std::string& out_path,
                                        std::ostream& log, const std::string& scenes_dir = {}) {
    cfg.validate();
    if (count < 1) throw ConfigError("gen-dataset: count must be >= 1");
    const auto spec = cfg.dataset_spec();
    DatasetWriter writer(out_path, spec.dims());
    if (!scenes_dir.empty()) std::filesystem::create_directories(scenes_dir);
    const Index step = std::max<Index>(1, count / 20);
    generate_samples(spec, seed, count, cfg.threads, [&](Index i, GeneratedSample&& s) {
        writer.append(s.input, s.target);
        if (!scenes_dir.empty()) save_scene(scenes_dir + "/scene_" + std::to_string(i) + ".txt", s.scene);
        if ((i + 1) % step == 0 || i + 1 == count) log << "gen-dataset: " << (i + 1) << "/" << count << "\n" << std::flush;
    });
    writer.close();
    GenDatasetResult r{count, file_checksum(out_path)};
    log << "gen-dataset: wrote " << out_path << " checksum " << hex64(r.checksum) << "\n";
    return r;
}

// ---- train ----

struct TrainRunOptions {
    std::string dataset;
    std::string out_checkpoint;
    std::string curves_csv;        // empty: <out_checkpoint>.csv
    std::string resume_checkpoint;  // empty: fresh model
};

struct TrainRunResult {
    std::vector<LogRow> curve;
    Index iterations = 0;
    double final_val_l1 = 0.0;
};

inline TrainRunResult train_on(const ModelConfig& mc, const TrainConfig& tc, const SampleSource& data, std::uint64_t seed,
                               const TrainRunOptions& opt, std::ostream& log) {
    TrainConfig t = tc;
    t.seed = seed;
    RadioNetModel model = RadioNetModel::init(mc, model_init_seed(seed));
    Trainer trainer(model, data, t);
    std::ios::openmode csv_mode = std::ios::trunc;
    if (!opt.resume_checkpoint.empty()) {
        const auto ck = load_checkpoint(opt.resume_checkpoint);
        restore_checkpoint(ck, model, &trainer.optimizer());
        trainer.set_iteration(static_cast<Index>(ck.iteration));
        csv_mode = std::ios::app;
        log << "train: resumed " << mc.variant << " at iteration " << ck.iteration << "\n";
    }
    const std::string csv_path = opt.curves_csv.empty() ? opt.out_checkpoint + ".csv" : opt.curves_csv;
    const bool fresh_csv = csv_mode == std::ios::trunc || !std::filesystem::exists(csv_path);
    std::ofstream csv(csv_path, csv_mode);
    if (!csv) throw std::runtime_error("cannot open '" + csv_path + "' for writing");
    if (fresh_csv) csv << "iteration,train_l1,val_l1\n";
    TrainRunResult r;
    r.curve = trainer.run([&](const LogRow& row) {
        const std::string line = curve_csv({row});
        csv << line.substr(line.find('\n') + 1) << std::flush;
        log << "train[" << mc.variant << "] it " << row.iteration << " train_l1 " << row.train_l1 << " val_l1 "
            << row.val_l1 << "\n"
            << std::flush;
    });
    r.iterations = trainer.iteration();
    r.final_val_l1 = r.curve.empty() ? trainer.validation_l1() : r.curve.back().val_l1;
    save_checkpoint(opt.out_checkpoint, capture_checkpoint(model, &trainer.optimizer(), static_cast<std::uint64_t>(trainer.iteration())));
    return r;
}

inline void require_dataset_matches(const SampleSource& data, const ModelConfig& mc) {
    const auto& d = data.dims();
    if (d.h_in != mc.in_res || d.w_in != mc.in_res || d.h_out != mc.out_res || d.w_out != mc.out_res ||
        d.c_in != kInputChannels) {
        throw ConfigError("dataset resolution " + std::to_string(d.h_in) + " -> " + std::to_string(d.h_out) +
                          " does not match model " + std::to_string(mc.in_res) + " -> " + std::to_string(mc.out_res));
    }
}

inline TrainRunResult cmd_train(const RunConfig& cfg, std::uint64_t seed, const TrainRunOptions& opt, std::ostream& log) {
    cfg.validate();
    const DatasetFile data(opt.dataset);
    const auto mc = cfg.model_config();
    require_dataset_matches(data, mc);
    return train_on(mc, cfg.train, data, seed, opt, log);
}

// ---- ablate ----

struct AblationRow {
    std::string variant;
    double val_l1 = 0.0;
    double e_db = 0.0;
    double reliability = 0.0;
    Index parameters = 0;
};

inline std::string format_ablation_table(const std::vector<AblationRow>& rows, Index iterations, std::uint64_t seed) {
    std::ostringstream os;
    os << "# Comparison of model variants (validation split, " << iterations << " iterations, seed " << seed << ")\n";
    os << std::left << std::setw(18) << "Model" << std::right << std::setw(12) << "Loss (L1)" << std::setw(10) << "e (dB)"
       << std::setw(13) << "Reliability" << std::setw(12) << "Params" << "\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(18) << r.variant << std::right << std::fixed << std::setprecision(4) << std::setw(12)
           << r.val_l1 << std::setprecision(2) << std::setw(10) << r.e_db << std::setprecision(1) << std::setw(12)
           << 100.0 * r.reliability << "%" << std::setw(12) << r.parameters << "\n";
    }
    return os.str();
}

inline std::vector<AblationRow> ablate_on(const RunConfig& cfg, const SampleSource& data, std::uint64_t seed,
                                          const std::string& out_dir, std::ostream& log) {
    std::filesystem::create_directories(out_dir);
    std::vector<AblationRow> rows;
    for (auto name : kVariantNames) {
        const auto mc = cfg.model_config(name);
        TrainRunOptions opt;
        opt.out_checkpoint = out_dir + "/" + std::string(name) + ".rnck";
        (void)train_on(mc, cfg.train, data, seed, opt, log);
        RadioNetModel model = RadioNetModel::init(mc, model_init_seed(seed));
        restore_checkpoint(load_checkpoint(opt.out_checkpoint), model);
        const auto split = split_dataset(static_cast<std::size_t>(data.size()), cfg.train.split_train, cfg.train.split_val, seed);
        const auto m = evaluate(model, data, split.val, cfg.train.eval_batch);
        rows.push_back({std::string(name), m.l1, m.e_db, m.reliability, parameter_count(model.parameters())});
        log << "ablate: " << name << " val_l1 " << m.l1 << "\n";
    }
    const std::string table = format_ablation_table(rows, cfg.train.iterations, seed);
    bin::write_file(out_dir + "/ablation.txt", table);
    return rows;
}

inline std::vector<AblationRow> cmd_ablate(const RunConfig& cfg, std::uint64_t seed, const std::string& dataset,
                                           const std::string& out_dir, std::ostream& log) {
    cfg.validate();
    const DatasetFile data(dataset);
    require_dataset_matches(data, cfg.model_config());
    return ablate_on(cfg, data, seed, out_dir, log);
}

// ---- predict ----

struct PredictResult {
    RadioMap prediction;
    std::optional<RadioMap> truth;
    std::optional<double> l1;
};

inline RadioNetModel model_from_checkpoint(const Checkpoint& ck) {
    RadioNetModel model = RadioNetModel::init(ck.model_config(), 0);
    restore_checkpoint(ck, model);
    return model;
}

/// Predicts the map of one scene file; with `with_truth` the oracle map is
/// traced too and an |error| image is written to `error_image`.
inline PredictResult cmd_predict(const RunConfig& cfg, const std::string& checkpoint, const std::string& scene_path,
                                 const std::string& out_image, bool with_truth, const std::string& error_image,
                                 std::ostream& log) {
    const auto model = model_from_checkpoint(load_checkpoint(checkpoint));
    const auto& mc = model.config();
    const SceneSpec scene = load_scene(scene_path);
    NoGradGuard guard;
    const auto maps = rasterize_scene(scene, mc.in_res, mc.in_res);
    const Tensor y = model.forward(reshape(maps.to_tensor(true), {1, kInputChannels, mc.in_res, mc.in_res}));
    PredictResult r;
    r.prediction = RadioMap::from_normalized(mc.out_res, mc.out_res, y.data(), cfg.oracle.power_min, cfg.oracle.power_max);
    write_pgm(out_image, mc.out_res, mc.out_res, power_pixels(r.prediction));
    if (with_truth) {
        r.truth = trace_radio_map(scene, cfg.oracle, mc.out_res, mc.out_res);
        MetricsAccumulator acc;
        acc.add_map(y.data(), r.truth->normalized);
        r.l1 = acc.finish().l1;
        if (!error_image.empty()) write_pgm(error_image, mc.out_res, mc.out_res, error_pixels(r.prediction, *r.truth));
        log << "predict: L1 " << *r.l1 << " (" << l1_to_db(*r.l1) << " dB)\n";
    }
    return r;
}

// ---- bench ----

struct BenchResult {
    BenchReport timing;
    Metrics metrics;
};

inline std::string format_bench_report(const BenchResult& b) {
    std::ostringstream os;
    os << std::setprecision(6);
    os << "scenes = " << b.timing.model_seconds.size() << "\n";
    os << "mean_model_latency_s = " << b.timing.mean_model << "\n";
    os << "mean_oracle_latency_s = " << b.timing.mean_oracle << "\n";
    os << "ratio = " << b.timing.ratio << "\n";
    os << "l1 = " << b.metrics.l1 << "\n";
    os << "e_db = " << b.metrics.e_db << "\n";
    os << "reliability = " << b.metrics.reliability << "\n";
    os << "# scene, model_s, oracle_s\n";
    for (std::size_t i = 0; i < b.timing.model_seconds.size(); ++i) {
        os << i << ", " << b.timing.model_seconds[i] << ", " << b.timing.oracle_seconds[i] << "\n";
    }
    return os.str();
}

/// Timing on `n_scenes` fresh scenes drawn from the seed, metrics on the
/// validation split of the dataset.
inline BenchResult cmd_bench(const RunConfig& cfg, std::uint64_t seed, const std::string& checkpoint,
                             const std::string& dataset, Index n_scenes, const std::string& report_path,
                             std::ostream& log) {
    const auto model = model_from_checkpoint(load_checkpoint(checkpoint));
    const DatasetFile data(dataset);
    require_dataset_matches(data, model.config());
    std::vector<SceneSpec> scenes;
    for (Index i = 0; i < n_scenes; ++i) {
        scenes.push_back(generate_scene(derive_seed(derive_seed(seed, 0x62656e6368ULL), static_cast<std::uint64_t>(i)), cfg.scene));
    }
    BenchResult b;
    b.timing = benchmark_inference(model, scenes, cfg.oracle);
    const auto split = split_dataset(static_cast<std::size_t>(data.size()), cfg.train.split_train, cfg.train.split_val, seed);
    b.metrics = evaluate(model, data, split.val, cfg.train.eval_batch);
    if (!report_path.empty()) bin::write_file(report_path, format_bench_report(b));
    log << "bench: model " << b.timing.mean_model * 1e3 << " ms, oracle " << b.timing.mean_oracle * 1e3 << " ms, ratio "
        << b.timing.ratio << ", reliability " << b.metrics.reliability << "\n";
    return b;
}

}  // namespace radionet
