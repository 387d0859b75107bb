// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// radionet: dataset generation, training, ablation, prediction, benchmark.

#include <CLI11.hpp>

#include <iostream>

#include "radionet/app/commands.hpp"

namespace {

struct Overrides {
    std::string variant;
    long long iterations = -1;
    long long batch_size = -1;
    std::vector<std::string> sets;
};

radionet::RunConfig resolve(const std::string& config_path, const Overrides& o) {
    radionet::RunConfig cfg = config_path.empty() ? radionet::RunConfig{} : radionet::load_run_config(config_path);
    std::string extra;
    for (const auto& s : o.sets) extra += s + "\n";
    cfg = radionet::parse_run_config(extra, cfg);
    if (!o.variant.empty()) cfg = radionet::parse_run_config("model.variant = " + o.variant, cfg);
    if (o.iterations >= 0) cfg.train.iterations = o.iterations;
    if (o.batch_size >= 0) cfg.train.batch_size = o.batch_size;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RadioNet radio map prediction toolkit"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    std::string config_path;
    Overrides ov;
    // accepted before or after the subcommand name
    auto add_common = [&](CLI::App* a) {
        a->add_option("--seed", seed, "Global seed for scenes, initialization and data order")->capture_default_str();
        a->add_option("--config", config_path, "Run configuration file (key = value)")->check(CLI::ExistingFile);
        a->add_option("--set", ov.sets, "Extra 'key=value' assignment, applied after --config");
    };
    add_common(&app);

    auto* gen = app.add_subcommand("gen-dataset", "Generate scenes, trace oracle maps and write an RMAP dataset");
    std::string gen_out;
    long long gen_count = -1;
    gen->add_option("--out", gen_out, "Output dataset file")->required();
    gen->add_option("--count", gen_count, "Number of samples (default data.count)");
    std::string gen_scenes;
    gen->add_option("--scenes-dir", gen_scenes, "Also save every scene as <dir>/scene_<i>.txt");

    auto* train = app.add_subcommand("train", "Train one model variant");
    radionet::TrainRunOptions topt;
    train->add_option("--data", topt.dataset, "Dataset file")->required()->check(CLI::ExistingFile);
    train->add_option("--out", topt.out_checkpoint, "Output checkpoint")->required();
    train->add_option("--curves", topt.curves_csv, "Loss curve CSV (default <out>.csv)");
    train->add_option("--resume", topt.resume_checkpoint, "Continue from this checkpoint")->check(CLI::ExistingFile);
    train->add_option("--variant", ov.variant, "Model variant: " + radionet::variant_list());
    train->add_option("--iterations", ov.iterations, "Total iterations (overrides train.iterations)");
    train->add_option("--batch-size", ov.batch_size, "Batch size (overrides train.batch_size)");

    auto* ablate = app.add_subcommand("ablate", "Train all six variants and write a comparison table");
    std::string ab_data, ab_dir;
    ablate->add_option("--data", ab_data, "Dataset file")->required()->check(CLI::ExistingFile);
    ablate->add_option("--out-dir", ab_dir, "Directory for checkpoints, curves and ablation.txt")->required();
    ablate->add_option("--iterations", ov.iterations, "Iterations per variant (overrides train.iterations)");
    ablate->add_option("--batch-size", ov.batch_size, "Batch size (overrides train.batch_size)");

    auto* predict = app.add_subcommand("predict", "Predict the radio map of a scene file");
    std::string p_ck, p_scene, p_out, p_err;
    bool p_truth = false;
    predict->add_option("--checkpoint", p_ck, "Model checkpoint")->required()->check(CLI::ExistingFile);
    predict->add_option("--scene", p_scene, "Scene file")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", p_out, "Prediction image (PGM, -250 dB black, -70 dB white)")->required();
    predict->add_flag("--with-truth", p_truth, "Trace the oracle map and report the L1 error");
    predict->add_option("--error-out", p_err, "|error| image (PGM, 0 dB black, 60 dB white); needs --with-truth");

    auto* bench = app.add_subcommand("bench", "Model vs oracle latency and validation metrics");
    std::string b_ck, b_data, b_report;
    long long b_scenes = 10;
    bench->add_option("--checkpoint", b_ck, "Model checkpoint")->required()->check(CLI::ExistingFile);
    bench->add_option("--data", b_data, "Dataset file")->required()->check(CLI::ExistingFile);
    bench->add_option("--scenes", b_scenes, "Timed scenes (>= 10)")->capture_default_str();
    bench->add_option("--report", b_report, "Report file");

    for (auto* sub : {gen, train, ablate, predict, bench}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        auto& log = std::cerr;
        if (gen->parsed()) {
            const auto cfg = resolve(config_path, ov);
            const auto r = radionet::cmd_gen_dataset(cfg, seed, gen_count >= 0 ? gen_count : cfg.dataset_count, gen_out, log,
                                                     gen_scenes);
            std::cout << "samples " << r.count << " checksum " << radionet::hex64(r.checksum) << "\n";
        } else if (train->parsed()) {
            const auto cfg = resolve(config_path, ov);
            const auto r = radionet::cmd_train(cfg, seed, topt, log);
            std::cout << "iterations " << r.iterations << " val_l1 " << r.final_val_l1 << "\n";
        } else if (ablate->parsed()) {
            const auto cfg = resolve(config_path, ov);
            const auto rows = radionet::cmd_ablate(cfg, seed, ab_data, ab_dir, log);
            std::cout << radionet::format_ablation_table(rows, cfg.train.iterations, seed);
        } else if (predict->parsed()) {
            const auto cfg = resolve(config_path, ov);
            const auto r = radionet::cmd_predict(cfg, p_ck, p_scene, p_out, p_truth, p_err, log);
            if (r.l1) std::cout << "l1 " << *r.l1 << " e_db " << radionet::l1_to_db(*r.l1) << "\n";
        } else if (bench->parsed()) {
            const auto cfg = resolve(config_path, ov);
            const auto r = radionet::cmd_bench(cfg, seed, b_ck, b_data, b_scenes, b_report, log);
            std::cout << "model_s " << r.timing.mean_model << " oracle_s " << r.timing.mean_oracle << " ratio "
                      << r.timing.ratio << " reliability " << r.metrics.reliability << "\n";
        }
    } catch (const radionet::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
