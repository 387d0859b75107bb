// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Flat "key = value" run configuration. '#' starts a comment. Every key
// has a default; unknown and repeated keys are rejected. Variant flags
// follow from model.variant.
#pragma once

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "radionet/io/dataset.hpp"
#include "radionet/model/config.hpp"
#include "radionet/train/trainer.hpp"

namespace radionet {

struct RunConfig {
    std::string variant = "radionet";
    ModelConfig model;  // sizes; flags are derived from `variant`
    TrainConfig train;
    SceneParams scene;
    OracleConfig oracle;
    Index dataset_count = 4096;
    unsigned threads = 1;

    ModelConfig model_config() const { return build_variant(variant, model); }
    ModelConfig model_config(std::string_view name) const { return build_variant(name, model); }

    DatasetSpec dataset_spec() const { return {scene, oracle, model.in_res, model.out_res}; }

    void validate() const {
        model_config().validate();
        train.validate();
        scene.validate();
        oracle.validate();
        if (dataset_count < 2) throw ConfigError("data.count must be >= 2");
        if (threads < 1) throw ConfigError("data.threads must be >= 1");
    }
};

namespace config_detail {

struct Binding {
    std::string key;
    std::function<std::string()> get;
    std::function<void(const std::string&)> set;
};

template <typename T>
std::string format_number(T v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <typename T>
T parse_number(const std::string& key, const std::string& s) {
    T v{};
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    if (r.ec != std::errc{} || r.ptr != end) throw ConfigError("config: bad value '" + s + "' for " + key);
    return v;
}

template <typename T>
Binding number(std::string key, T& ref) {
    return {key, [&ref] { return format_number(ref); }, [&ref, key](const std::string& s) { ref = parse_number<T>(key, s); }};
}

inline std::vector<Binding> bindings(RunConfig& c) {
    std::vector<Binding> b;
    b.push_back({"model.variant", [&c] { return c.variant; },
                 [&c](const std::string& s) {
                     (void)build_variant(s);  // rejects unknown names with the valid list
                     c.variant = s;
                 }});
    b.push_back(number("model.in_res", c.model.in_res));
    b.push_back(number("model.out_res", c.model.out_res));
    b.push_back(number("model.ch", c.model.ch));
    b.push_back(number("model.enc_stages", c.model.enc_stages));
    b.push_back(number("model.dec_stages", c.model.dec_stages));
    b.push_back(number("model.channel_cap", c.model.channel_cap));
    b.push_back(number("model.patch_grid", c.model.patch_grid));
    b.push_back(number("model.d_item", c.model.transformer.d_item));
    b.push_back(number("model.n_heads", c.model.transformer.n_heads));
    b.push_back(number("model.d_hidden", c.model.transformer.d_hidden));

    b.push_back(number("train.lr", c.train.lr));
    b.push_back(number("train.batch_size", c.train.batch_size));
    b.push_back(number("train.iterations", c.train.iterations));
    b.push_back(number("train.split_train", c.train.split_train));
    b.push_back(number("train.split_val", c.train.split_val));
    b.push_back({"train.loss", [&c] { return std::string(c.train.loss == LossKind::l1 ? "l1" : "l2"); },
                 [&c](const std::string& s) {
                     if (s == "l1") c.train.loss = LossKind::l1;
                     else if (s == "l2") c.train.loss = LossKind::l2;
                     else throw ConfigError("config: train.loss must be l1 or l2, got '" + s + "'");
                 }});
    b.push_back(number("train.log_every", c.train.log_every));
    b.push_back(number("train.val_samples", c.train.val_samples));
    b.push_back(number("train.eval_batch", c.train.eval_batch));

    auto& s = c.scene;
    b.push_back(number("scene.world_size", s.world_size));
    b.push_back(number("scene.road_width_min", s.road_width.lo));
    b.push_back(number("scene.road_width_max", s.road_width.hi));
    b.push_back(number("scene.lot_size_min", s.lot_size.lo));
    b.push_back(number("scene.lot_size_max", s.lot_size.hi));
    b.push_back(number("scene.setback", s.setback));
    b.push_back(number("scene.building_density", s.building_density));
    b.push_back(number("scene.building_count", s.building_count));
    b.push_back(number("scene.building_height_min", s.building_height.lo));
    b.push_back(number("scene.building_height_max", s.building_height.hi));
    b.push_back(number("scene.tree_height_min", s.tree_height.lo));
    b.push_back(number("scene.tree_height_max", s.tree_height.hi));
    b.push_back(number("scene.tree_spacing_min", s.tree_spacing.lo));
    b.push_back(number("scene.tree_spacing_max", s.tree_spacing.hi));
    b.push_back(number("scene.tx_height_min", s.tx_height.lo));
    b.push_back(number("scene.tx_height_max", s.tx_height.hi));
    b.push_back(number("scene.freq_ghz_min", s.freq_ghz.lo));
    b.push_back(number("scene.freq_ghz_max", s.freq_ghz.hi));
    b.push_back(number("scene.max_retries", s.max_retries));

    auto& o = c.oracle;
    b.push_back(number("oracle.n_rays", o.n_rays));
    b.push_back(number("oracle.max_bounces", o.max_bounces));
    b.push_back(number("oracle.reflection_loss_db", o.reflection_loss_db));
    b.push_back(number("oracle.tree_loss_db_per_m", o.tree_loss_db_per_m));
    b.push_back(number("oracle.rx_height", o.rx_height));
    b.push_back(number("oracle.power_min", o.power_min));
    b.push_back(number("oracle.power_max", o.power_max));

    b.push_back(number("data.count", c.dataset_count));
    b.push_back(number("data.threads", c.threads));
    return b;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto z = s.find_last_not_of(" \t\r");
    return s.substr(a, z - a + 1);
}

}  // namespace config_detail

inline std::vector<std::string> run_config_keys() {
    RunConfig c;
    std::vector<std::string> keys;
    for (const auto& b : config_detail::bindings(c)) keys.push_back(b.key);
    return keys;
}

inline std::string serialize_run_config(const RunConfig& cfg) {
    RunConfig c = cfg;
    std::string out;
    for (const auto& b : config_detail::bindings(c)) out += b.key + " = " + b.get() + "\n";
    return out;
}

/// Applies the assignments in `text` on top of `base`.
inline RunConfig parse_run_config(std::string_view text, RunConfig base = {}) {
    auto binds = config_detail::bindings(base);
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = config_detail::trim(line.substr(0, eq));
        const std::string value = config_detail::trim(line.substr(eq + 1));
        auto it = std::find_if(binds.begin(), binds.end(), [&](const auto& b) { return b.key == key; });
        if (it == binds.end()) throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError("config line " + std::to_string(line_no) + ": repeated key '" + key + "'");
        it->set(value);
    }
    return base;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace radionet
