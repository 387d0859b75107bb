// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any failed. Usage: acceptance_main [work_dir]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "radionet/app/commands.hpp"
#include "radionet/core/gradcheck.hpp"

using namespace radionet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
    return a.shape() == b.shape() && std::memcmp(a.data().data(), b.data().data(), a.data().size_bytes()) == 0;
}

float max_abs_diff(const Tensor& a, const Tensor& b) {
    float m = 0.0f;
    for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

Tensor permute_rows(const Tensor& x, const std::vector<Index>& perm) {
    const Index d = x.dim(1);
    std::vector<float> out(x.data().size());
    for (std::size_t r = 0; r < perm.size(); ++r) {
        std::copy_n(x.data().begin() + perm[r] * d, d, out.begin() + static_cast<Index>(r) * d);
    }
    return Tensor(x.shape(), std::move(out));
}

/// Scene-like input [B, 6, res, res] with one tx pixel per sample.
Tensor scene_input(Index B, Index res, std::uint64_t seed) {
    Tensor x({B, kInputChannels, res, res}, std::vector<float>(static_cast<std::size_t>(B * kInputChannels * res * res)));
    for (Index b = 0; b < B; ++b) {
        const auto maps = rasterize_scene(generate_scene(derive_seed(seed, static_cast<std::uint64_t>(b))), res, res);
        const Tensor t = maps.to_tensor(true);
        std::copy(t.data().begin(), t.data().end(), x.data().begin() + b * kInputChannels * res * res);
    }
    return x;
}

struct Workspace {
    fs::path dir;
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

// ---- criteria ----

Outcome gradient_suite(const Workspace&) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(2026);
    double worst_op = 0.0;
    std::string worst_name;
    auto op = [&](const char* name, const std::function<Tensor()>& f, std::vector<Tensor> leaves, int halvings = 0) {
        GradCheckOptions o;
        o.pool_leaves = true;
        o.kink_halvings = halvings;
        const auto r = gradient_check(f, std::move(leaves), o);
        if (r.max_rel_error >= worst_op) {
            worst_op = r.max_rel_error;
            worst_name = name;
        }
    };
    auto away = [&](Shape s) {
        Tensor t = Tensor::uniform(std::move(s), rng, 0.1f, 1.0f);
        for (auto& v : t.data()) v = rng.below(2) ? v : -v;
        return t;
    };

    Tensor a = away({2, 3, 4}), b = away({2, 3, 4});
    op("add", [&] { return add(a, b); }, {a, b});
    op("sub", [&] { return sub(a, b); }, {a, b});
    op("mul", [&] { return mul(a, b); }, {a, b});
    op("scale", [&] { return scale(a, -1.5f); }, {a});
    op("relu", [&] { return relu(a); }, {a}, 4);
    op("sigmoid", [&] { return sigmoid(a); }, {a});
    op("square", [&] { return square(a); }, {a});
    Tensor m1 = Tensor::randn({3, 5}, rng), m2 = Tensor::randn({5, 4}, rng), bias = Tensor::randn({4}, rng);
    op("matmul", [&] { return matmul(m1, m2); }, {m1, m2});
    op("linear", [&] { return linear(m1, m2, bias); }, {m1, m2, bias});
    op("transpose", [&] { return transpose(m1); }, {m1});
    Tensor s = Tensor::randn({3, 4, 8}, rng);
    for (Index axis : {0, 1, 2}) {
        Tensor g = Tensor::uniform({s.dim(axis)}, rng, 0.5f, 1.5f), be = Tensor::randn({s.dim(axis)}, rng);
        op("softmax", [&] { return softmax(s, axis); }, {s});
        op("layer_norm", [&] { return layer_norm(s, g, be, axis); }, {s, g, be});
    }
    Tensor c2 = Tensor::randn({2, 2, 4}, rng);
    op("concat", [&] { return concat({a, c2}, 1); }, {a, c2});
    op("narrow", [&] { return narrow(a, 2, 1, 2); }, {a});
    op("reshape", [&] { return reshape(a, {6, 4}); }, {a});
    Tensor img = Tensor::randn({2, 3, 8, 8}, rng), tok = Tensor::randn({2, 16, 12}, rng);
    op("patchify", [&] { return patchify(img, 4); }, {img});
    op("combine_patches", [&] { return combine_patches(tok, 4, 3, 8, 8); }, {tok});
    Tensor p = Tensor::uniform({2, 1, 4, 4}, rng, 0.0f, 1.0f), t = Tensor::uniform({2, 1, 4, 4}, rng, 0.0f, 1.0f);
    op("sum", [&] { return sum(p); }, {p});
    op("mean", [&] { return mean(p); }, {p});
    op("l1_loss", [&] { return l1_loss(p, t); }, {p, t}, 4);
    op("mse_loss", [&] { return mse_loss(p, t); }, {p, t});
    Tensor w = Tensor::randn({4, 3, 3, 3}, rng, 0.3f), cb = Tensor::randn({4}, rng), w1 = Tensor::randn({2, 3, 1, 1}, rng);
    op("conv2d", [&] { return conv2d(img, w, cb, 1, 1); }, {img, w, cb});
    op("conv2d/s2", [&] { return conv2d(img, w, cb, 2, 0); }, {img, w, cb});
    op("conv2d/1x1", [&] { return conv2d(img, w1, {}); }, {img, w1});
    Tensor xs = Tensor::randn({2, 3, 4, 4}, rng), wt = Tensor::randn({3, 2, 2, 2}, rng, 0.5f), tb = Tensor::randn({2}, rng);
    op("conv_transpose2d", [&] { return conv_transpose2d(xs, wt, tb, 2, 0); }, {xs, wt, tb});
    std::vector<float> distinct(2 * 3 * 8 * 8);
    for (std::size_t i = 0; i < distinct.size(); ++i) distinct[i] = 0.01f * static_cast<float>(i);
    rng.shuffle(std::span(distinct));
    Tensor mp({2, 3, 8, 8}, distinct);
    op("maxpool2d", [&] { return maxpool2d(mp, 2, 2); }, {mp});

    // composed transformer layer
    TransformerConfig tc;
    tc.d_item = 16;
    tc.n_heads = 4;
    tc.d_hidden = 32;
    auto lp = TransformerLayerParams::init(tc, rng);
    testref::perturb_norms(lp, rng);
    Tensor seq = Tensor::randn({4, 16}, rng);
    testref::clear_ffn_kinks(seq, lp);
    ParamList lparams;
    lp.collect("", lparams);
    std::vector<Tensor> lleaves{seq};
    for (auto& np : lparams) lleaves.push_back(np.tensor);
    GradCheckOptions lo;
    lo.pool_leaves = true;
    const double layer_err = gradient_check([&] { return transformer_layer_forward(seq, lp); }, lleaves, lo).max_rel_error;

    // full model, tiny config, every variant; gated on synthetic scene-like
    // input. Rasterized scenes are reported alongside: there the unet
    // gradient over the probed coordinates is small enough that float32
    // quotient noise (~3e-4 absolute) decides the ratio.
    auto model_check = [](std::string_view name, const Tensor& x) {
        const auto model = RadioNetModel::init(tiny_config(name), 41);
        std::vector<Tensor> leaves;
        for (const auto& np : model.parameters()) leaves.push_back(np.tensor);
        GradCheckOptions mo;
        mo.max_coordinates = 20;
        mo.pool_leaves = true;
        mo.kink_halvings = 4;
        return gradient_check([&] { return model.forward(x); }, leaves, mo);
    };
    double model_err = 0.0, scene_err = 0.0;
    std::string scene_worst;
    std::size_t kinked = 0;
    Rng xrng(42);
    const Tensor synthetic = testref::scene_like_input(1, 32, xrng);
    const Tensor scene = scene_input(1, 32, 42);
    for (auto name : kVariantNames) {
        const auto r = model_check(name, synthetic);
        model_err = std::max(model_err, r.max_rel_error);
        kinked += r.kinked;
        const auto rs = model_check(name, scene);
        if (rs.max_rel_error > scene_err) {
            scene_err = rs.max_rel_error;
            scene_worst = name;
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = worst_op < 1e-3 && layer_err < 1e-3 && model_err < 1e-2 && kinked == 0 && secs < 120.0;
    return {ok, fmt("worst op %.2e (%s), transformer layer %.2e, tiny model %.2e, %zu kinked, %.1f s "
                    "[rasterized scene, not gated: %.2e (%s)]",
                    worst_op, worst_name.c_str(), layer_err, model_err, kinked, secs, scene_err, scene_worst.c_str())};
}

Outcome attention_invariants(const Workspace&) {
    Rng rng(7);
    TransformerConfig tc;
    tc.d_item = 16;
    tc.n_heads = 4;
    tc.d_hidden = 32;
    auto mp = MhsaParams::init(tc, rng);
    std::vector<Tensor> attn;
    mhsa_forward(Tensor::randn({3 * 7, 16}, rng), mp, 7, &attn);
    double row_err = 0.0;
    bool positive = true;
    for (const auto& a : attn) {
        for (Index i = 0; i < a.dim(0); ++i) {
            double s = 0.0;
            for (Index j = 0; j < a.dim(1); ++j) {
                s += a.at({i, j});
                positive = positive && a.at({i, j}) > 0.0f;
            }
            row_err = std::max(row_err, std::abs(s - 1.0));
        }
    }
    tc.d_item = 8;
    tc.n_heads = 2;
    tc.d_hidden = 16;
    auto lp = TransformerLayerParams::init(tc, rng);
    testref::perturb_norms(lp, rng);
    const Tensor x = Tensor::randn({4, 8}, rng);
    const Tensor y = transformer_layer_forward(x, lp);
    std::vector<Index> perm{0, 1, 2, 3};
    float eq_err = 0.0f;
    int count = 0;
    do {
        eq_err = std::max(eq_err, max_abs_diff(transformer_layer_forward(permute_rows(x, perm), lp), permute_rows(y, perm)));
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const bool ok = positive && row_err <= 1e-5 && eq_err <= 1e-5f && count == 24;
    return {ok, fmt("row-sum error %.1e over %zu maps, equivariance error %.1e over %d permutations", row_err, attn.size(),
                    static_cast<double>(eq_err), count)};
}

Outcome spread_identities(const Workspace&) {
    bool identity = true;
    for (bool ge : {false, true}) {
        ModelConfig cfg;
        cfg.use_ge = ge;
        cfg.use_pe = false;
        cfg.transformer = {16, 4, 32};
        Rng rng(21);
        auto p = SpreadParams::init(3 * 4 * 4, 4, cfg, rng);
        std::fill(p.w_out.data().begin(), p.w_out.data().end(), 0.0f);
        std::fill(p.b_out.data().begin(), p.b_out.data().end(), 0.0f);
        const Tensor feat = Tensor::randn({2, 3, 16, 16}, rng);
        Tensor gev;
        if (ge) gev = Tensor::uniform({2 * 16, 4}, rng, -1.0f, 1.0f);
        identity = identity && bitwise_equal(spread_layer_forward(feat, p, 4, true, gev), feat);
    }
    Rng rng(24);
    int trips = 0, exact = 0;
    for (Index g : {1, 2, 4, 8}) {
        for (Index side : {8, 16, 32}) {
            const Tensor x = Tensor::randn({2, 3, side, side}, rng);
            ++trips;
            exact += bitwise_equal(combine_patches(patchify(x, g), g, 3, side, side), x);
        }
    }
    return {identity && exact == trips,
            fmt("zero-projection identity %s, patch round trips %d/%d bitwise", identity ? "exact" : "BROKEN", exact, trips)};
}

Outcome grid_embedding_contract(const Workspace&) {
    const auto cfg = build_variant("radionet");
    auto model = RadioNetModel::init(cfg, 11);
    const Tensor x = scene_input(2, cfg.in_res, 12);
    Rng rng(13);
    const Tensor target = Tensor::uniform({2, 1, cfg.out_res, cfg.out_res}, rng, 0.0f, 1.0f);
    const Tensor before = grid_embedding_batch(x, cfg.patch_grid);
    const Tensor w0 = model.parameters().front().tensor.detach();
    Adam opt(model.parameters(), AdamConfig{1e-3f});
    for (int step = 0; step < 100; ++step) {
        backward(l1_loss(model.forward(x), target));
        opt.step();
        opt.zero_grad();
    }
    const Tensor after = grid_embedding_batch(x, cfg.patch_grid);
    const bool moved = !bitwise_equal(w0, model.parameters().front().tensor);
    // the table the decoder consumes is this one
    bool wired;
    {
        NoGradGuard g;
        wired = bitwise_equal(model.forward(x), model.decode(model.encode(x), after));
    }

    // tx translation: absolute part fixed, relative part shifted by exactly -d
    const Index g = cfg.patch_grid;
    const double tx = 20.0 / 64, ty = 37.0 / 64, dx = 5.0 / 64, dy = -3.0 / 64;
    const Tensor e0 = grid_embedding(g, tx, ty), e1 = grid_embedding(g, tx + dx, ty + dy);
    bool shift = true;
    for (Index r = 0; r < g * g; ++r) {
        shift = shift && e0.at({r, 0}) == e1.at({r, 0}) && e0.at({r, 1}) == e1.at({r, 1}) &&
                e1.at({r, 2}) - e0.at({r, 2}) == static_cast<float>(-dx) &&
                e1.at({r, 3}) - e0.at({r, 3}) == static_cast<float>(-dy);
    }
    const bool same = bitwise_equal(before, after);
    return {same && moved && wired && shift && !after.requires_grad(),
            fmt("GE %s after 100 Adam steps (weights moved: %s, decoder consumes it: %s), translation exact: %s",
                same ? "bit-identical" : "CHANGED", moved ? "yes" : "no", wired ? "yes" : "no", shift ? "yes" : "no")};
}

Outcome oracle_fidelity(const Workspace&) {
    const OracleConfig cfg;
    // free space against the closed form
    SceneSpec open;
    open.tx = {37.0, 401.5, 35.0};
    const auto fm = trace_radio_map(open, cfg, 32, 32);
    double friis_err = 0.0;
    for (Index i = 0; i < 32; ++i) {
        for (Index j = 0; j < 32; ++j) {
            const double x = (j + 0.5) * open.world_size / 32, y = (i + 0.5) * open.world_size / 32;
            const double dh = open.tx.height - cfg.rx_height;
            const double d = std::sqrt(std::pow(x - open.tx.x, 2) + std::pow(y - open.tx.y, 2) + dh * dh);
            const double expect = std::clamp(tx_power_db() - fspl(d, open.freq_ghz), cfg.power_min, cfg.power_max);
            friis_err = std::max(friis_err, std::abs(fm.db(i, j) - expect));
        }
    }
    // 90 degree symmetry about a centred tx
    SceneSpec centred;
    centred.tx = {256.0, 256.0, 40.0};
    const auto cm = trace_radio_map(centred, cfg, 32, 32);
    double sym_err = 0.0;
    for (Index i = 0; i < 32; ++i) {
        for (Index j = 0; j < 32; ++j) sym_err = std::max(sym_err, static_cast<double>(std::abs(cm.db(i, j) - cm.db(j, 31 - i))));
    }
    // shadow against the same cells in free space, no bounces
    OracleConfig direct = cfg;
    direct.max_bounces = 0;
    SceneSpec blocked;
    blocked.tx = {150.0, 256.0, 60.0};
    blocked.buildings.push_back({ShapeFamily::rect, 40.0, {{200.0, 200.0, 230.0, 312.0}}});
    SceneSpec free_twin = blocked;
    free_twin.buildings.clear();
    const auto bm = trace_radio_map(blocked, direct, 32, 32), lm = trace_radio_map(free_twin, direct, 32, 32);
    const bool shadow = bm.db(16, 15) < lm.db(16, 15);
    // urban timing
    double worst_secs = 0.0;
    for (std::uint64_t s = 1; s <= 5; ++s) {
        const auto scene = generate_scene(s);
        const auto t0 = std::chrono::steady_clock::now();
        (void)trace_radio_map(scene, cfg, 32, 32);
        worst_secs = std::max(worst_secs, seconds_since(t0));
    }
    const bool ok = friis_err <= 0.5 && sym_err <= 0.5 && shadow && worst_secs < 1.0;
    return {ok, fmt("free-space error %.3f dB, rotation error %.3f dB, shadow %.1f < LOS %.1f dB, slowest urban map %.3f s",
                    friis_err, sym_err, static_cast<double>(bm.db(16, 15)), static_cast<double>(lm.db(16, 15)), worst_secs)};
}

Outcome metric_definitions(const Workspace&) {
    Rng rng(3);
    bool exact = true;
    for (int k = 0; k < 20; ++k) {
        MetricsAccumulator acc;
        for (int m = 0; m < 3; ++m) {
            const Tensor p = Tensor::uniform({64}, rng, 0.0f, 1.0f), t = Tensor::uniform({64}, rng, 0.0f, 1.0f);
            acc.add_map(p.data(), t.data());
        }
        const auto r = acc.finish();
        exact = exact && r.e_db == r.l1 * 180.0;
    }
    MetricsAccumulator crafted;
    const std::vector<float> target(16, 0.5f);
    for (double db : {5.0, 9.0, 11.0}) crafted.add_map(std::vector<float>(16, static_cast<float>(0.5 + db / 180.0)), target);
    const double rel = crafted.finish().reliability;
    return {exact && rel == 2.0 / 3.0,
            fmt("e_db == l1*180 %s on 20 random cases, crafted reliability %.6f", exact ? "exactly" : "NOT", rel)};
}

Outcome overfit_sanity(const Workspace&) {
    const auto t0 = std::chrono::steady_clock::now();
    const DatasetSpec spec;  // desk resolution
    MemoryDataset data(spec.dims());
    generate_samples(spec, 1, 9, 1, [&](Index, GeneratedSample&& s) { data.add(s.input, s.target); });
    auto model = RadioNetModel::init(build_variant("radionet"), 7);
    TrainConfig tc;
    tc.lr = 1e-3f;
    tc.batch_size = 8;
    tc.iterations = 2000;
    tc.split_train = 8;
    tc.split_val = 1;
    Trainer trainer(model, data, tc);
    const auto& train_ids = trainer.split().train;
    double l1 = 1.0;
    Index it = 0;
    while (it < tc.iterations) {
        trainer.step();
        ++it;
        if (it % 25 == 0) {
            l1 = evaluate(model, data, train_ids, 8).l1;
            if (l1 < 0.02) break;
        }
    }
    return {l1 < 0.02 && train_ids.size() == 8,
            fmt("desk RadioNet, %zu samples: train L1 %.4f after %ld iterations (lr 1e-3), %.0f s", train_ids.size(), l1,
                static_cast<long>(it), seconds_since(t0))};
}

RunConfig desk_run(Index iterations) {
    RunConfig cfg;
    cfg.train.iterations = iterations;
    cfg.train.batch_size = 8;
    cfg.train.log_every = 25;
    cfg.train.lr = 1e-3f;
    return cfg;
}

Outcome ablation_protocol(const Workspace& ws) {
    const auto t0 = std::chrono::steady_clock::now();
    std::ostringstream log;
    const auto cfg = desk_run(300);
    const auto data = ws.path("ablation.rmap");
    cmd_gen_dataset(cfg, 31, 80, data, log);
    const auto rows = cmd_ablate(cfg, 31, data, ws.path("ablation"), log);
    const auto table = bin::read_file(ws.path("ablation/ablation.txt"));
    std::fputs(table.c_str(), stdout);
    bool complete = rows.size() == 6;
    double radionet = 0.0, unet = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        complete = complete && rows[k].variant == kVariantNames[k] && std::isfinite(rows[k].val_l1) &&
                   table.find(rows[k].variant) != std::string::npos;
        if (rows[k].variant == "radionet") radionet = rows[k].val_l1;
        if (rows[k].variant == "unet") unet = rows[k].val_l1;
    }
    return {complete, fmt("%zu rows, seed 31, 300 iterations; radionet val L1 %.4f vs unet %.4f (%s, not gated), %.0f s",
                          rows.size(), radionet, unet, radionet <= unet ? "radionet <= unet" : "radionet > unet",
                          seconds_since(t0))};
}

Outcome speed_protocol(const Workspace& ws) {
    std::ostringstream log;
    const auto cfg = desk_run(1);
    const auto data = ws.path("bench.rmap");
    cmd_gen_dataset(cfg, 41, 10, data, log);
    save_checkpoint(ws.path("bench.rnck"), capture_checkpoint(RadioNetModel::init(cfg.model_config(), 41), nullptr, 0));
    const auto r = cmd_bench(cfg, 41, ws.path("bench.rnck"), data, 10, ws.path("bench.txt"), log);
    return {r.timing.ratio >= 10.0 && r.timing.model_seconds.size() == 10,
            fmt("oracle %.4f s vs model %.4f s per map over %zu desk scenes: ratio %.1f", r.timing.mean_oracle,
                r.timing.mean_model, r.timing.model_seconds.size(), r.timing.ratio)};
}

Outcome determinism(const Workspace& ws) {
    std::ostringstream log;
    const auto cfg = desk_run(6);
    const auto a = cmd_gen_dataset(cfg, 5, 8, ws.path("det_a.rmap"), log);
    const auto b = cmd_gen_dataset(cfg, 5, 8, ws.path("det_b.rmap"), log);
    const bool data_same = bin::read_file(ws.path("det_a.rmap")) == bin::read_file(ws.path("det_b.rmap"));
    auto tcfg = cfg;
    tcfg.train.batch_size = 4;
    tcfg.train.log_every = 3;
    cmd_train(tcfg, 5, {ws.path("det_a.rmap"), ws.path("det_a.rnck"), {}, {}}, log);
    cmd_train(tcfg, 5, {ws.path("det_b.rmap"), ws.path("det_b.rnck"), {}, {}}, log);
    const bool ck_same = bin::read_file(ws.path("det_a.rnck")) == bin::read_file(ws.path("det_b.rnck"));
    const bool csv_same = bin::read_file(ws.path("det_a.rnck.csv")) == bin::read_file(ws.path("det_b.rnck.csv"));
    return {data_same && a.checksum == b.checksum && ck_same && csv_same,
            fmt("dataset %s (checksum %s), checkpoint %s, curves %s", data_same ? "identical" : "DIFFERS",
                hex64(a.checksum).c_str(), ck_same ? "identical" : "DIFFERS", csv_same ? "identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
    Workspace ws{argc > 1 ? fs::path(argv[1]) : fs::current_path() / "acceptance_work"};
    fs::create_directories(ws.dir);
    const std::vector<std::pair<const char*, Outcome (*)(const Workspace&)>> criteria{
        {"gradient-suite", gradient_suite},
        {"attention-invariants", attention_invariants},
        {"spread-layer-identities", spread_identities},
        {"grid-embedding-contract", grid_embedding_contract},
        {"oracle-fidelity", oracle_fidelity},
        {"metric-definitions", metric_definitions},
        {"overfit-sanity", overfit_sanity},
        {"ablation-protocol", ablation_protocol},
        {"speed-protocol", speed_protocol},
        {"determinism", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run(ws);
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
