// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "radionet/app/commands.hpp"

using namespace radionet;
namespace fs = std::filesystem;

namespace {

std::string scratch(const std::string& name) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    const fs::path dir = fs::path(::testing::TempDir()) / "radionet_io" / info->name();
    fs::create_directories(dir);
    return (dir / name).string();
}

RunConfig tiny_run() {
    RunConfig c;
    c.model.in_res = 32;
    c.model.out_res = 16;
    c.model.ch = 4;
    c.model.enc_stages = 3;
    c.model.dec_stages = 2;
    c.model.transformer = {32, 4, 64};
    c.oracle.n_rays = 3600;
    c.train.batch_size = 4;
    c.train.iterations = 4;
    c.train.log_every = 2;
    c.train.lr = 1e-3f;
    return c;
}

DatasetSpec tiny_spec() { return tiny_run().dataset_spec(); }

}  // namespace

TEST(Binary, ReaderRoundTripAndTruncation) {
    std::string b;
    bin::put_u32(b, 0xdeadbeef);
    bin::put_u64(b, 0x0123456789abcdefULL);
    bin::put_str(b, "hello");
    const float f[3] = {1.5f, -0.0f, 3e-7f};
    bin::put_f32s(b, f);
    EXPECT_EQ(static_cast<unsigned char>(b[0]), 0xef);  // little-endian
    bin::Reader r(b, "blob");
    EXPECT_EQ(r.u32(), 0xdeadbeefu);
    EXPECT_EQ(r.u64(), 0x0123456789abcdefULL);
    EXPECT_EQ(r.str(), "hello");
    float g[3];
    bin::f32s_from_le(r.take(12).data(), g);
    EXPECT_EQ(std::memcmp(f, g, 12), 0);
    EXPECT_THROW(r.u32(), FormatError);
    bin::Reader r2(std::string_view(b).substr(0, 10), "blob");
    r2.u32();
    EXPECT_THROW(r2.u64(), FormatError);
}

TEST(Dataset, RoundTripIsByteExact) {
    const auto path = scratch("d.rmap");
    MemoryDataset mem(tiny_spec().dims());
    generate_samples(tiny_spec(), 1, 3, 1, [&](Index, GeneratedSample&& s) { mem.add(s.input, s.target); });
    write_dataset(path, mem);
    const DatasetFile file(path);
    ASSERT_EQ(file.size(), 3);
    EXPECT_EQ(file.dims(), mem.dims());
    std::vector<float> a_in(mem.dims().input_size()), a_tg(mem.dims().target_size());
    std::vector<float> b_in(a_in.size()), b_tg(a_tg.size());
    for (Index i = 0; i < 3; ++i) {
        mem.read(i, a_in, a_tg);
        file.read(i, b_in, b_tg);
        EXPECT_EQ(std::memcmp(a_in.data(), b_in.data(), a_in.size() * 4), 0);
        EXPECT_EQ(std::memcmp(a_tg.data(), b_tg.data(), a_tg.size() * 4), 0);
    }
    const auto bytes = bin::read_file(path);
    EXPECT_EQ(bytes.substr(0, 4), "RMAP");
    EXPECT_EQ(bytes.size(), kDatasetHeaderBytes + 3 * 4 * (6 * 32 * 32 + 16 * 16));
    // a rewrite of the loaded file reproduces it
    const auto again = scratch("again.rmap");
    write_dataset(again, file);
    EXPECT_EQ(bin::read_file(again), bytes);
    EXPECT_THROW(file.read(3, b_in, b_tg), ContractError);
}

TEST(Dataset, RejectsCorruptFiles) {
    const auto path = scratch("d.rmap");
    MemoryDataset mem(tiny_spec().dims());
    generate_samples(tiny_spec(), 2, 2, 1, [&](Index, GeneratedSample&& s) { mem.add(s.input, s.target); });
    write_dataset(path, mem);
    auto bytes = bin::read_file(path);

    auto bad = scratch("bad.rmap");
    bin::write_file(bad, "RMAQ" + bytes.substr(4));
    EXPECT_THROW(DatasetFile{bad}, FormatError);
    bin::write_file(bad, bytes.substr(0, bytes.size() - 5));
    EXPECT_THROW(DatasetFile{bad}, FormatError);
    bin::write_file(bad, bytes.substr(0, 20));
    EXPECT_THROW(DatasetFile{bad}, FormatError);
    EXPECT_THROW(DatasetFile{scratch("missing.rmap")}, std::exception);
}

TEST(Dataset, WriterRejectsOutOfRangeValues) {
    DatasetWriter w(scratch("w.rmap"), tiny_spec().dims());
    std::vector<float> in(tiny_spec().dims().input_size(), 0.5f), tg(tiny_spec().dims().target_size(), 0.5f);
    w.append(in, tg);
    tg[7] = 1.25f;
    EXPECT_THROW(w.append(in, tg), FormatError);
    tg[7] = 0.5f;
    in[0] = -0.1f;
    EXPECT_THROW(w.append(in, tg), FormatError);
    in.pop_back();
    EXPECT_THROW(w.append(in, tg), DimensionError);
}

TEST(Dataset, GenerationIndependentOfThreadCount) {
    auto collect = [](unsigned threads) {
        std::vector<std::vector<float>> rows;
        Index expected = 0;
        generate_samples(tiny_spec(), 7, 5, threads, [&](Index i, GeneratedSample&& s) {
            EXPECT_EQ(i, expected++);
            rows.push_back(s.input);
            rows.push_back(s.target);
        });
        return rows;
    };
    EXPECT_EQ(collect(1), collect(3));
    const auto one = generate_sample(tiny_spec(), 7, 2);
    EXPECT_EQ(collect(1)[4], one.input);
}

TEST(Dataset, GenDatasetCommandIsDeterministic) {
    std::ostringstream log;
    const auto cfg = tiny_run();
    const auto a = cmd_gen_dataset(cfg, 1, 4, scratch("a.rmap"), log);
    const auto b = cmd_gen_dataset(cfg, 1, 4, scratch("b.rmap"), log, scratch("scenes"));
    EXPECT_EQ(a.checksum, b.checksum);
    EXPECT_EQ(bin::read_file(scratch("a.rmap")), bin::read_file(scratch("b.rmap")));
    EXPECT_TRUE(fs::exists(scratch("scenes") + "/scene_3.txt"));
    const auto c = cmd_gen_dataset(cfg, 2, 4, scratch("c.rmap"), log);
    EXPECT_NE(a.checksum, c.checksum);
}

TEST(Checkpoint, SerializationRoundTrip) {
    auto model = RadioNetModel::init(tiny_config("radionet"), 3);
    Adam opt(model.parameters());
    for (auto& p : model.parameters()) std::fill(p.tensor.mutable_grad().begin(), p.tensor.mutable_grad().end(), 0.01f);
    opt.step();
    const auto ck = capture_checkpoint(model, &opt, 1);
    const auto bytes = serialize_checkpoint(ck);
    EXPECT_EQ(bytes.substr(0, 4), "RNCK");
    const auto back = deserialize_checkpoint(bytes);
    EXPECT_EQ(back.variant, "radionet");
    EXPECT_EQ(back.iteration, 1u);
    EXPECT_EQ(back.entries, ck.entries);
    EXPECT_EQ(serialize_checkpoint(back), bytes);
    EXPECT_EQ(back.model_config().canonical(), model.config().canonical());
    EXPECT_EQ(back.entries.size(), 3 * model.parameters().size());

    const auto path = scratch("m.rnck");
    save_checkpoint(path, ck);
    save_checkpoint(scratch("m2.rnck"), load_checkpoint(path));
    EXPECT_EQ(bin::read_file(path), bin::read_file(scratch("m2.rnck")));

    auto other = RadioNetModel::init(tiny_config("radionet"), 99);
    Adam opt2(other.parameters());
    restore_checkpoint(back, other, &opt2);
    EXPECT_EQ(opt2.step_count(), 1);
    EXPECT_EQ(serialize_checkpoint(capture_checkpoint(other, &opt2, 1)), bytes);
}

TEST(Checkpoint, RefusesMismatchedOrDamagedInput) {
    const auto model = RadioNetModel::init(tiny_config("radionet"), 4);
    const auto bytes = serialize_checkpoint(capture_checkpoint(model, nullptr, 0));
    auto unet = RadioNetModel::init(tiny_config("unet"), 4);
    EXPECT_THROW(restore_checkpoint(deserialize_checkpoint(bytes), unet), ConfigError);
    EXPECT_THROW(deserialize_checkpoint(bytes.substr(0, bytes.size() - 3)), FormatError);
    EXPECT_THROW(deserialize_checkpoint(bytes + "x"), FormatError);
    EXPECT_THROW(deserialize_checkpoint("XXXX" + bytes.substr(4)), FormatError);
    auto ck = deserialize_checkpoint(bytes);
    ck.digest ^= 1;
    EXPECT_THROW(ck.model_config(), FormatError);
}

TEST(Config, ModelCanonicalRoundTrip) {
    for (auto name : kVariantNames) {
        const auto c = build_variant(name);
        const auto back = ModelConfig::from_canonical(c.canonical());
        EXPECT_EQ(back.canonical(), c.canonical());
        EXPECT_EQ(back.digest(), c.digest());
    }
    EXPECT_THROW(ModelConfig::from_canonical("variant=unet\n"), FormatError);
}

TEST(Config, RunConfigRoundTripAndErrors) {
    auto c = tiny_run();
    c.variant = "transunet";
    c.train.seed = 77;
    c.scene.building_count = 5;
    c.threads = 3;
    const auto text = serialize_run_config(c);
    const auto back = parse_run_config(text);
    EXPECT_EQ(serialize_run_config(back), text);
    EXPECT_EQ(back.threads, 3u);
    EXPECT_EQ(back.model_config().variant, "transunet");
    for (const auto& key : run_config_keys()) EXPECT_NE(text.find(key + " = "), std::string::npos) << key;

    EXPECT_THROW(parse_run_config("model.nonsense = 1\n"), ConfigError);
    EXPECT_THROW(parse_run_config("train.lr = 1e-3\ntrain.lr = 1e-4\n"), ConfigError);
    EXPECT_THROW(parse_run_config("train.lr = fast\n"), ConfigError);
    EXPECT_THROW(parse_run_config("no equals sign\n"), ConfigError);
    const auto partial = parse_run_config("# comment\n\ntrain.lr = 0.5\n", c);
    EXPECT_EQ(partial.train.lr, 0.5f);
    EXPECT_EQ(partial.variant, "transunet");
}

TEST(Image, GrayMappingAndPgm) {
    EXPECT_EQ(db_to_gray(-250.0), 0);
    EXPECT_EQ(db_to_gray(-70.0), 255);
    EXPECT_EQ(db_to_gray(-400.0), 0);
    EXPECT_EQ(db_to_gray(0.0), 255);
    EXPECT_LT(db_to_gray(-200.0), db_to_gray(-100.0));
    const std::vector<std::uint8_t> px{0, 128, 255, 7};
    const auto pgm = encode_pgm(2, 2, px);
    EXPECT_EQ(pgm, std::string("P5\n2 2\n255\n") + std::string(px.begin(), px.end()));
    EXPECT_THROW(encode_pgm(3, 2, px), DimensionError);
}

TEST(Image, ErrorImageOfIdenticalMapsIsBlack) {
    SceneSpec s;
    s.tx = {100.0, 150.0, 30.0};
    OracleConfig oc;
    oc.n_rays = 3600;
    const auto m = trace_radio_map(s, oc, 8, 8);
    for (auto v : error_pixels(m, m)) EXPECT_EQ(v, 0);
    auto shifted = m;
    for (auto& d : shifted.power_db) d += 60.0f;
    for (auto v : error_pixels(shifted, m)) EXPECT_EQ(v, 255);
}

TEST(Commands, TrainResumePredictBench) {
    std::ostringstream log;
    auto cfg = tiny_run();
    const auto data = scratch("d.rmap");
    cmd_gen_dataset(cfg, 5, 12, data, log, scratch("scenes"));

    TrainRunOptions opt{data, scratch("m.rnck"), {}, {}};
    const auto r = cmd_train(cfg, 5, opt, log);
    EXPECT_EQ(r.iterations, 4);
    const auto csv = bin::read_file(scratch("m.rnck") + ".csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);

    // same seed, same bytes
    TrainRunOptions opt2{data, scratch("m2.rnck"), {}, {}};
    cmd_train(cfg, 5, opt2, log);
    EXPECT_EQ(bin::read_file(scratch("m.rnck")), bin::read_file(scratch("m2.rnck")));

    // 4 + 4 resumed equals 8 straight
    auto cfg8 = cfg;
    cfg8.train.iterations = 8;
    TrainRunOptions straight{data, scratch("s8.rnck"), {}, {}};
    cmd_train(cfg8, 5, straight, log);
    TrainRunOptions resumed{data, scratch("r8.rnck"), {}, scratch("m.rnck")};
    cmd_train(cfg8, 5, resumed, log);
    EXPECT_EQ(bin::read_file(scratch("s8.rnck")), bin::read_file(scratch("r8.rnck")));

    const auto p = cmd_predict(cfg, scratch("m.rnck"), scratch("scenes") + "/scene_0.txt", scratch("p.pgm"), true,
                               scratch("e.pgm"), log);
    ASSERT_TRUE(p.l1.has_value());
    EXPECT_GE(*p.l1, 0.0);
    EXPECT_EQ(bin::read_file(scratch("p.pgm")).substr(0, 12), "P5\n16 16\n255");
    EXPECT_TRUE(fs::exists(scratch("e.pgm")));

    const auto b = cmd_bench(cfg, 5, scratch("m.rnck"), data, 10, scratch("bench.txt"), log);
    EXPECT_EQ(b.timing.model_seconds.size(), 10u);
    EXPECT_GT(b.timing.ratio, 0.0);
    EXPECT_NE(bin::read_file(scratch("bench.txt")).find("ratio"), std::string::npos);
}

TEST(Commands, MismatchedDatasetAndVariantRejected) {
    std::ostringstream log;
    auto cfg = tiny_run();
    const auto data = scratch("d.rmap");
    cmd_gen_dataset(cfg, 6, 4, data, log);
    auto wrong = cfg;
    wrong.model.in_res = 64;
    EXPECT_THROW(cmd_train(wrong, 6, {data, scratch("m.rnck"), {}, {}}, log), ConfigError);
    wrong = cfg;
    wrong.variant = "bogus";
    EXPECT_THROW(cmd_train(wrong, 6, {data, scratch("m.rnck"), {}, {}}, log), ConfigError);
}

TEST(Commands, AblationWritesSixRows) {
    std::ostringstream log;
    auto cfg = tiny_run();
    cfg.train.iterations = 2;
    const auto data = scratch("d.rmap");
    cmd_gen_dataset(cfg, 8, 10, data, log);
    const auto rows = cmd_ablate(cfg, 8, data, scratch("abl"), log);
    ASSERT_EQ(rows.size(), 6u);
    const auto table = bin::read_file(scratch("abl") + "/ablation.txt");
    for (auto name : kVariantNames) {
        EXPECT_NE(table.find(std::string(name)), std::string::npos) << name;
        EXPECT_TRUE(fs::exists(scratch("abl") + "/" + std::string(name) + ".rnck"));
    }
}
