// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "radionet/scene/raster.hpp"
#include "radionet/scene/scene.hpp"
#include "radionet/scene/scene_io.hpp"
#include "radionet/scene/split.hpp"

using namespace radionet;

namespace {

std::string to_text(const SceneSpec& s) {
    std::ostringstream os;
    write_scene(os, s);
    return os.str();
}

SceneSpec empty_scene(double tx_x = 100, double tx_y = 200, double tx_h = 50) {
    SceneSpec s;
    s.tx = {tx_x, tx_y, tx_h};
    return s;
}

}  // namespace

TEST(GenerateScene, SameSeedSameScene) {
    const auto a = generate_scene(42), b = generate_scene(42);
    EXPECT_EQ(a, b);
    EXPECT_EQ(to_text(a), to_text(b));
    EXPECT_NE(to_text(a), to_text(generate_scene(43)));
}

TEST(GenerateScene, ThousandSeedsRespectRanges) {
    std::set<ShapeFamily> shapes;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto s = generate_scene(seed);
        ASSERT_EQ(scene_violation(s), "") << "seed " << seed;
        ASSERT_FALSE(s.buildings.empty());
        ASSERT_FALSE(s.trees.empty());
        for (const auto& b : s.buildings) {
            shapes.insert(b.shape);
            const Rect r = b.bounds();
            ASSERT_TRUE(r.x0 >= 0 && r.y0 >= 0 && r.x1 <= s.world_size && r.y1 <= s.world_size);
        }
    }
    EXPECT_EQ(shapes.size(), 4u);
}

TEST(GenerateScene, FootprintPartsDoNotOverlap) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (const auto& b : generate_scene(seed).buildings) {
            for (std::size_t i = 0; i < b.parts.size(); ++i) {
                EXPECT_GT(b.parts[i].area(), 0.0);
                for (std::size_t j = i + 1; j < b.parts.size(); ++j) {
                    const Rect& p = b.parts[i];
                    const Rect& q = b.parts[j];
                    const double ox = std::min(p.x1, q.x1) - std::max(p.x0, q.x0);
                    const double oy = std::min(p.y1, q.y1) - std::max(p.y0, q.y0);
                    EXPECT_FALSE(ox > 1e-9 && oy > 1e-9);
                }
            }
        }
    }
}

TEST(GenerateScene, TreeSpacingAveragesTenMetres) {
    // consecutive trees on one corridor edge: same fixed coordinate, gap along the other
    double gap_sum = 0;
    int gaps = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = generate_scene(seed);
        std::map<double, std::vector<double>> rows;
        for (const auto& t : s.trees) rows[t.x].push_back(t.y);
        for (auto& [x, ys] : rows) {
            std::sort(ys.begin(), ys.end());
            for (std::size_t i = 1; i < ys.size(); ++i) {
                const double g = ys[i] - ys[i - 1];
                if (g <= 13.0) {  // skip gaps across intersections
                    gap_sum += g;
                    ++gaps;
                }
            }
        }
    }
    ASSERT_GT(gaps, 500);
    EXPECT_NEAR(gap_sum / gaps, 10.0, 0.3);
}

TEST(GenerateScene, ZeroBuildingsRasterizesToEmptyBuildingMap) {
    SceneParams p;
    p.building_count = 0;
    const auto s = generate_scene(7, p);
    EXPECT_TRUE(s.buildings.empty());
    EXPECT_FALSE(s.trees.empty());
    const auto m = rasterize_scene(s, 32, 32);
    for (float v : m.planes[kBuilding]) EXPECT_EQ(v, 0.0f);
}

TEST(GenerateScene, InfeasibleParametersAreGenerationErrors) {
    SceneParams dense;
    dense.building_density = 1.0;
    dense.max_retries = 5;
    EXPECT_THROW(generate_scene(1, dense), GenerationError);
    SceneParams crowded;
    crowded.building_count = 500;
    crowded.max_retries = 5;
    EXPECT_THROW(generate_scene(1, crowded), GenerationError);
    SceneParams bad;
    bad.world_size = 0;
    EXPECT_THROW(generate_scene(1, bad), ConfigError);
}

TEST(SceneFile, RoundTripIsExact) {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        const auto s = generate_scene(seed);
        const std::string text = to_text(s);
        std::istringstream in(text);
        const auto back = read_scene(in);
        EXPECT_EQ(back, s);
        EXPECT_EQ(to_text(back), text);
    }
}

TEST(SceneFile, RejectsMalformedInput) {
    std::istringstream no_header("world_size_m 512\n");
    EXPECT_THROW(read_scene(no_header), FormatError);
    std::istringstream bad_shape("scene v1\ntx_m 1 2 30\nbuilding Q 40 1 0 0 1 1\n");
    EXPECT_THROW(read_scene(bad_shape), FormatError);
    std::istringstream no_tx("scene v1\nfreq_ghz 5.8\n");
    EXPECT_THROW(read_scene(no_tx), FormatError);
    std::istringstream junk("scene v1\ntx_m 1 2 3 4\n");
    EXPECT_THROW(read_scene(junk), FormatError);
}

TEST(Rasterize, EmptySceneHasNoObstacles) {
    const auto m = rasterize_scene(empty_scene(), 16, 16);
    for (float v : m.planes[kBuilding]) EXPECT_EQ(v, 0.0f);
    for (float v : m.planes[kTree]) EXPECT_EQ(v, 0.0f);
}

TEST(Rasterize, WorldCoveringBuildingGivesHalf) {
    auto s = empty_scene();
    s.buildings.push_back({ShapeFamily::rect, 50.0, {{0, 0, 512, 512}}});
    const auto m = rasterize_scene(s, 16, 16);
    for (float v : m.planes[kBuilding]) EXPECT_EQ(v, 0.5f);
}

TEST(Rasterize, TransmitterIsOneScaledPixel) {
    // cell (5, 3) of a 16x16 grid over 512 m spans x in [96, 128), y in [160, 192)
    const auto m = rasterize_scene(empty_scene(100.0, 170.0, 80.0), 16, 16);
    int nonzero = 0;
    for (Index i = 0; i < 16; ++i) {
        for (Index j = 0; j < 16; ++j) {
            if (m.at(kTx, i, j) != 0.0f) {
                ++nonzero;
                EXPECT_EQ(i, 5);
                EXPECT_EQ(j, 3);
                EXPECT_EQ(m.at(kTx, i, j), 0.8f);
            }
        }
    }
    EXPECT_EQ(nonzero, 1);
}

TEST(Rasterize, ChannelsInUnitRangeAndFrequencyAffine) {
    const auto s = generate_scene(5);
    const auto m = rasterize_scene(s, 32, 32);
    for (const auto& plane : m.planes) {
        for (float v : plane) EXPECT_TRUE(v >= 0.0f && v <= 1.0f);
    }
    EXPECT_FLOAT_EQ(m.at(kFreq, 3, 4), static_cast<float>((s.freq_ghz - 5.735) / 0.09));
    EXPECT_EQ(normalize_freq(5.735), 0.0f);
    EXPECT_FLOAT_EQ(normalize_freq(5.825), 1.0f);
}

TEST(Rasterize, CellsAgreeWithPointQueries) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = generate_scene(seed);
        const Index H = 64, W = 64;
        const auto m = rasterize_scene(s, H, W);
        const double cell = s.world_size / 64.0;
        for (Index i = 0; i < H; ++i) {
            for (Index j = 0; j < W; ++j) {
                const double x = (j + 0.5) * cell, y = (i + 0.5) * cell;
                ASSERT_EQ(m.at(kBuilding, i, j), static_cast<float>(building_height_at(s, x, y) / 100.0));
                ASSERT_EQ(m.at(kTree, i, j), static_cast<float>(tree_height_at(s, x, y) / 100.0));
            }
        }
    }
}

TEST(Rasterize, GridChannelsAreResolutionConsistent) {
    const auto fine = rasterize_scene(empty_scene(), 64, 64);
    const auto coarse = rasterize_scene(empty_scene(), 32, 32);
    for (Index i = 0; i < 32; ++i) {
        for (Index j = 0; j < 32; ++j) {
            for (Index c : {kGridX, kGridY}) {
                const float avg = 0.25f * (fine.at(c, 2 * i, 2 * j) + fine.at(c, 2 * i, 2 * j + 1) +
                                           fine.at(c, 2 * i + 1, 2 * j) + fine.at(c, 2 * i + 1, 2 * j + 1));
                EXPECT_NEAR(avg, coarse.at(c, i, j), 1e-6f);
            }
        }
    }
    EXPECT_EQ(fine.at(kGridX, 7, 0), 0.5f / 64.0f);
    EXPECT_EQ(fine.at(kGridY, 63, 7), 63.5f / 64.0f);
}

TEST(Rasterize, ContractViolations) {
    EXPECT_THROW(rasterize_scene(empty_scene(600, 10), 16, 16), ContractError);
    EXPECT_THROW(rasterize_scene(empty_scene(), 4, 16), ContractError);
}

TEST(Rasterize, TensorLayout) {
    const auto m = rasterize_scene(empty_scene(), 8, 8);
    EXPECT_EQ(m.to_tensor().shape(), (Shape{6, 8, 8}));
    EXPECT_EQ(m.to_tensor(false).shape(), (Shape{4, 8, 8}));
}

TEST(Split, RatioExamples) {
    auto s = split_dataset(100, 99, 1, 3);
    EXPECT_EQ(s.train.size(), 99u);
    EXPECT_EQ(s.val.size(), 1u);
    s = split_dataset(10, 1, 1, 3);
    EXPECT_EQ(s.train.size(), 5u);
    EXPECT_EQ(s.val.size(), 5u);
    s = split_dataset(4096, 9, 1, 3);
    EXPECT_EQ(s.train.size(), 3686u);
}

TEST(Split, DisjointCoveringDeterministic) {
    const auto a = split_dataset(57, 9, 1, 11), b = split_dataset(57, 9, 1, 11);
    EXPECT_EQ(a.train, b.train);
    EXPECT_EQ(a.val, b.val);
    std::vector<std::size_t> all(a.train);
    all.insert(all.end(), a.val.begin(), a.val.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);
    EXPECT_THROW(split_dataset(1, 1, 1), ContractError);
    EXPECT_EQ(split_dataset(2, 99, 1).val.size(), 1u);
}
