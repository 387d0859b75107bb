// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scene text files, one scene per file, lengths in metres:
//
//   scene v1
//   world_size_m <s>
//   freq_ghz <f>
//   tx_m <x> <y> <height>
//   building <shape> <height> <n> <x0> <y0> <x1> <y1> ... (n rects)
//   tree_m <x> <y> <height>
//
// Numbers use the shortest round-trip decimal form, so write -> read is
// exact. Blank lines and lines starting with '#' are ignored.
#pragma once

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "radionet/scene/scene.hpp"

namespace radionet {

namespace scene_detail {

inline std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::istream& in, const std::string& line) {
    std::string tok;
    if (!(in >> tok)) throw FormatError("scene: missing number in line '" + line + "'");
    double v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
        throw FormatError("scene: bad number '" + tok + "'");
    }
    return v;
}

}  // namespace scene_detail

inline void write_scene(std::ostream& out, const SceneSpec& s) {
    using scene_detail::fmt;
    out << "scene v1\n";
    out << "world_size_m " << fmt(s.world_size) << '\n';
    out << "freq_ghz " << fmt(s.freq_ghz) << '\n';
    out << "tx_m " << fmt(s.tx.x) << ' ' << fmt(s.tx.y) << ' ' << fmt(s.tx.height) << '\n';
    for (const auto& b : s.buildings) {
        out << "building " << shape_name(b.shape) << ' ' << fmt(b.height) << ' ' << b.parts.size();
        for (const auto& r : b.parts) out << ' ' << fmt(r.x0) << ' ' << fmt(r.y0) << ' ' << fmt(r.x1) << ' ' << fmt(r.y1);
        out << '\n';
    }
    for (const auto& t : s.trees) out << "tree_m " << fmt(t.x) << ' ' << fmt(t.y) << ' ' << fmt(t.height) << '\n';
}

inline SceneSpec read_scene(std::istream& in) {
    using scene_detail::parse_double;
    std::string line;
    bool header = false, has_tx = false;
    SceneSpec s;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (!header) {
            std::string version;
            ls >> version;
            if (key != "scene" || version != "v1") throw FormatError("scene: expected 'scene v1' header");
            header = true;
        } else if (key == "world_size_m") {
            s.world_size = parse_double(ls, line);
        } else if (key == "freq_ghz") {
            s.freq_ghz = parse_double(ls, line);
        } else if (key == "tx_m") {
            s.tx.x = parse_double(ls, line);
            s.tx.y = parse_double(ls, line);
            s.tx.height = parse_double(ls, line);
            has_tx = true;
        } else if (key == "building") {
            Building b;
            std::string shape;
            std::size_t n = 0;
            if (!(ls >> shape)) throw FormatError("scene: building without shape");
            b.shape = parse_shape(shape);
            b.height = parse_double(ls, line);
            if (!(ls >> n) || n == 0) throw FormatError("scene: building needs a positive rect count");
            for (std::size_t i = 0; i < n; ++i) {
                Rect r;
                r.x0 = parse_double(ls, line);
                r.y0 = parse_double(ls, line);
                r.x1 = parse_double(ls, line);
                r.y1 = parse_double(ls, line);
                b.parts.push_back(r);
            }
            s.buildings.push_back(std::move(b));
        } else if (key == "tree_m") {
            Tree t;
            t.x = parse_double(ls, line);
            t.y = parse_double(ls, line);
            t.height = parse_double(ls, line);
            s.trees.push_back(t);
        } else {
            throw FormatError("scene: unknown record '" + key + "'");
        }
        std::string extra;
        if (ls >> extra) throw FormatError("scene: trailing data in line '" + line + "'");
    }
    if (!header) throw FormatError("scene: empty input");
    if (!has_tx) throw FormatError("scene: missing tx_m record");
    return s;
}

inline void save_scene(const std::string& path, const SceneSpec& s) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path + " for writing");
    write_scene(out, s);
    if (!out) throw FormatError("write failed: " + path);
}

inline SceneSpec load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open scene file " + path);
    return read_scene(in);
}

}  // namespace radionet
