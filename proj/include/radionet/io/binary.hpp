// Copyright (c) 2026, The RadioNet-CPP Authors
// SPDX-License-Identifier: Apache-2.0
//
// Little-endian encoding helpers shared by the binary formats.
#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "radionet/core/errors.hpp"

namespace radionet::bin {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xffu));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int k = 0; k < 8; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xffu));
}

inline void put_str(std::string& out, std::string_view s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out.append(s);
}

inline void put_f32s(std::string& out, std::span<const float> v) {
    if constexpr (std::endian::native == std::endian::little) {
        out.append(reinterpret_cast<const char*>(v.data()), v.size_bytes());
    } else {
        for (float f : v) put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
}

inline void f32s_from_le(const char* src, std::span<float> dst) {
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(dst.data(), src, dst.size_bytes());
    } else {
        for (std::size_t i = 0; i < dst.size(); ++i) {
            std::uint32_t v = 0;
            for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(src[4 * i + k])) << (8 * k);
            dst[i] = std::bit_cast<float>(v);
        }
    }
}

/// Bounds-checked sequential reader over a byte buffer.
class Reader {
public:
    Reader(std::string_view bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

    std::string_view take(std::size_t n) {
        if (bytes_.size() - pos_ < n) throw FormatError(what_ + ": truncated at byte " + std::to_string(pos_));
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32() {
        auto s = take(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[static_cast<std::size_t>(k)])) << (8 * k);
        return v;
    }
    std::uint64_t u64() {
        auto s = take(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[static_cast<std::size_t>(k)])) << (8 * k);
        return v;
    }
    std::string str(std::size_t max_len = 1 << 20) {
        const auto n = u32();
        if (n > max_len) throw FormatError(what_ + ": string length " + std::to_string(n) + " too large");
        return std::string(take(n));
    }
    void f32s(std::span<float> dst) { f32s_from_le(take(dst.size_bytes()).data(), dst); }
    bool done() const { return pos_ == bytes_.size(); }
    std::size_t position() const { return pos_; }

private:
    std::string_view bytes_;
    std::string what_;
    std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void write_file(const std::string& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

/// FNV-1a 64 over a byte range.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace radionet::bin
