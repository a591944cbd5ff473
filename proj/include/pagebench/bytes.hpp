// Copyright 2026 pagebench contributors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pagebench/errors.hpp"

namespace pagebench {

// All on-disk and on-wire integers are little-endian.

inline void put_u8(std::string& out, uint8_t v) {
    out.push_back(static_cast<char>(v));
}

inline void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_i32(std::string& out, int32_t v) {
    put_u32(out, static_cast<uint32_t>(v));
}

inline void put_i64(std::string& out, int64_t v) {
    put_u64(out, static_cast<uint64_t>(v));
}

// Bounds-checked cursor over a byte buffer. Throws ProtocolError on underrun.
class ByteReader {
public:
    ByteReader(const char* data, size_t size) : pos_(data), end_(data + size) {}
    explicit ByteReader(std::string_view bytes) : ByteReader(bytes.data(), bytes.size()) {}

    uint8_t u8() {
        need(1);
        return static_cast<uint8_t>(*pos_++);
    }

    uint16_t u16() {
        need(2);
        uint16_t v = static_cast<uint16_t>(byte(0) | (byte(1) << 8));
        pos_ += 2;
        return v;
    }

    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte(i)) << (8 * i);
        pos_ += 4;
        return v;
    }

    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte(i)) << (8 * i);
        pos_ += 8;
        return v;
    }

    int32_t i32() { return static_cast<int32_t>(u32()); }
    int64_t i64() { return static_cast<int64_t>(u64()); }

    std::string_view bytes(size_t n) {
        need(n);
        std::string_view v(pos_, n);
        pos_ += n;
        return v;
    }

    size_t remaining() const { return static_cast<size_t>(end_ - pos_); }
    bool done() const { return pos_ == end_; }

private:
    uint32_t byte(int i) const { return static_cast<uint8_t>(pos_[i]); }

    void need(size_t n) const {
        if (remaining() < n) throw ProtocolError("truncated input");
    }

    const char* pos_;
    const char* end_;
};

} // namespace pagebench
