#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace odt {

using Bytes32 = std::array<uint8_t, 32>;
using Bytes64 = std::array<uint8_t, 64>;
using ByteVec = std::vector<uint8_t>;

inline std::string to_hex(std::span<const uint8_t> data) {
    static const char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline ByteVec from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    ByteVec out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); i++)
        out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

template <size_t N>
std::array<uint8_t, N> array_from_hex(std::string_view hex) {
    ByteVec v = from_hex(hex);
    if (v.size() != N) throw std::invalid_argument("hex length mismatch");
    std::array<uint8_t, N> out{};
    std::memcpy(out.data(), v.data(), N);
    return out;
}

inline void put_be64(uint8_t* dst, uint64_t x) {
    for (int i = 7; i >= 0; i--) {
        dst[i] = static_cast<uint8_t>(x & 0xff);
        x >>= 8;
    }
}

inline uint64_t get_be64(const uint8_t* src) {
    uint64_t x = 0;
    for (int i = 0; i < 8; i++) x = x << 8 | src[i];
    return x;
}

inline void append(ByteVec& out, std::span<const uint8_t> data) {
    out.insert(out.end(), data.begin(), data.end());
}

inline void append_be64(ByteVec& out, uint64_t x) {
    uint8_t buf[8];
    put_be64(buf, x);
    out.insert(out.end(), buf, buf + 8);
}

}  // namespace odt
