#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "odt/rng.hpp"

// Tiny independently-implemented group for cross-checking: the subgroup of
// squares mod 23 (order 11, generator 2). Exponentiation is brute-force
// repeated multiplication so it cannot share a bug with the fast path.
namespace oracle {

struct Mod11 {
    uint64_t v;  // 0..10

    static Mod11 from_u64(uint64_t x) { return Mod11{x % 11}; }
    Mod11 operator*(const Mod11& o) const { return Mod11{(v * o.v) % 11}; }
    Mod11 operator+(const Mod11& o) const { return Mod11{(v + o.v) % 11}; }
    Mod11 neg() const { return Mod11{(11 - v) % 11}; }
    bool operator==(const Mod11& o) const { return v == o.v; }
    bool is_zero() const { return v == 0; }
};

struct SquaresMod23 {
    struct Element {
        uint64_t v;  // in {1,2,3,4,6,8,9,12,13,16,18}
        bool operator==(const Element& o) const { return v == o.v; }
    };
    using Scalar = Mod11;
    static constexpr size_t encoded_size = 1;

    static Element identity() { return Element{1}; }
    static Element generator() { return Element{2}; }

    static Element mul(const Element& a, const Element& b) {
        return Element{(a.v * b.v) % 23};
    }

    static Element exp(const Element& b, const Scalar& k) {
        Element r = identity();
        for (uint64_t i = 0; i < k.v; i++) r = mul(r, b);
        return r;
    }

    static bool eq(const Element& a, const Element& b) { return a.v == b.v; }

    static Scalar random_scalar(odt::Rng& rng) { return Mod11{rng.below(11)}; }
    static Scalar random_nonzero_scalar(odt::Rng& rng) { return Mod11{1 + rng.below(10)}; }
    static Element random_element(odt::Rng& rng) {
        return exp(generator(), random_scalar(rng));
    }

    static std::array<uint8_t, 1> encode(const Element& e) {
        return {static_cast<uint8_t>(e.v)};
    }
    static std::optional<Element> decode(std::span<const uint8_t> b) {
        if (b.size() != 1) return std::nullopt;
        uint64_t x = b[0] % 23;
        // membership: x is a nonzero square mod 23
        for (uint64_t r = 1; r < 23; r++)
            if (r * r % 23 == x) return Element{x};
        return std::nullopt;
    }
    static bool encodable(const Element&) { return true; }
};

}  // namespace oracle
