#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "odt/bytes.hpp"

namespace odt {

// Deterministic random source. Every run of a protocol, scenario or sampler
// draws from one of these so that a fixed seed replays bit-identically.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    static Rng from_entropy() {
        std::random_device rd;
        uint64_t s = (static_cast<uint64_t>(rd()) << 32) ^ rd();
        return Rng(s);
    }

    uint64_t next_u64() { return gen_(); }

    void fill(std::span<uint8_t> out) {
        size_t i = 0;
        while (i + 8 <= out.size()) {
            uint64_t x = gen_();
            std::memcpy(out.data() + i, &x, 8);
            i += 8;
        }
        if (i < out.size()) {
            uint64_t x = gen_();
            std::memcpy(out.data() + i, &x, out.size() - i);
        }
    }

    Bytes32 bytes32() {
        Bytes32 b;
        fill(b);
        return b;
    }

    // Uniform value in [0, n), n >= 1.
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) {
        return std::generate_canonical<double, 53>(gen_) < p;
    }

    // Independent child generator; parent state advances by one draw.
    Rng fork() { return Rng(gen_() ^ 0x9e3779b97f4a7c15ull); }

  private:
    std::mt19937_64 gen_;
};

// Deterministic 64-bit stream used for process image contents. Separate from
// Rng so that image bytes depend only on the image seed, not on draw order.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    uint64_t state_;
};

}  // namespace odt
