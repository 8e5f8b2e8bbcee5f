#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>

#include "odt/bytes.hpp"
#include "odt/rng.hpp"

namespace odt {

// Exponent ring modulo the group order
// l = 2^252 + 27742317777372353535851937790883648493.
class Scalar {
  public:
    using uint256 = boost::multiprecision::uint256_t;
    using uint512 = boost::multiprecision::uint512_t;

    Scalar() : v_(0) {}

    static const uint256& order();

    static Scalar from_u64(uint64_t x) { return Scalar(uint256(x)); }
    // Little-endian 32 bytes, reduced mod l.
    static Scalar from_bytes_le(std::span<const uint8_t> b);
    // Big-endian interpretation of a digest, reduced mod l.
    static Scalar from_bytes_be(std::span<const uint8_t> b);
    // Uniform scalar in [0, l).
    static Scalar random(Rng& rng);
    // Uniform nonzero scalar.
    static Scalar random_nonzero(Rng& rng);

    Bytes32 to_bytes() const;  // canonical little-endian

    Scalar operator+(const Scalar& o) const { return Scalar((v_ + o.v_) % order()); }
    Scalar operator-(const Scalar& o) const { return Scalar((v_ + order() - o.v_) % order()); }
    Scalar operator*(const Scalar& o) const {
        return Scalar(static_cast<uint256>(uint512(v_) * uint512(o.v_) % uint512(order())));
    }
    Scalar neg() const { return Scalar(v_ == 0 ? uint256(0) : order() - v_); }
    Scalar invert() const;  // v^(l-2); zero maps to zero

    bool operator==(const Scalar& o) const { return v_ == o.v_; }
    bool is_zero() const { return v_ == 0; }

    // Bit access for double-and-add (bit 0 = least significant).
    bool bit(size_t i) const { return boost::multiprecision::bit_test(v_, static_cast<unsigned>(i)); }

    const uint256& value() const { return v_; }

  private:
    explicit Scalar(uint256 v) : v_(std::move(v)) {}
    uint256 v_;
};

}  // namespace odt
