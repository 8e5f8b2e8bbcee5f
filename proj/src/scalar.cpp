#include "odt/scalar.hpp"

namespace odt {

const Scalar::uint256& Scalar::order() {
    static const uint256 l = [] {
        uint256 x = 1;
        x <<= 252;
        return x + uint256("27742317777372353535851937790883648493");
    }();
    return l;
}

Scalar Scalar::from_bytes_le(std::span<const uint8_t> b) {
    uint256 x = 0;
    for (size_t i = b.size(); i-- > 0;) x = (x << 8) | b[i];
    return Scalar(x % order());
}

Scalar Scalar::from_bytes_be(std::span<const uint8_t> b) {
    if (b.size() <= 32) {
        uint256 x = 0;
        for (uint8_t c : b) x = (x << 8) | c;
        return Scalar(x % order());
    }
    uint512 x = 0;
    for (uint8_t c : b) x = (x << 8) | c;
    return Scalar(static_cast<uint256>(x % uint512(order())));
}

Scalar Scalar::random(Rng& rng) {
    // Rejection-sample 253-bit values; l > 2^252 so this accepts > half the time.
    for (;;) {
        Bytes32 b = rng.bytes32();
        b[31] &= 0x1f;
        uint256 x = 0;
        for (size_t i = 32; i-- > 0;) x = (x << 8) | b[i];
        if (x < order()) return Scalar(x);
    }
}

Scalar Scalar::random_nonzero(Rng& rng) {
    for (;;) {
        Scalar s = random(rng);
        if (!s.is_zero()) return s;
    }
}

Bytes32 Scalar::to_bytes() const {
    Bytes32 out{};
    uint256 x = v_;
    for (size_t i = 0; i < 32; i++) {
        out[i] = static_cast<uint8_t>(x & 0xff);
        x >>= 8;
    }
    return out;
}

Scalar Scalar::invert() const {
    uint256 e = order() - 2;
    return Scalar(boost::multiprecision::powm(v_, e, order()));
}

}  // namespace odt
