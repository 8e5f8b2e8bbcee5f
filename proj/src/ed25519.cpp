#include "odt/ed25519.hpp"

#include "odt/edwards.hpp"
#include "odt/sha2.hpp"

namespace odt::ed25519 {

namespace {

struct Expanded {
    Bytes32 s_bytes;  // clamped scalar bytes
    Bytes32 prefix;
};

Expanded expand(const Bytes32& seed) {
    Bytes64 h = sha512(seed);
    Expanded e;
    std::memcpy(e.s_bytes.data(), h.data(), 32);
    std::memcpy(e.prefix.data(), h.data() + 32, 32);
    e.s_bytes[0] &= 248;
    e.s_bytes[31] &= 63;
    e.s_bytes[31] |= 64;
    return e;
}

Scalar scalar_from_hash(std::span<const uint8_t> parts_hash) {
    // little-endian 64-byte value mod l
    Scalar::uint512 x = 0;
    for (size_t i = parts_hash.size(); i-- > 0;) x = (x << 8) | parts_hash[i];
    x %= Scalar::uint512(Scalar::order());
    Bytes32 le{};
    for (size_t i = 0; i < 32; i++) {
        le[i] = static_cast<uint8_t>(x & 0xff);
        x >>= 8;
    }
    return Scalar::from_bytes_le(le);
}

bool scalar_canonical(const uint8_t s_le[32]) {
    Scalar::uint256 x = 0;
    for (size_t i = 32; i-- > 0;) x = (x << 8) | s_le[i];
    return x < Scalar::order();
}

}  // namespace

SigKeyPair keygen(const Bytes32& seed) {
    Expanded e = expand(seed);
    Point a = scalar_mult_bits(Point::base(), e.s_bytes.data());
    return SigKeyPair{seed, point_compress(a)};
}

SigKeyPair keygen(Rng& rng) { return keygen(rng.bytes32()); }

Bytes64 sign(const SigKeyPair& keys, std::span<const uint8_t> msg) {
    Expanded e = expand(keys.sk);

    Sha512 h1;
    h1.update(e.prefix).update(msg);
    Scalar r = scalar_from_hash(h1.finish());
    Bytes32 r_enc = point_compress(scalar_mult(Point::base(), r));

    Sha512 h2;
    h2.update(r_enc).update(keys.pk).update(msg);
    Scalar k = scalar_from_hash(h2.finish());

    Scalar s = Scalar::from_bytes_le(e.s_bytes);
    Scalar sig_s = r + k * s;

    Bytes64 sig{};
    std::memcpy(sig.data(), r_enc.data(), 32);
    Bytes32 s_le = sig_s.to_bytes();
    std::memcpy(sig.data() + 32, s_le.data(), 32);
    return sig;
}

bool verify(const Bytes32& pk, std::span<const uint8_t> msg, const Bytes64& sig) {
    std::optional<Point> a = point_decompress(pk.data());
    if (!a) return false;
    std::optional<Point> r = point_decompress(sig.data());
    if (!r) return false;
    if (!scalar_canonical(sig.data() + 32)) return false;

    Bytes32 r_enc;
    std::memcpy(r_enc.data(), sig.data(), 32);
    Sha512 h;
    h.update(r_enc).update(pk).update(msg);
    Scalar k = scalar_from_hash(h.finish());

    Bytes32 s_le;
    std::memcpy(s_le.data(), sig.data() + 32, 32);
    Point lhs = scalar_mult(Point::base(), Scalar::from_bytes_le(s_le));
    Point rhs = point_add(*r, scalar_mult(*a, k));
    return point_eq(lhs, rhs);
}

}  // namespace odt::ed25519
