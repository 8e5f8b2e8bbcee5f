#include "odt/group.hpp"

namespace odt {

namespace {

const Bytes32& order_bytes() {
    static const Bytes32 b = [] {
        Bytes32 out{};
        auto l = Scalar::order();
        for (size_t i = 0; i < 32; i++) {
            out[i] = static_cast<uint8_t>(l & 0xff);
            l >>= 8;
        }
        return out;
    }();
    return b;
}

const Scalar& inv8() {
    static const Scalar s = Scalar::from_u64(8).invert();
    return s;
}

std::optional<Fe> representative_of(const GroupElement& p) {
    if (p.is_identity()) return std::nullopt;
    Point q = scalar_mult(p.point(), inv8());
    MontPoint m = edwards_to_mont(point_to_affine(q));
    return elligator_inverse(m);
}

}  // namespace

std::optional<GroupElement> GroupElement::decode(const uint8_t b[32]) {
    std::optional<Point> p = point_decompress(b);
    if (!p) return std::nullopt;
    // subgroup membership: l * p must be the identity
    if (!point_is_identity(scalar_mult_bits(*p, order_bytes().data())))
        return std::nullopt;
    return GroupElement(*p);
}

bool is_uniform_encodable(const GroupElement& p) {
    return representative_of(p).has_value();
}

std::optional<UniformBytes32> encode_uniform(const GroupElement& p, Rng& rng) {
    std::optional<Fe> rep = representative_of(p);
    if (!rep) return std::nullopt;
    UniformBytes32 out{fe_tobytes(*rep)};
    out.bytes[31] |= static_cast<uint8_t>(rng.next_u64() & 3) << 6;
    return out;
}

GroupElement decode_uniform(const UniformBytes32& n) {
    uint8_t b[32];
    std::memcpy(b, n.bytes.data(), 32);
    b[31] &= 0x3f;
    Fe r = fe_frombytes(b);
    Point p = mont_to_edwards(elligator_map(r));
    return GroupElement::from_subgroup_point(mul_by_cofactor(p));
}

}  // namespace odt
