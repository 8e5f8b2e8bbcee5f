#pragma once

#include <concepts>
#include <optional>

#include "odt/edwards.hpp"
#include "odt/elligator.hpp"
#include "odt/rng.hpp"
#include "odt/scalar.hpp"

namespace odt {

// Element of the prime-order subgroup of curve25519 (cofactor cleared or
// membership checked on every construction path).
class GroupElement {
  public:
    GroupElement() : p_(Point::identity()) {}

    static GroupElement identity() { return GroupElement(Point::identity()); }
    static GroupElement generator() { return GroupElement(Point::base()); }

    GroupElement exp(const Scalar& k) const { return GroupElement(scalar_mult(p_, k)); }
    GroupElement mul(const GroupElement& o) const { return GroupElement(point_add(p_, o.p_)); }
    bool operator==(const GroupElement& o) const { return point_eq(p_, o.p_); }
    bool is_identity() const { return point_is_identity(p_); }

    Bytes32 encode() const { return point_compress(p_); }
    // Canonical decode with subgroup membership check.
    static std::optional<GroupElement> decode(const uint8_t b[32]);

    // Wraps a point known to lie in the subgroup (internal constructors).
    static GroupElement from_subgroup_point(const Point& p) { return GroupElement(p); }
    const Point& point() const { return p_; }

  private:
    explicit GroupElement(const Point& p) : p_(p) {}
    Point p_;
};

// Uniform-looking 32-byte nonce carrying an Elligator representative in the
// low 254 bits; the top two bits of byte 31 are random padding.
struct UniformBytes32 {
    Bytes32 bytes;
};

// Deterministic representative of p, when one exists: the canonical Elligator
// preimage of (1/8)p. The padding bits are the only random part.
std::optional<UniformBytes32> encode_uniform(const GroupElement& p, Rng& rng);

// True when encode_uniform would succeed; shares the exact predicate.
bool is_uniform_encodable(const GroupElement& p);

// Total: strips the padding bits, applies the Elligator map and clears the
// cofactor. Every 32-byte string decodes to a subgroup element.
GroupElement decode_uniform(const UniformBytes32& n);

// Static trait used by the equality-test protocol; a structurally identical
// trait over a tiny oracle group backs the cross-checking tests.
struct Curve25519Group {
    using Element = GroupElement;
    using Scalar = odt::Scalar;
    static constexpr size_t encoded_size = 32;

    static Element identity() { return GroupElement::identity(); }
    static Element generator() { return GroupElement::generator(); }
    static Element exp(const Element& b, const Scalar& k) { return b.exp(k); }
    static Element mul(const Element& a, const Element& b) { return a.mul(b); }
    static bool eq(const Element& a, const Element& b) { return a == b; }

    static Scalar random_scalar(Rng& rng) { return Scalar::random(rng); }
    static Scalar random_nonzero_scalar(Rng& rng) { return Scalar::random_nonzero(rng); }
    static Element random_element(Rng& rng) {
        return generator().exp(Scalar::random(rng));
    }

    static std::array<uint8_t, 32> encode(const Element& e) { return e.encode(); }
    static std::optional<Element> decode(std::span<const uint8_t> b) {
        if (b.size() != 32) return std::nullopt;
        return GroupElement::decode(b.data());
    }
    static bool encodable(const Element& e) { return is_uniform_encodable(e); }
};

template <typename G>
concept PrimeOrderGroup = requires(typename G::Element e, typename G::Scalar s, Rng& rng) {
    { G::identity() } -> std::same_as<typename G::Element>;
    { G::generator() } -> std::same_as<typename G::Element>;
    { G::exp(e, s) } -> std::same_as<typename G::Element>;
    { G::mul(e, e) } -> std::same_as<typename G::Element>;
    { G::eq(e, e) } -> std::same_as<bool>;
    { G::random_scalar(rng) } -> std::same_as<typename G::Scalar>;
    { G::random_nonzero_scalar(rng) } -> std::same_as<typename G::Scalar>;
    { G::random_element(rng) } -> std::same_as<typename G::Element>;
    { G::encodable(e) } -> std::same_as<bool>;
    { s* s } -> std::same_as<typename G::Scalar>;
    { s.neg() } -> std::same_as<typename G::Scalar>;
};

static_assert(PrimeOrderGroup<Curve25519Group>);

}  // namespace odt
