#pragma once

#include <optional>

#include "odt/fe25519.hpp"
#include "odt/scalar.hpp"

namespace odt {

// Point on the twisted Edwards curve -x^2 + y^2 = 1 + d x^2 y^2 in extended
// coordinates (X:Y:Z:T), T = XY/Z. The unified addition formulas are complete
// on the whole curve because d is a non-square.
struct Point {
    Fe X, Y, Z, T;

    static const Point& identity();
    static const Point& base();  // standard generator of the prime-order subgroup
};

const Fe& edwards_d();

Point point_add(const Point& p, const Point& q);
Point point_dbl(const Point& p);
Point point_neg(const Point& p);
Point scalar_mult(const Point& p, const Scalar& k);
// Raw bit-string exponent (used by ed25519 verification with unreduced values).
Point scalar_mult_bits(const Point& p, const uint8_t le_bytes[32]);
Point mul_by_cofactor(const Point& p);  // three doublings

bool point_eq(const Point& p, const Point& q);
bool point_is_identity(const Point& p);

// Canonical 32-byte encoding: y little-endian, sign of x in bit 255.
Bytes32 point_compress(const Point& p);
// Rejects non-canonical y, off-curve values, and x=0 with sign 1.
std::optional<Point> point_decompress(const uint8_t b[32]);

// Affine coordinates (x, y), Z = 1.
struct Affine {
    Fe x, y;
};
Affine point_to_affine(const Point& p);
Point point_from_affine(const Affine& a);

}  // namespace odt
