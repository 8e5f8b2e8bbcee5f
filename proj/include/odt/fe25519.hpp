#pragma once

#include <cstdint>

#include "odt/bytes.hpp"

namespace odt {

// Field element mod 2^255 - 19, five 51-bit limbs. All public operations
// return limbs < 2^52 and accept inputs with limbs < 2^53.
struct Fe {
    uint64_t v[5];

    static Fe zero() { return Fe{{0, 0, 0, 0, 0}}; }
    static Fe one() { return Fe{{1, 0, 0, 0, 0}}; }
    static Fe from_u64(uint64_t x) { return Fe{{x & ((1ull << 51) - 1), x >> 51, 0, 0, 0}}; }
};

Fe fe_add(const Fe& a, const Fe& b);
Fe fe_sub(const Fe& a, const Fe& b);
Fe fe_neg(const Fe& a);
Fe fe_mul(const Fe& a, const Fe& b);
Fe fe_sq(const Fe& a);
Fe fe_pow(const Fe& a, const uint8_t exp_le[32]);  // generic, exponent < 2^255
Fe fe_invert(const Fe& a);                         // a^(q-2); 0 maps to 0

// Canonical little-endian encoding (value fully reduced, top bit clear).
Bytes32 fe_tobytes(const Fe& a);
// Loads 32 bytes little-endian, ignoring bit 255; value may exceed q and is
// reduced implicitly by later arithmetic.
Fe fe_frombytes(const uint8_t b[32]);
// Strict variant: rejects encodings with value >= q or bit 255 set.
bool fe_frombytes_strict(Fe& out, const uint8_t b[32]);

bool fe_is_zero(const Fe& a);
bool fe_eq(const Fe& a, const Fe& b);
// Parity of the canonical value; the principal square root is the even one.
bool fe_is_odd(const Fe& a);

// Legendre symbol: 1 for nonzero squares, -1 for non-squares, 0 for zero.
int fe_chi(const Fe& a);
// Principal (even) square root, if one exists.
bool fe_sqrt(Fe& out, const Fe& a);

// sqrt(-1) mod q.
const Fe& fe_sqrt_m1();

}  // namespace odt
