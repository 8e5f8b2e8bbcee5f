#include "odt/fe25519.hpp"

#include <cstring>

namespace odt {

namespace {

using u128 = unsigned __int128;
constexpr uint64_t kMask = (1ull << 51) - 1;

// Carry so that all limbs end below 2^52.
Fe carry(u128 t0, u128 t1, u128 t2, u128 t3, u128 t4) {
    uint64_t c;
    c = static_cast<uint64_t>(t0 >> 51); t1 += c;
    uint64_t r0 = static_cast<uint64_t>(t0) & kMask;
    c = static_cast<uint64_t>(t1 >> 51); t2 += c;
    uint64_t r1 = static_cast<uint64_t>(t1) & kMask;
    c = static_cast<uint64_t>(t2 >> 51); t3 += c;
    uint64_t r2 = static_cast<uint64_t>(t2) & kMask;
    c = static_cast<uint64_t>(t3 >> 51); t4 += c;
    uint64_t r3 = static_cast<uint64_t>(t3) & kMask;
    c = static_cast<uint64_t>(t4 >> 51);
    uint64_t r4 = static_cast<uint64_t>(t4) & kMask;
    u128 fold = static_cast<u128>(19) * c + r0;
    r0 = static_cast<uint64_t>(fold) & kMask;
    r1 += static_cast<uint64_t>(fold >> 51);
    return Fe{{r0, r1, r2, r3, r4}};
}

}  // namespace

Fe fe_add(const Fe& a, const Fe& b) {
    return carry(static_cast<u128>(a.v[0]) + b.v[0], static_cast<u128>(a.v[1]) + b.v[1],
                 static_cast<u128>(a.v[2]) + b.v[2], static_cast<u128>(a.v[3]) + b.v[3],
                 static_cast<u128>(a.v[4]) + b.v[4]);
}

Fe fe_sub(const Fe& a, const Fe& b) {
    // Add 8q limbwise so intermediate terms stay non-negative.
    constexpr uint64_t two54m152 = (1ull << 54) - 152;
    constexpr uint64_t two54m8 = (1ull << 54) - 8;
    return carry(static_cast<u128>(a.v[0]) + two54m152 - b.v[0],
                 static_cast<u128>(a.v[1]) + two54m8 - b.v[1],
                 static_cast<u128>(a.v[2]) + two54m8 - b.v[2],
                 static_cast<u128>(a.v[3]) + two54m8 - b.v[3],
                 static_cast<u128>(a.v[4]) + two54m8 - b.v[4]);
}

Fe fe_neg(const Fe& a) { return fe_sub(Fe::zero(), a); }

Fe fe_mul(const Fe& f, const Fe& g) {
    u128 t0, t1, t2, t3, t4;
    uint64_t f0 = f.v[0], f1 = f.v[1], f2 = f.v[2], f3 = f.v[3], f4 = f.v[4];
    uint64_t g0 = g.v[0], g1 = g.v[1], g2 = g.v[2], g3 = g.v[3], g4 = g.v[4];
    uint64_t g1_19 = 19 * g1, g2_19 = 19 * g2, g3_19 = 19 * g3, g4_19 = 19 * g4;

    t0 = static_cast<u128>(f0) * g0 + static_cast<u128>(f1) * g4_19 +
         static_cast<u128>(f2) * g3_19 + static_cast<u128>(f3) * g2_19 +
         static_cast<u128>(f4) * g1_19;
    t1 = static_cast<u128>(f0) * g1 + static_cast<u128>(f1) * g0 +
         static_cast<u128>(f2) * g4_19 + static_cast<u128>(f3) * g3_19 +
         static_cast<u128>(f4) * g2_19;
    t2 = static_cast<u128>(f0) * g2 + static_cast<u128>(f1) * g1 +
         static_cast<u128>(f2) * g0 + static_cast<u128>(f3) * g4_19 +
         static_cast<u128>(f4) * g3_19;
    t3 = static_cast<u128>(f0) * g3 + static_cast<u128>(f1) * g2 +
         static_cast<u128>(f2) * g1 + static_cast<u128>(f3) * g0 +
         static_cast<u128>(f4) * g4_19;
    t4 = static_cast<u128>(f0) * g4 + static_cast<u128>(f1) * g3 +
         static_cast<u128>(f2) * g2 + static_cast<u128>(f3) * g1 +
         static_cast<u128>(f4) * g0;
    return carry(t0, t1, t2, t3, t4);
}

Fe fe_sq(const Fe& f) {
    uint64_t f0 = f.v[0], f1 = f.v[1], f2 = f.v[2], f3 = f.v[3], f4 = f.v[4];
    uint64_t d0 = 2 * f0, d1 = 2 * f1, d2 = 2 * f2, d3 = 2 * f3;
    uint64_t f3_19 = 19 * f3, f4_19 = 19 * f4;

    u128 t0 = static_cast<u128>(f0) * f0 + static_cast<u128>(d1) * f4_19 +
              static_cast<u128>(d2) * f3_19;
    u128 t1 = static_cast<u128>(d0) * f1 + static_cast<u128>(d2) * f4_19 +
              static_cast<u128>(f3) * f3_19;
    u128 t2 = static_cast<u128>(d0) * f2 + static_cast<u128>(f1) * f1 +
              static_cast<u128>(d3) * f4_19;
    u128 t3 = static_cast<u128>(d0) * f3 + static_cast<u128>(d1) * f2 +
              static_cast<u128>(f4) * f4_19;
    u128 t4 = static_cast<u128>(d0) * f4 + static_cast<u128>(d1) * f3 +
              static_cast<u128>(f2) * f2;
    return carry(t0, t1, t2, t3, t4);
}

Fe fe_pow(const Fe& a, const uint8_t exp_le[32]) {
    Fe r = Fe::one();
    bool started = false;
    for (int byte = 31; byte >= 0; byte--) {
        for (int bit = 7; bit >= 0; bit--) {
            if (started) r = fe_sq(r);
            if ((exp_le[byte] >> bit) & 1) {
                if (started) r = fe_mul(r, a);
                else { r = a; started = true; }
            }
        }
    }
    return r;
}

namespace {

Bytes32 exp_q_minus(uint64_t delta) {
    // 2^255 - 19 - delta = (2^255 - 1) - (18 + delta), little-endian
    Bytes32 e;
    e.fill(0xff);
    e[31] = 0x7f;
    uint64_t low = 18 + delta;
    uint64_t borrow = low;
    for (int i = 0; i < 8 && borrow; i++) {
        uint64_t d = borrow & 0xff;
        borrow >>= 8;
        if (e[i] >= d) e[i] -= static_cast<uint8_t>(d);
        else { e[i] = static_cast<uint8_t>(e[i] + 256 - d); borrow += 1; }
    }
    return e;
}

const Bytes32& exp_invert() {       // q - 2
    static const Bytes32 e = exp_q_minus(2);
    return e;
}

const Bytes32& exp_legendre() {     // (q - 1) / 2 = 2^254 - 10
    static const Bytes32 e = [] {
        Bytes32 x;
        x.fill(0xff);
        x[31] = 0x3f;
        x[0] = 0xf6;
        return x;
    }();
    return e;
}

const Bytes32& exp_sqrt() {         // (q + 3) / 8 = 2^252 - 2
    static const Bytes32 e = [] {
        Bytes32 x;
        x.fill(0xff);
        x[31] = 0x0f;
        x[0] = 0xfe;
        return x;
    }();
    return e;
}

}  // namespace

Fe fe_invert(const Fe& a) { return fe_pow(a, exp_invert().data()); }

Bytes32 fe_tobytes(const Fe& a) {
    // Two carry passes bring limbs below 2^51 + tiny, then subtract q if needed.
    Fe t = carry(a.v[0], a.v[1], a.v[2], a.v[3], a.v[4]);
    t = carry(t.v[0], t.v[1], t.v[2], t.v[3], t.v[4]);

    // Compute t + 19; if the result reaches 2^255 the value was >= q.
    uint64_t c = (t.v[0] + 19) >> 51;
    c = (t.v[1] + c) >> 51;
    c = (t.v[2] + c) >> 51;
    c = (t.v[3] + c) >> 51;
    c = (t.v[4] + c) >> 51;

    t.v[0] += 19 * c;
    uint64_t carry_ = t.v[0] >> 51; t.v[0] &= kMask;
    t.v[1] += carry_; carry_ = t.v[1] >> 51; t.v[1] &= kMask;
    t.v[2] += carry_; carry_ = t.v[2] >> 51; t.v[2] &= kMask;
    t.v[3] += carry_; carry_ = t.v[3] >> 51; t.v[3] &= kMask;
    t.v[4] += carry_; t.v[4] &= kMask;  // drop 2^255

    Bytes32 out{};
    uint64_t limbs[4];
    limbs[0] = t.v[0] | t.v[1] << 51;
    limbs[1] = t.v[1] >> 13 | t.v[2] << 38;
    limbs[2] = t.v[2] >> 26 | t.v[3] << 25;
    limbs[3] = t.v[3] >> 39 | t.v[4] << 12;
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 8; j++)
            out[8 * i + j] = static_cast<uint8_t>(limbs[i] >> (8 * j));
    return out;
}

Fe fe_frombytes(const uint8_t b[32]) {
    uint64_t w[4];
    for (int i = 0; i < 4; i++) {
        w[i] = 0;
        for (int j = 7; j >= 0; j--) w[i] = w[i] << 8 | b[8 * i + j];
    }
    Fe r;
    r.v[0] = w[0] & kMask;
    r.v[1] = (w[0] >> 51 | w[1] << 13) & kMask;
    r.v[2] = (w[1] >> 38 | w[2] << 26) & kMask;
    r.v[3] = (w[2] >> 25 | w[3] << 39) & kMask;
    r.v[4] = (w[3] >> 12) & kMask;  // drops bit 255
    return r;
}

bool fe_frombytes_strict(Fe& out, const uint8_t b[32]) {
    if (b[31] & 0x80) return false;
    Fe r = fe_frombytes(b);
    Bytes32 canon = fe_tobytes(r);
    if (std::memcmp(canon.data(), b, 32) != 0) return false;
    out = r;
    return true;
}

bool fe_is_zero(const Fe& a) {
    Bytes32 b = fe_tobytes(a);
    uint8_t acc = 0;
    for (uint8_t x : b) acc |= x;
    return acc == 0;
}

bool fe_eq(const Fe& a, const Fe& b) {
    return fe_tobytes(a) == fe_tobytes(b);
}

bool fe_is_odd(const Fe& a) { return fe_tobytes(a)[0] & 1; }

int fe_chi(const Fe& a) {
    if (fe_is_zero(a)) return 0;
    Fe r = fe_pow(a, exp_legendre().data());
    return fe_eq(r, Fe::one()) ? 1 : -1;
}

const Fe& fe_sqrt_m1() {
    static const Fe v = [] {
        // 2^((q-1)/4)
        Bytes32 e;
        e.fill(0xff);
        e[31] = 0x1f;
        e[0] = 0xfb;  // (q-1)/4 = 2^253 - 5
        return fe_pow(Fe::from_u64(2), e.data());
    }();
    return v;
}

bool fe_sqrt(Fe& out, const Fe& a) {
    if (fe_is_zero(a)) {
        out = Fe::zero();
        return true;
    }
    Fe t = fe_pow(a, exp_sqrt().data());
    Fe t2 = fe_sq(t);
    if (!fe_eq(t2, a)) {
        Fe neg_a = fe_neg(a);
        if (!fe_eq(t2, neg_a)) return false;
        t = fe_mul(t, fe_sqrt_m1());
    }
    if (fe_is_odd(t)) t = fe_neg(t);
    out = t;
    return true;
}

}  // namespace odt
