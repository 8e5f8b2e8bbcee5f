#include "odt/x25519.hpp"

#include "odt/errors.hpp"
#include "odt/fe25519.hpp"

namespace odt {

namespace {

constexpr uint64_t kA24 = 121665;  // (486662 - 2) / 4

void clamp(Bytes32& k) {
    k[0] &= 248;
    k[31] &= 127;
    k[31] |= 64;
}

}  // namespace

Bytes32 x25519(const Bytes32& scalar, const Bytes32& u_coord) {
    Bytes32 k = scalar;
    clamp(k);
    Fe x1 = fe_frombytes(u_coord.data());

    Fe x2 = Fe::one(), z2 = Fe::zero();
    Fe x3 = x1, z3 = Fe::one();
    unsigned swap = 0;

    for (int t = 254; t >= 0; t--) {
        unsigned bit = (k[t >> 3] >> (t & 7)) & 1;
        swap ^= bit;
        if (swap) {
            std::swap(x2, x3);
            std::swap(z2, z3);
        }
        swap = bit;

        Fe a = fe_add(x2, z2);
        Fe aa = fe_sq(a);
        Fe b = fe_sub(x2, z2);
        Fe bb = fe_sq(b);
        Fe e = fe_sub(aa, bb);
        Fe c = fe_add(x3, z3);
        Fe d = fe_sub(x3, z3);
        Fe da = fe_mul(d, a);
        Fe cb = fe_mul(c, b);
        Fe t0 = fe_add(da, cb);
        x3 = fe_sq(t0);
        Fe t1 = fe_sub(da, cb);
        z3 = fe_mul(x1, fe_sq(t1));
        x2 = fe_mul(aa, bb);
        Fe t2 = fe_mul(Fe::from_u64(kA24), e);
        z2 = fe_mul(e, fe_add(aa, t2));
    }
    if (swap) {
        std::swap(x2, x3);
        std::swap(z2, z3);
    }
    return fe_tobytes(fe_mul(x2, fe_invert(z2)));
}

Bytes32 x25519_base(const Bytes32& scalar) {
    Bytes32 nine{};
    nine[0] = 9;
    return x25519(scalar, nine);
}

DhKeyPair dh_keygen(Rng& rng) {
    DhKeyPair kp;
    kp.secret = rng.bytes32();
    clamp(kp.secret);
    kp.public_key = x25519_base(kp.secret);
    return kp;
}

Bytes32 dh_shared(const Bytes32& secret, const Bytes32& peer_public) {
    Bytes32 hs = x25519(secret, peer_public);
    uint8_t acc = 0;
    for (uint8_t b : hs) acc |= b;
    if (acc == 0) throw DegenerateShare();
    return hs;
}

}  // namespace odt
