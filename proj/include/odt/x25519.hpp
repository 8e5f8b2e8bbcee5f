#pragma once

#include "odt/bytes.hpp"
#include "odt/rng.hpp"

namespace odt {

// RFC 7748 X25519 over the shared field implementation.
Bytes32 x25519(const Bytes32& scalar, const Bytes32& u_coord);
Bytes32 x25519_base(const Bytes32& scalar);

struct DhKeyPair {
    Bytes32 secret;  // clamped
    Bytes32 public_key;
};

DhKeyPair dh_keygen(Rng& rng);
// Shared secret HS; throws DegenerateShare when the result is all zero.
Bytes32 dh_shared(const Bytes32& secret, const Bytes32& peer_public);

}  // namespace odt
