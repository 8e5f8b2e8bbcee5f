#pragma once

#include <span>

#include "odt/bytes.hpp"
#include "odt/rng.hpp"

namespace odt::ed25519 {

// RFC 8032 Ed25519 over the shared curve implementation. Signatures are
// deterministic for a fixed key and message.

struct SigKeyPair {
    Bytes32 sk;  // seed
    Bytes32 pk;
};

SigKeyPair keygen(const Bytes32& seed);
SigKeyPair keygen(Rng& rng);

Bytes64 sign(const SigKeyPair& keys, std::span<const uint8_t> msg);
// Never throws; any malformed input verifies false.
bool verify(const Bytes32& pk, std::span<const uint8_t> msg, const Bytes64& sig);

}  // namespace odt::ed25519
