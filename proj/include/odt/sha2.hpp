#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "odt/bytes.hpp"

namespace odt {

class Sha256 {
  public:
    Sha256() { reset(); }
    void reset();
    Sha256& update(std::span<const uint8_t> data);
    Sha256& update(std::string_view s) {
        return update(std::span<const uint8_t>(
            reinterpret_cast<const uint8_t*>(s.data()), s.size()));
    }
    Bytes32 finish();

  private:
    void compress(const uint8_t block[64]);
    uint32_t h_[8];
    uint8_t buf_[64];
    size_t buf_len_ = 0;
    uint64_t total_ = 0;
};

class Sha512 {
  public:
    Sha512() { reset(); }
    void reset();
    Sha512& update(std::span<const uint8_t> data);
    Bytes64 finish();

  private:
    void compress(const uint8_t block[128]);
    uint64_t h_[8];
    uint8_t buf_[128];
    size_t buf_len_ = 0;
    uint64_t total_ = 0;
};

Bytes32 sha256(std::span<const uint8_t> data);
Bytes64 sha512(std::span<const uint8_t> data);

Bytes32 hmac_sha256(std::span<const uint8_t> key, std::span<const uint8_t> data);

// RFC 5869
Bytes32 hkdf_extract(std::span<const uint8_t> salt, std::span<const uint8_t> ikm);
ByteVec hkdf_expand(const Bytes32& prk, std::string_view info, size_t length);

// Session key derivation: k = HKDF-Expand(HKDF-Extract(0^32, HS), "odt witness key", 32).
Bytes32 hkdf_derive(const Bytes32& hs);

}  // namespace odt
