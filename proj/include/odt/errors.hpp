#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odt {

// Commitment re-sampling did not find an encodable point; with a working RNG
// this has probability ~2^-128.
struct EncodingExhausted : std::runtime_error {
    EncodingExhausted() : std::runtime_error("no encodable commitment after 128 attempts") {}
};

// Diffie-Hellman produced the all-zero shared secret (small-order peer share).
struct DegenerateShare : std::runtime_error {
    DegenerateShare() : std::runtime_error("degenerate DH share") {}
};

struct MalformedFrame : std::runtime_error {
    explicit MalformedFrame(const std::string& what, size_t offset = 0)
        : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    size_t offset;
};

struct MacMismatch : std::runtime_error {
    MacMismatch() : std::runtime_error("finished MAC mismatch") {}
};

struct HandshakeAborted : std::runtime_error {
    explicit HandshakeAborted(const std::string& why)
        : std::runtime_error("handshake aborted: " + why) {}
};

struct RegionOverflow : std::runtime_error {
    explicit RegionOverflow(const std::string& why) : std::runtime_error(why) {}
};

struct InsufficientSamples : std::invalid_argument {
    explicit InsufficientSamples(size_t n)
        : std::invalid_argument("need at least 1000 samples, got " + std::to_string(n)) {}
};

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& why) : std::domain_error(why) {}
};

}  // namespace odt
