#pragma once

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "odt/bytes.hpp"
#include "odt/errors.hpp"
#include "odt/rng.hpp"
#include "odt/sha2.hpp"

namespace odt::wire {

// Frame header: 1-byte type, 3-byte big-endian length, then the body.
enum class FrameType : uint8_t {
    ClientHello = 1,
    ServerHello = 2,
    Certificate = 3,
    Finished = 4,
    Heartbeat = 24,
};

struct Frame {
    FrameType type;
    ByteVec body;
};

// Reliable byte stream. read() blocks until at least one byte or EOF.
class Stream {
  public:
    virtual ~Stream() = default;
    virtual void write(std::span<const uint8_t> data) = 0;
    virtual size_t read(std::span<uint8_t> out) = 0;  // 0 = EOF
    virtual void close_write() = 0;

    void read_exact(std::span<uint8_t> out);  // throws MalformedFrame on short read
};

// In-process duplex pipe; make_memory_pair returns the two ends.
class MemoryStream final : public Stream {
  public:
    void write(std::span<const uint8_t> data) override;
    size_t read(std::span<uint8_t> out) override;
    void close_write() override;

    static std::pair<std::unique_ptr<MemoryStream>, std::unique_ptr<MemoryStream>> make_pair();

  private:
    struct Pipe {
        std::mutex mu;
        std::condition_variable cv;
        std::deque<uint8_t> data;
        bool closed = false;
    };
    std::shared_ptr<Pipe> in_, out_;
};

void write_frame(Stream& s, const Frame& f);
// Empty on clean EOF at a frame boundary; MalformedFrame on a truncated or
// oversized frame.
std::optional<Frame> read_frame(Stream& s);

constexpr size_t kMaxFrameBody = 1 << 16;

// ClientHello and ServerHello share one 64-byte body shape:
// random (32) || key_share (32).
struct HelloBody {
    Bytes32 random;
    Bytes32 key_share;
};

Frame encode_hello(FrameType t, const HelloBody& h);
HelloBody decode_hello(const Frame& f);

// RFC 6520 heartbeat body: type (1) || payload_length (2, BE) || payload ||
// padding. Padding is fixed at exactly 16 random bytes.
constexpr size_t kHeartbeatPaddingLen = 16;
constexpr size_t kMaxHeartbeatPayload = 2048;

struct Heartbeat {
    uint8_t hb_type = 1;  // 1 = request, 2 = response
    ByteVec payload;
};

Frame encode_heartbeat(const Heartbeat& hb, Rng& rng);
Heartbeat decode_heartbeat(const Frame& f);

// Placeholder certificate frame: 64 opaque bytes.
constexpr size_t kCertBodyLen = 64;
Frame make_cert_frame(Rng& rng);

// Finished body: 32-byte HMAC over the running transcript hash.
Frame make_finished_frame(const Bytes32& mac);

// Diffie-Hellman handshake secret and the two keys expanded from it.
struct SessionSecrets {
    Bytes32 hs;               // raw X25519 shared secret
    Bytes32 k;                // witness/session key, info "odt witness key"
    Bytes32 finished_key;     // info "odt finished"
    Bytes32 transcript_hash;  // running hash at the end of the handshake

    static SessionSecrets derive(const Bytes32& hs);
};

Bytes32 finished_mac(const SessionSecrets& secrets, const Bytes32& transcript_hash);

// Accumulates the exact frame bytes both sides feed into Finished.
class Transcript {
  public:
    void absorb(const Frame& f);
    Bytes32 hash() const;

  private:
    ByteVec data_;
};

// Shape of a transcript: direction, type and length of every frame, the
// observable surface an on-path adversary can compare across servers.
struct FrameMeta {
    bool outbound;
    FrameType type;
    size_t body_len;
    bool operator==(const FrameMeta&) const = default;
};
using TranscriptShape = std::vector<FrameMeta>;

}  // namespace odt::wire
