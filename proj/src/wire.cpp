#include "odt/wire.hpp"

namespace odt::wire {

void Stream::read_exact(std::span<uint8_t> out) {
    size_t got = 0;
    while (got < out.size()) {
        size_t n = read(out.subspan(got));
        if (n == 0) throw MalformedFrame("stream ended mid-frame", got);
        got += n;
    }
}

void MemoryStream::write(std::span<const uint8_t> data) {
    std::lock_guard lock(out_->mu);
    if (out_->closed) return;
    out_->data.insert(out_->data.end(), data.begin(), data.end());
    out_->cv.notify_all();
}

size_t MemoryStream::read(std::span<uint8_t> out) {
    std::unique_lock lock(in_->mu);
    in_->cv.wait(lock, [&] { return !in_->data.empty() || in_->closed; });
    if (in_->data.empty()) return 0;
    size_t n = std::min(out.size(), in_->data.size());
    for (size_t i = 0; i < n; i++) {
        out[i] = in_->data.front();
        in_->data.pop_front();
    }
    return n;
}

void MemoryStream::close_write() {
    std::lock_guard lock(out_->mu);
    out_->closed = true;
    out_->cv.notify_all();
}

std::pair<std::unique_ptr<MemoryStream>, std::unique_ptr<MemoryStream>>
MemoryStream::make_pair() {
    auto a = std::unique_ptr<MemoryStream>(new MemoryStream());
    auto b = std::unique_ptr<MemoryStream>(new MemoryStream());
    auto p1 = std::make_shared<Pipe>();
    auto p2 = std::make_shared<Pipe>();
    a->in_ = p1; a->out_ = p2;
    b->in_ = p2; b->out_ = p1;
    return {std::move(a), std::move(b)};
}

void write_frame(Stream& s, const Frame& f) {
    if (f.body.size() > kMaxFrameBody) throw MalformedFrame("frame body too large");
    uint8_t header[4];
    header[0] = static_cast<uint8_t>(f.type);
    header[1] = static_cast<uint8_t>(f.body.size() >> 16);
    header[2] = static_cast<uint8_t>(f.body.size() >> 8);
    header[3] = static_cast<uint8_t>(f.body.size());
    ByteVec buf;
    buf.reserve(4 + f.body.size());
    buf.insert(buf.end(), header, header + 4);
    append(buf, f.body);
    s.write(buf);
}

std::optional<Frame> read_frame(Stream& s) {
    uint8_t header[4];
    size_t n = s.read(std::span(header, 4));
    if (n == 0) return std::nullopt;  // clean EOF between frames
    if (n < 4) s.read_exact(std::span(header + n, 4 - n));

    size_t len = static_cast<size_t>(header[1]) << 16 |
                 static_cast<size_t>(header[2]) << 8 | header[3];
    if (len > kMaxFrameBody) throw MalformedFrame("frame length too large", 1);
    switch (header[0]) {
        case 1: case 2: case 3: case 4: case 24: break;
        default: throw MalformedFrame("unknown frame type", 0);
    }
    Frame f;
    f.type = static_cast<FrameType>(header[0]);
    f.body.resize(len);
    if (len > 0) s.read_exact(f.body);
    return f;
}

Frame encode_hello(FrameType t, const HelloBody& h) {
    Frame f;
    f.type = t;
    f.body.resize(64);
    std::memcpy(f.body.data(), h.random.data(), 32);
    std::memcpy(f.body.data() + 32, h.key_share.data(), 32);
    return f;
}

HelloBody decode_hello(const Frame& f) {
    if (f.body.size() != 64)
        throw MalformedFrame("hello body must be 64 bytes", f.body.size());
    HelloBody h;
    std::memcpy(h.random.data(), f.body.data(), 32);
    std::memcpy(h.key_share.data(), f.body.data() + 32, 32);
    return h;
}

Frame encode_heartbeat(const Heartbeat& hb, Rng& rng) {
    if (hb.payload.size() > kMaxHeartbeatPayload)
        throw MalformedFrame("heartbeat payload above 2048 bytes", 1);
    if (hb.hb_type != 1 && hb.hb_type != 2)
        throw MalformedFrame("bad heartbeat type", 0);
    Frame f;
    f.type = FrameType::Heartbeat;
    f.body.resize(3 + hb.payload.size() + kHeartbeatPaddingLen);
    f.body[0] = hb.hb_type;
    f.body[1] = static_cast<uint8_t>(hb.payload.size() >> 8);
    f.body[2] = static_cast<uint8_t>(hb.payload.size());
    std::memcpy(f.body.data() + 3, hb.payload.data(), hb.payload.size());
    rng.fill(std::span(f.body).subspan(3 + hb.payload.size()));
    return f;
}

Heartbeat decode_heartbeat(const Frame& f) {
    if (f.type != FrameType::Heartbeat) throw MalformedFrame("not a heartbeat frame", 0);
    if (f.body.size() < 3 + kHeartbeatPaddingLen)
        throw MalformedFrame("heartbeat body too short", f.body.size());
    Heartbeat hb;
    hb.hb_type = f.body[0];
    if (hb.hb_type != 1 && hb.hb_type != 2) throw MalformedFrame("bad heartbeat type", 0);
    size_t payload_len = static_cast<size_t>(f.body[1]) << 8 | f.body[2];
    if (payload_len > kMaxHeartbeatPayload)
        throw MalformedFrame("heartbeat payload above 2048 bytes", 1);
    if (f.body.size() != 3 + payload_len + kHeartbeatPaddingLen)
        throw MalformedFrame("heartbeat length mismatch", 3 + payload_len);
    hb.payload.assign(f.body.begin() + 3, f.body.begin() + 3 + payload_len);
    return hb;
}

Frame make_cert_frame(Rng& rng) {
    Frame f;
    f.type = FrameType::Certificate;
    f.body.resize(kCertBodyLen);
    rng.fill(f.body);
    return f;
}

Frame make_finished_frame(const Bytes32& mac) {
    Frame f;
    f.type = FrameType::Finished;
    f.body.assign(mac.begin(), mac.end());
    return f;
}

SessionSecrets SessionSecrets::derive(const Bytes32& hs) {
    SessionSecrets s;
    s.hs = hs;
    Bytes32 zero_salt{};
    Bytes32 prk = hkdf_extract(zero_salt, hs);
    ByteVec k = hkdf_expand(prk, "odt witness key", 32);
    ByteVec fk = hkdf_expand(prk, "odt finished", 32);
    std::memcpy(s.k.data(), k.data(), 32);
    std::memcpy(s.finished_key.data(), fk.data(), 32);
    s.transcript_hash.fill(0);
    return s;
}

Bytes32 finished_mac(const SessionSecrets& secrets, const Bytes32& transcript_hash) {
    return hmac_sha256(secrets.finished_key, transcript_hash);
}

void Transcript::absorb(const Frame& f) {
    data_.push_back(static_cast<uint8_t>(f.type));
    data_.push_back(static_cast<uint8_t>(f.body.size() >> 16));
    data_.push_back(static_cast<uint8_t>(f.body.size() >> 8));
    data_.push_back(static_cast<uint8_t>(f.body.size()));
    append(data_, f.body);
}

Bytes32 Transcript::hash() const { return sha256(data_); }

}  // namespace odt::wire
