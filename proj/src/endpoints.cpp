#include "odt/endpoints.hpp"

#include "odt/sha2.hpp"

namespace odt {

using wire::Frame;
using wire::FrameType;

void Registry::enroll(const Bytes32& pk, const std::string& device_id) {
    entries_.emplace_back(pk, device_id);
}

std::optional<std::string> Registry::find_signer(std::span<const uint8_t> msg,
                                                 const Bytes64& sig) const {
    for (const auto& [pk, device] : entries_)
        if (ed25519::verify(pk, msg, sig)) return device;
    return std::nullopt;
}

ByteVec OdtToken::serialize() const {
    ByteVec out;
    out.reserve(128);
    append(out, y);
    append(out, z);
    append(out, sigma);
    return out;
}

std::optional<OdtToken> OdtToken::parse(std::span<const uint8_t> b) {
    if (b.size() != 128) return std::nullopt;
    OdtToken t;
    std::memcpy(t.y.data(), b.data(), 32);
    std::memcpy(t.z.data(), b.data() + 32, 32);
    std::memcpy(t.sigma.data(), b.data() + 64, 64);
    return t;
}

ByteVec odt_signed_message(const Bytes32& y, const Bytes32& z, const Bytes32& k) {
    ByteVec msg;
    msg.reserve(96);
    append(msg, y);
    append(msg, z);
    append(msg, sha256(k));
    return msg;
}

const char* to_string(Verdict v) {
    return v == Verdict::Protected ? "Protected" : "Inconclusive";
}

VerificationOutcome verify_odt(const OdtToken& token, const Bytes32& k, const Scalar& s,
                               const Registry& registry) {
    VerificationOutcome out;
    ByteVec msg = odt_signed_message(token.y, token.z, k);
    if (auto signer = registry.find_signer(msg, token.sigma)) {
        out.signature_ok = true;
        out.signer_device = *signer;
    }
    auto y = GroupElement::decode(token.y.data());
    auto z = GroupElement::decode(token.z.data());
    if (y && z) out.equality_ok = (*z == y->exp(s));
    return out;
}

namespace {

struct HandshakeFrames {
    wire::Transcript transcript;
    wire::TranscriptShape shape;
};

Frame recv_expected(wire::Stream& io, HandshakeFrames& hf, FrameType want) {
    std::optional<Frame> f = wire::read_frame(io);
    if (!f) throw HandshakeAborted("peer closed during handshake");
    if (f->type != want) throw HandshakeAborted("unexpected frame type");
    hf.transcript.absorb(*f);
    hf.shape.push_back({false, f->type, f->body.size()});
    return std::move(*f);
}

void send_frame(wire::Stream& io, HandshakeFrames& hf, const Frame& f) {
    wire::write_frame(io, f);
    hf.transcript.absorb(f);
    hf.shape.push_back({true, f.type, f.body.size()});
}

// Everything the client does between ClientHello and the end of the
// handshake, shared by the O-TEE and the plain client.
struct ClientHandshake {
    HandshakeFrames hf;
    wire::SessionSecrets secrets;
    Bytes32 server_nonce;
};

ClientHandshake client_handshake(wire::Stream& io, const Bytes32& nonce, Rng& rng) {
    ClientHandshake ch;
    DhKeyPair dh = dh_keygen(rng);
    send_frame(io, ch.hf, wire::encode_hello(FrameType::ClientHello, {nonce, dh.public_key}));

    Frame sh = recv_expected(io, ch.hf, FrameType::ServerHello);
    wire::HelloBody server_hello = wire::decode_hello(sh);
    ch.server_nonce = server_hello.random;

    recv_expected(io, ch.hf, FrameType::Certificate);

    // server Finished covers CH || SH || Cert
    Bytes32 th_server = ch.hf.transcript.hash();
    Bytes32 hs = dh_shared(dh.secret, server_hello.key_share);
    ch.secrets = wire::SessionSecrets::derive(hs);

    Frame fin_s = recv_expected(io, ch.hf, FrameType::Finished);
    Bytes32 want = wire::finished_mac(ch.secrets, th_server);
    if (fin_s.body.size() != 32 || std::memcmp(fin_s.body.data(), want.data(), 32) != 0)
        throw HandshakeAborted("server finished MAC mismatch");

    // client Finished covers CH || SH || Cert || Fin_s
    Bytes32 th_client = ch.hf.transcript.hash();
    send_frame(io, ch.hf, wire::make_finished_frame(wire::finished_mac(ch.secrets, th_client)));
    ch.secrets.transcript_hash = ch.hf.transcript.hash();
    return ch;
}

}  // namespace

ClientResult otee_connect(wire::Stream& io, sim::World& world, sim::Device& device,
                          const sim::ProcessImage& fronting, const OteeIdentity& identity,
                          Rng& rng, const SessionConfig& cfg) {
    ClientResult res;
    res.session_id = world.new_session();

    // Step 1: n0 carries a fresh group element, canonically encoded.
    res.u = prover_init<Curve25519Group>(rng);
    ClientHandshake ch = client_handshake(io, res.u.encode(), rng);
    res.secrets = ch.secrets;

    // Step 2: key-driven measurement of the process fronting this connection.
    ChallengeAddresses addrs = select_addresses(ch.secrets.k, cfg.measure_count, *cfg.omega);
    sim::MeasurementContext ctx{res.session_id};
    res.measurement = measure(
        [&](sim::VirtualAddress a) { return device.read_word(fronting, a, ctx); }, addrs);
    res.witness = compute_witness(res.measurement);

    // The nonce always decodes; the random branch exists for raw transports.
    GroupElement v = decode_uniform(UniformBytes32{ch.server_nonce});
    PpetResponse<Curve25519Group> resp =
        prover_respond<Curve25519Group>(res.u, std::optional(v), res.witness.scalar, rng);

    // Step 3: sign (y, z, H(k)) and ship the token in a heartbeat request.
    OdtToken token;
    token.y = resp.y.encode();
    token.z = resp.z.encode();
    token.sigma = ed25519::sign(identity.keys, odt_signed_message(token.y, token.z, ch.secrets.k));
    res.sent_odt = token;

    Frame hb = wire::encode_heartbeat({1, token.serialize()}, rng);
    wire::write_frame(io, hb);
    ch.hf.shape.push_back({true, FrameType::Heartbeat, hb.body.size()});

    std::optional<Frame> echo = wire::read_frame(io);
    if (!echo || echo->type != FrameType::Heartbeat)
        throw HandshakeAborted("no heartbeat response");
    wire::Heartbeat hb_resp = wire::decode_heartbeat(*echo);
    if (hb_resp.hb_type != 2 || hb_resp.payload != token.serialize())
        throw HandshakeAborted("heartbeat echo mismatch");
    ch.hf.shape.push_back({false, FrameType::Heartbeat, echo->body.size()});

    io.close_write();
    res.shape = std::move(ch.hf.shape);
    return res;
}

ClientResult plain_client_connect(wire::Stream& io, Rng& rng) {
    ClientResult res;
    ClientHandshake ch = client_handshake(io, rng.bytes32(), rng);
    res.secrets = ch.secrets;
    res.shape = std::move(ch.hf.shape);
    io.close_write();
    return res;
}

namespace {

// Shared server skeleton; nonce_fn sees the client hello and returns n1.
template <typename NonceFn, typename OnToken>
ServerResult server_session(wire::Stream& io, Rng& rng, NonceFn&& nonce_fn,
                            OnToken&& on_token) {
    ServerResult res;
    HandshakeFrames hf;

    Frame ch = recv_expected(io, hf, FrameType::ClientHello);
    wire::HelloBody client_hello = wire::decode_hello(ch);

    DhKeyPair dh = dh_keygen(rng);
    Bytes32 hs = dh_shared(dh.secret, client_hello.key_share);
    res.secrets = wire::SessionSecrets::derive(hs);

    res.nonce = nonce_fn(client_hello, res);
    send_frame(io, hf, wire::encode_hello(FrameType::ServerHello, {res.nonce, dh.public_key}));
    send_frame(io, hf, wire::make_cert_frame(rng));

    Bytes32 th_server = hf.transcript.hash();
    send_frame(io, hf, wire::make_finished_frame(wire::finished_mac(res.secrets, th_server)));

    Bytes32 th_client = hf.transcript.hash();
    Frame fin_c = recv_expected(io, hf, FrameType::Finished);
    Bytes32 want = wire::finished_mac(res.secrets, th_client);
    if (fin_c.body.size() != 32 || std::memcmp(fin_c.body.data(), want.data(), 32) != 0)
        throw HandshakeAborted("client finished MAC mismatch");
    res.secrets.transcript_hash = hf.transcript.hash();

    // Echo heartbeats until the client leaves; remember the first token.
    for (;;) {
        std::optional<Frame> f = wire::read_frame(io);
        if (!f) break;
        if (f->type != FrameType::Heartbeat) continue;  // opaque application data
        hf.shape.push_back({false, FrameType::Heartbeat, f->body.size()});
        wire::Heartbeat hb = wire::decode_heartbeat(*f);
        if (hb.hb_type != 1) continue;
        Frame echo = wire::encode_heartbeat({2, hb.payload}, rng);
        wire::write_frame(io, echo);
        hf.shape.push_back({true, FrameType::Heartbeat, echo.body.size()});
        if (!res.stored_odt) {
            if (auto token = OdtToken::parse(hb.payload)) {
                res.stored_odt = token;
                on_token(*token, res);
            }
        }
    }
    io.close_write();
    res.shape = std::move(hf.shape);
    return res;
}

}  // namespace

ServerResult aggressor_accept(wire::Stream& io, const sim::ProcessImage& expected,
                              const Registry& registry, Rng& rng, const SessionConfig& cfg) {
    std::optional<VerifierState<Curve25519Group>> st;
    auto nonce_fn = [&](const wire::HelloBody& hello, ServerResult& res) -> Bytes32 {
        // n0 is the prover's u when it parses; otherwise commit to a random u.
        std::optional<GroupElement> u = GroupElement::decode(hello.random.data());
        if (!u) u = Curve25519Group::random_element(rng);
        res.u = *u;

        ChallengeAddresses addrs = select_addresses(res.secrets.k, cfg.measure_count, *cfg.omega);
        Witness expected_witness = compute_witness(predict_clean_measurement(expected, addrs));
        res.expected_witness = expected_witness.scalar;

        st = verifier_commit<Curve25519Group>(*u, expected_witness.scalar, rng, true);
        res.s = st->s;
        std::optional<UniformBytes32> n1 = encode_uniform(st->v, rng);
        return n1->bytes;  // guaranteed by require_encodable
    };
    auto on_token = [&](const OdtToken& token, ServerResult& res) {
        res.outcome = verify_odt(token, res.secrets.k, st->s, registry);
    };
    return server_session(io, rng, nonce_fn, on_token);
}

ServerResult plain_accept(wire::Stream& io, Rng& rng) {
    auto nonce_fn = [&](const wire::HelloBody&, ServerResult&) { return rng.bytes32(); };
    auto on_token = [](const OdtToken&, ServerResult&) {};  // payloads are not inspected
    return server_session(io, rng, nonce_fn, on_token);
}

}  // namespace odt
