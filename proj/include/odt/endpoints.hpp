#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odt/device_sim.hpp"
#include "odt/ed25519.hpp"
#include "odt/group.hpp"
#include "odt/ppet.hpp"
#include "odt/wire.hpp"
#include "odt/witness.hpp"
#include "odt/x25519.hpp"

namespace odt {

// Local table standing in for the neutral party's attestation registry:
// verification keys of provisioned O-TEEs, one per device.
class Registry {
  public:
    void enroll(const Bytes32& pk, const std::string& device_id);
    // Device owning the first registered key that verifies msg/sig.
    std::optional<std::string> find_signer(std::span<const uint8_t> msg,
                                           const Bytes64& sig) const;
    bool empty() const { return entries_.empty(); }

  private:
    std::vector<std::pair<Bytes32, std::string>> entries_;
};

struct OteeIdentity {
    ed25519::SigKeyPair keys;
    std::string device_id;
};

// The token carried in the heartbeat request: y || z || sigma, 128 bytes.
struct OdtToken {
    Bytes32 y;
    Bytes32 z;
    Bytes64 sigma;

    ByteVec serialize() const;
    static std::optional<OdtToken> parse(std::span<const uint8_t> b);
};

// Message covered by sigma: y || z || sha256(k).
ByteVec odt_signed_message(const Bytes32& y, const Bytes32& z, const Bytes32& k);

enum class Verdict { Protected, Inconclusive };
const char* to_string(Verdict v);

// The only assertion a verifier ever makes is "Protected"; every failure mode
// collapses into Inconclusive.
struct VerificationOutcome {
    bool signature_ok = false;
    bool equality_ok = false;
    std::string signer_device;  // set when signature_ok

    Verdict verdict() const {
        return signature_ok && equality_ok ? Verdict::Protected : Verdict::Inconclusive;
    }
};

// Offline check of a stored token against the session key k and commitment
// exponent s. Never throws; failures yield an inconclusive outcome.
VerificationOutcome verify_odt(const OdtToken& token, const Bytes32& k, const Scalar& s,
                               const Registry& registry);

struct SessionConfig {
    size_t measure_count = 5;  // m
    const sim::Omega* omega = &sim::Omega::default_layout();
};

struct ClientResult {
    wire::SessionSecrets secrets;
    wire::TranscriptShape shape;
    GroupElement u;
    std::optional<OdtToken> sent_odt;  // absent for the plain client
    MeasureResult measurement;         // what the O-TEE read
    Witness witness;
    uint64_t session_id = 0;
};

// O-TEE mediated client handshake (Fig. 6 left side): sends u in the hello
// nonce, measures the fronting process once the session key exists, and ships
// the token in a heartbeat. The flow never branches on the peer's nature.
ClientResult otee_connect(wire::Stream& io, sim::World& world, sim::Device& device,
                          const sim::ProcessImage& fronting, const OteeIdentity& identity,
                          Rng& rng, const SessionConfig& cfg = {});

// Ordinary TLS-shaped client: random nonce, no measurement, no heartbeat.
ClientResult plain_client_connect(wire::Stream& io, Rng& rng);

struct ServerResult {
    wire::SessionSecrets secrets;
    wire::TranscriptShape shape;
    Bytes32 nonce;                       // n1 actually sent
    std::optional<OdtToken> stored_odt;  // first heartbeat-carried token
    VerificationOutcome outcome;
    // verifier-side protocol state (aggressor only)
    GroupElement u;
    Scalar s;
    Scalar expected_witness;
};

// Aggressor server: hides the commitment in the hello nonce, completes a
// standard handshake, echoes heartbeats, and verifies any stored token
// offline. expected is its reconstruction of the agent's memory.
ServerResult aggressor_accept(wire::Stream& io, const sim::ProcessImage& expected,
                              const Registry& registry, Rng& rng,
                              const SessionConfig& cfg = {});

// Standard server: uniform nonce, echoes heartbeats, inspects nothing.
ServerResult plain_accept(wire::Stream& io, Rng& rng);

}  // namespace odt
