#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <thread>

#include "odt/scenario.hpp"

using namespace odt;

namespace {

ScenarioSpec spec_from(const char* text) {
    std::istringstream in(text);
    return ScenarioSpec::parse(in);
}

const char* kHonest = R"(
device D otee
process agent device=D seed=42 size=131072
aggressor seed=42 size=131072
expect Protected
)";

}  // namespace

TEST_CASE("honest co-residence verifies Protected") {
    Rng rng(1000);
    ScenarioSpec spec = spec_from(kHonest);
    SessionRun run = run_scenario_once(spec, rng);

    CHECK(run.verdict == Verdict::Protected);
    CHECK(run.server.outcome.signature_ok);
    CHECK(run.server.outcome.equality_ok);
    CHECK(run.server.outcome.signer_device == "D");
    REQUIRE(run.server.stored_odt.has_value());
    REQUIRE(run.client.sent_odt.has_value());
    CHECK(run.server.stored_odt->serialize() == run.client.sent_odt->serialize());

    // both ends derived the same session key; witnesses agree; b_co clean
    CHECK(run.client.secrets.k == run.server.secrets.k);
    CHECK(run.client.secrets.transcript_hash == run.server.secrets.transcript_hash);
    CHECK(run.client.measurement.b_co == 1);
    CHECK(run.client.witness.scalar == run.server.expected_witness);
    // the aggressor parsed the real u from the nonce
    CHECK(run.server.u == run.client.u);
}

TEST_CASE("plain server run: handshake completes, token echoed and discarded") {
    Rng rng(1001);
    const char* text = R"(
device D otee
process agent device=D seed=7 size=1024
expect Inconclusive
)";
    SessionRun run = run_scenario_once(spec_from(text), rng);
    CHECK(run.verdict == Verdict::Inconclusive);
    CHECK(!run.server.outcome.signature_ok);
    // plain server still echoed and stored nothing about validity, but the
    // session itself completed with matching secrets
    CHECK(run.client.secrets.k == run.server.secrets.k);
    CHECK(run.client.sent_odt.has_value());
}

TEST_CASE("plain client against aggressor: no heartbeat, Inconclusive") {
    Rng rng(1002);
    const char* text = R"(
device D
process agent device=D seed=7 size=1024
aggressor seed=7 size=1024
expect Inconclusive
)";
    SessionRun run = run_scenario_once(spec_from(text), rng);
    CHECK(run.verdict == Verdict::Inconclusive);
    CHECK(!run.server.stored_odt.has_value());
    CHECK(!run.client.sent_odt.has_value());
    CHECK(run.client.secrets.k == run.server.secrets.k);
}

TEST_CASE("routing attack: witness mismatch, Inconclusive") {
    Rng rng(1003);
    ScenarioSpec spec = ScenarioSpec::parse_file(SCENARIO_DIR "/routing_attack.cfg");
    SessionRun run = run_scenario_once(spec, rng);
    CHECK(run.verdict == Verdict::Inconclusive);
    // the signature is genuine (a real O-TEE signed it)...
    CHECK(run.server.outcome.signature_ok);
    // ...but the equality fails: the proxy image was measured
    CHECK(!run.server.outcome.equality_ok);
    CHECK(!(run.client.witness.scalar == run.server.expected_witness));
}

TEST_CASE("routing with full mirror succeeds, demonstrating the f=1 limit") {
    Rng rng(1004);
    const char* text = R"(
device D otee
device DPRIME
process agent device=DPRIME seed=3 size=131072
clone agent to=D fraction=1.0
route agent via=D
aggressor seed=3 size=131072
expect Protected
)";
    SessionRun run = run_scenario_once(spec_from(text), rng);
    CHECK(run.verdict == Verdict::Protected);
}

TEST_CASE("interrupt during measurement clears b_co and fails equality") {
    Rng rng(1005);
    ScenarioSpec spec = spec_from(R"(
device D otee
process agent device=D seed=42 size=131072
interrupt read=2
aggressor seed=42 size=131072
expect Inconclusive
)");
    SessionRun run = run_scenario_once(spec, rng);
    CHECK(run.verdict == Verdict::Inconclusive);
    CHECK(run.client.measurement.b_co == 0);
    CHECK(run.server.outcome.signature_ok);
    CHECK(!run.server.outcome.equality_ok);
}

TEST_CASE("clone f=0: every read excepts") {
    Rng rng(1006);
    ScenarioSpec spec = spec_from(R"(
device D otee
device DPRIME
process agent device=DPRIME seed=3 size=131072
clone agent to=D fraction=0.0
route agent via=D
aggressor seed=3 size=131072
expect Inconclusive
)");
    SessionRun run = run_scenario_once(spec, rng);
    CHECK(run.verdict == Verdict::Inconclusive);
    CHECK(run.client.measurement.b_co == 0);
    for (uint64_t w : run.client.measurement.words) CHECK(w == 0);
}

TEST_CASE("verify_odt failure modes") {
    Rng rng(1007);
    ScenarioSpec spec = spec_from(kHonest);
    SessionRun run = run_scenario_once(spec, rng);
    REQUIRE(run.server.stored_odt.has_value());
    const OdtToken& token = *run.server.stored_odt;
    const Bytes32& k = run.server.secrets.k;
    const Scalar& s = run.server.s;

    Registry good;
    good.enroll(ed25519::keygen(rng).pk, "OTHER");  // unrelated key first
    // rebuild the registry that the run used is not possible here, so check
    // against an empty and an unrelated registry: signature must fail
    VerificationOutcome against_wrong = verify_odt(token, k, s, good);
    CHECK(!against_wrong.signature_ok);
    CHECK(against_wrong.verdict() == Verdict::Inconclusive);
    // equality still holds independently of the registry
    CHECK(against_wrong.equality_ok);

    // replay against a different session key: the signature covers H(k)
    Bytes32 other_k = rng.bytes32();
    Registry empty;
    VerificationOutcome replay = verify_odt(token, other_k, s, empty);
    CHECK(!replay.signature_ok);

    // wrong exponent: equality collapses
    VerificationOutcome wrong_s = verify_odt(token, k, Scalar::random(rng), empty);
    CHECK(!wrong_s.equality_ok);

    // mangled token: y that does not decode
    OdtToken bad = token;
    bad.y.fill(0xff);
    VerificationOutcome mangled = verify_odt(bad, k, s, empty);
    CHECK(!mangled.equality_ok);
    CHECK(mangled.verdict() == Verdict::Inconclusive);
}

TEST_CASE("client transcript shapes are identical against both server kinds") {
    auto shape_of = [](bool aggressor, uint64_t seed) {
        Rng rng(seed);
        const char* with_aggr = R"(
device D otee
process agent device=D seed=9 size=131072
aggressor seed=9 size=131072
)";
        const char* with_plain = R"(
device D otee
process agent device=D seed=9 size=131072
)";
        SessionRun run = run_scenario_once(
            spec_from(aggressor ? with_aggr : with_plain), rng);
        return run.client.shape;
    };

    for (uint64_t seed = 0; seed < 20; seed++) {
        wire::TranscriptShape a = shape_of(true, 2000 + seed);
        wire::TranscriptShape p = shape_of(false, 3000 + seed);
        REQUIRE(a.size() == p.size());
        for (size_t i = 0; i < a.size(); i++) CHECK(a[i] == p[i]);
    }
}

TEST_CASE("scenario replay is bit-identical for a fixed seed") {
    ScenarioSpec spec = spec_from(kHonest);
    Rng r1(77), r2(77);
    SessionRun a = run_scenario_once(spec, r1);
    SessionRun b = run_scenario_once(spec, r2);
    CHECK(a.wire_digest == b.wire_digest);
    CHECK(a.verdict == b.verdict);

    Rng r3(78);
    SessionRun c = run_scenario_once(spec, r3);
    CHECK(!(a.wire_digest == c.wire_digest));
}

TEST_CASE("scenario parser rejects malformed input") {
    CHECK_THROWS_AS(spec_from("device\n"), std::invalid_argument);
    CHECK_THROWS_AS(spec_from("device D\nprocess agent device=X seed=1 size=4\n"),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from("device D\nexpect Maybe\n"), std::invalid_argument);
    CHECK_THROWS_AS(spec_from("device D\nfrobnicate\n"), std::invalid_argument);
    CHECK_THROWS_AS(
        spec_from("device D\nprocess agent device=D seed=1 size=4\nclone agent to=D fraction=1.5\n"),
        std::invalid_argument);
    // missing client process
    CHECK_THROWS_AS(spec_from("device D\n"), std::invalid_argument);
}

TEST_CASE("scenario files on disk parse and meet their expectations once") {
    for (const char* name :
         {"/honest.cfg", "/routing_attack.cfg", "/interrupt.cfg", "/partial_clone.cfg"}) {
        ScenarioSpec spec = ScenarioSpec::parse_file(std::string(SCENARIO_DIR) + name);
        CHECK(spec.devices.size() >= 1);
    }
    Rng rng(4000);
    ScenarioOutcome honest = run_scenario(ScenarioSpec::parse_file(SCENARIO_DIR "/honest.cfg"),
                                          5, rng);
    CHECK(honest.expectation_met);
    CHECK(honest.protected_count == 5);

    ScenarioOutcome routing = run_scenario(
        ScenarioSpec::parse_file(SCENARIO_DIR "/routing_attack.cfg"), 5, rng);
    CHECK(routing.expectation_met);
    CHECK(routing.protected_count == 0);
}

TEST_CASE("partial clone success rate tracks f^m on a short run") {
    Rng rng(4001);
    ScenarioSpec spec = ScenarioSpec::parse_file(SCENARIO_DIR "/partial_clone.cfg");
    // shrink for unit-test speed; the acceptance suite runs the full 10^4
    ScenarioOutcome out = run_scenario(spec, 400, rng);
    // 0.03125 +- 1.96*sqrt(p(1-p)/400) ~= [0.014, 0.048]
    CHECK(out.rate() > 0.005);
    CHECK(out.rate() < 0.07);
}

TEST_CASE("tampered handshake byte aborts with MacMismatch semantics") {
    // flip one byte of the server finished in transit
    class CorruptStream final : public wire::Stream {
      public:
        CorruptStream(wire::Stream& inner) : inner_(inner) {}
        void write(std::span<const uint8_t> data) override { inner_.write(data); }
        size_t read(std::span<uint8_t> out) override {
            size_t n = inner_.read(out);
            if (flip_next_ && n > 0) {
                out[0] ^= 0x01;
                flip_next_ = false;
            }
            // a Finished header announces a 32-byte MAC body
            if (n == 4 && out[0] == 4 && out[1] == 0 && out[2] == 0 && out[3] == 32)
                flip_next_ = true;
            return n;
        }
        void close_write() override { inner_.close_write(); }

      private:
        wire::Stream& inner_;
        bool flip_next_ = false;
    };

    auto [client_end, server_end] = wire::MemoryStream::make_pair();
    Rng server_rng(5000), client_rng(5001);
    std::thread server([&] {
        try {
            plain_accept(*server_end, server_rng);
        } catch (const std::exception&) {
        }
    });
    CorruptStream corrupted(*client_end);
    CHECK_THROWS_AS(plain_client_connect(corrupted, client_rng), HandshakeAborted);
    client_end->close_write();
    server.join();
}
