#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "odt/endpoints.hpp"

namespace odt {

// Text scenario format, one directive per line, '#' comments:
//
//   device <id> [otee]
//   process <pid> device=<id> seed=<u64> size=<words>
//   clone <pid> to=<device> fraction=<float>
//   route <pid> via=<device>
//   interrupt read=<k> [session=<n>]
//   aggressor seed=<u64> size=<words>
//   client <pid>
//   expect <Protected|Inconclusive> [rate=<float>]
//
// The client process defaults to "agent". When a route points at a device
// that holds neither a clone of the client process nor an explicit "proxy"
// process, the runner creates a proxy with a fresh random image there.

struct ScenarioSpec {
    struct DeviceDecl {
        std::string id;
        bool otee = false;
    };
    struct ProcessDecl {
        std::string pid, device;
        uint64_t seed = 0, size = 0;
    };
    struct CloneDecl {
        std::string pid, to;
        double fraction = 1.0;
    };
    struct InterruptDecl {
        uint64_t read_index = 0;
        uint64_t session = 0;
    };

    std::vector<DeviceDecl> devices;
    std::vector<ProcessDecl> processes;
    std::vector<CloneDecl> clones;
    std::vector<sim::RoutingRule> routes;
    std::vector<InterruptDecl> interrupts;
    std::optional<std::pair<uint64_t, uint64_t>> aggressor_image;  // seed, size
    std::string client_pid = "agent";
    Verdict expected = Verdict::Inconclusive;
    std::optional<double> expected_rate;  // probabilistic scenarios

    static ScenarioSpec parse(std::istream& in);
    static ScenarioSpec parse_file(const std::string& path);
    void validate() const;
};

struct SessionRun {
    ClientResult client;
    ServerResult server;
    Verdict verdict;
    Bytes32 wire_digest;  // hash of every byte the client sent and received
};

// One in-memory session against the aggressor (or a plain server when the
// spec carries no aggressor image). The spec's world is rebuilt per run.
SessionRun run_scenario_once(const ScenarioSpec& spec, Rng& rng);

struct ScenarioOutcome {
    uint64_t runs = 0;
    uint64_t protected_count = 0;
    bool expectation_met = false;
    double rate() const { return runs ? static_cast<double>(protected_count) / runs : 0.0; }
};

// Repeats the scenario; for rate expectations the empirical rate must land in
// the central 95% binomial interval around the expected rate.
ScenarioOutcome run_scenario(const ScenarioSpec& spec, uint64_t runs, Rng& rng);

// Two-sided 95% interval around probability p over n trials.
std::pair<double, double> binomial_ci95(double p, uint64_t n);

}  // namespace odt
