#include <CLI11.hpp>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <thread>

#include "odt/analysis.hpp"
#include "odt/net.hpp"
#include "odt/scenario.hpp"

using namespace odt;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;

uint64_t pick_seed(const std::optional<uint64_t>& seed) {
    if (seed) return *seed;
    return Rng::from_entropy().next_u64();
}

json odt_record(uint64_t session_id, const ServerResult& res) {
    json j;
    j["session_id"] = session_id;
    if (res.stored_odt) {
        j["y"] = to_hex(res.stored_odt->y);
        j["z"] = to_hex(res.stored_odt->z);
        j["sigma"] = to_hex(res.stored_odt->sigma);
    }
    j["k_hash"] = to_hex(sha256(res.secrets.k));
    j["outcome"] = to_string(res.outcome.verdict());
    j["signature_ok"] = res.outcome.signature_ok;
    j["equality_ok"] = res.outcome.equality_ok;
    return j;
}

int cmd_serve(const std::string& mode, const std::string& listen, uint64_t seed,
              uint64_t expect_seed, uint64_t expect_size, const std::string& odt_log,
              uint64_t max_sessions, const std::string& register_pk_hex) {
    Rng rng(seed);
    net::TcpListener listener(listen);
    std::cerr << "listening on port " << listener.port() << " (" << mode << ")\n";

    Registry registry;
    std::optional<sim::ProcessImage> expected;
    if (mode == "aggressor") {
        expected = sim::make_process_image("agent", "aggressor-host", expect_seed, expect_size);
        if (!register_pk_hex.empty())
            registry.enroll(array_from_hex<32>(register_pk_hex), "remote-otee");
    }

    std::ofstream log;
    if (!odt_log.empty()) log.open(odt_log, std::ios::app);

    std::atomic<uint64_t> session_counter{0};
    std::mutex io_mu;
    std::vector<std::thread> workers;
    for (uint64_t n = 0; max_sessions == 0 || n < max_sessions; n++) {
        auto conn = listener.accept();
        Rng session_rng = rng.fork();
        workers.emplace_back([&, conn = std::shared_ptr<net::TcpStream>(conn.release()),
                              session_rng]() mutable {
            uint64_t sid = session_counter++;
            try {
                ServerResult res = (mode == "aggressor")
                                       ? aggressor_accept(*conn, *expected, registry, session_rng)
                                       : plain_accept(*conn, session_rng);
                std::lock_guard lock(io_mu);
                json j = odt_record(sid, res);
                if (log.is_open()) log << j.dump() << "\n" << std::flush;
                std::cout << j.dump() << std::endl;
            } catch (const std::exception& e) {
                std::lock_guard lock(io_mu);
                std::cerr << "session " << sid << " failed: " << e.what() << "\n";
            }
        });
    }
    for (auto& w : workers) w.join();
    return kExitOk;
}

int cmd_connect(uint64_t process_seed, uint64_t process_size, const std::string& to,
                uint64_t seed, bool as_json, bool print_pk) {
    Rng rng(seed);
    sim::World world;
    sim::Device& dev = world.add_device("D", true);
    const sim::ProcessImage& proc = sim::load_process(dev, "agent", process_seed, process_size);
    OteeIdentity identity{ed25519::keygen(rng), "D"};
    if (print_pk) std::cerr << "otee_pk " << to_hex(identity.keys.pk) << "\n";

    auto stream = net::tcp_connect(to);
    ClientResult res = otee_connect(*stream, world, dev, proc, identity, rng);

    json j;
    j["b_co"] = static_cast<int>(res.measurement.b_co);
    j["witness"] = to_hex(res.witness.digest);
    j["k_hash"] = to_hex(sha256(res.secrets.k));
    j["otee_pk"] = to_hex(identity.keys.pk);
    if (res.sent_odt) j["odt"] = to_hex(res.sent_odt->serialize());
    if (as_json) std::cout << j.dump() << std::endl;
    else std::cout << "session complete, b_co=" << static_cast<int>(res.measurement.b_co)
                   << ", k_hash=" << j["k_hash"].get<std::string>() << "\n";
    return kExitOk;
}

int cmd_scenario(const std::string& file, uint64_t runs, uint64_t seed, bool as_json) {
    ScenarioSpec spec = ScenarioSpec::parse_file(file);
    Rng rng(seed);
    ScenarioOutcome out = run_scenario(spec, runs, rng);

    json j;
    j["file"] = file;
    j["runs"] = out.runs;
    j["protected"] = out.protected_count;
    j["rate"] = out.rate();
    j["expected"] = to_string(spec.expected);
    if (spec.expected_rate) j["expected_rate"] = *spec.expected_rate;
    j["expectation_met"] = out.expectation_met;
    if (as_json) {
        std::cout << j.dump() << std::endl;
    } else {
        std::cout << "runs=" << out.runs << " protected=" << out.protected_count
                  << " rate=" << out.rate() << " expectation_met="
                  << (out.expectation_met ? "yes" : "no") << "\n";
    }
    return out.expectation_met ? kExitOk : kExitMismatch;
}

int cmd_analyze(uint64_t samples, uint64_t seed, const std::string& out_file, bool as_json) {
    Rng rng(seed);
    stats::SampleSet aggr = stats::sample_aggressor_nonces(samples, rng);
    stats::SampleSet plain = stats::sample_plain_nonces(samples, rng);
    stats::UniformityReport rep = stats::uniformity_test(aggr, plain);

    if (!out_file.empty()) {
        std::ofstream csv(out_file);
        csv << "label,nonce_hex\n";
        for (const auto& s : aggr.samples) csv << "aggressor," << to_hex(s) << "\n";
        for (const auto& s : plain.samples) csv << "plain," << to_hex(s) << "\n";
    }

    bool pass = rep.byte_chi2_p > 0.001 && rep.max_abs_bit_z < 4.0 &&
                rep.distinguisher_advantage < 0.01;
    if (as_json) {
        json j = json::parse(rep.to_json());
        j["pass"] = pass;
        std::cout << j.dump() << std::endl;
    } else {
        std::cout << "byte_chi2_p=" << rep.byte_chi2_p
                  << " max|z|=" << rep.max_abs_bit_z
                  << " advantage=" << rep.distinguisher_advantage
                  << " pass=" << (pass ? "yes" : "no") << "\n";
    }
    return pass ? kExitOk : kExitMismatch;
}

int cmd_calc(const std::string& mode, uint64_t i_size, unsigned x_bits, uint64_t q,
             unsigned c, unsigned k_bits, bool as_json) {
    using stats::BigFloat;
    using stats::BigInt;
    BigFloat p;
    json j;
    j["mode"] = mode;
    if (mode == "key") {
        p = stats::preservation_bound_key(BigInt(i_size), BigInt(1) << x_bits, BigInt(q));
    } else {
        stats::PreservationParams params{BigInt(1) << x_bits, k_bits, c, BigInt(i_size),
                                         BigInt(q)};
        stats::GeneralBound g = stats::preservation_bound_general(params);
        p = g.probability;
        j["simplified_upper_log2"] =
            static_cast<double>(boost::multiprecision::log2(g.simplified_upper));
    }
    double log2p = p > 0 ? static_cast<double>(boost::multiprecision::log2(p))
                         : -std::numeric_limits<double>::infinity();
    j["probability"] = p.str(12);
    j["log2"] = log2p;
    if (as_json) std::cout << j.dump() << std::endl;
    else std::cout << "P = " << p.str(6) << " (= 2^" << log2p << ")\n";
    return kExitOk;
}

int cmd_bench(const std::string& target, uint64_t iters, uint64_t seed, bool as_json) {
    Rng rng(seed);
    std::vector<double> ms;
    ms.reserve(iters);
    using clock = std::chrono::steady_clock;

    if (target == "commitment") {
        GroupElement u = prover_init<Curve25519Group>(rng);
        for (uint64_t i = 0; i < iters; i++) {
            Scalar guess = Scalar::random(rng);
            auto t0 = clock::now();
            auto st = verifier_commit<Curve25519Group>(u, guess, rng, true);
            auto t1 = clock::now();
            (void)st;
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
    } else if (target == "elligator") {
        for (uint64_t i = 0; i < iters; i++) {
            UniformBytes32 n{rng.bytes32()};
            auto t0 = clock::now();
            GroupElement v = decode_uniform(n);
            auto t1 = clock::now();
            (void)v;
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
    } else if (target == "full_handshake") {
        std::istringstream cfg(R"(
device D otee
process agent device=D seed=42 size=131072
aggressor seed=42 size=131072
expect Protected
)");
        ScenarioSpec spec = ScenarioSpec::parse(cfg);
        for (uint64_t i = 0; i < iters; i++) {
            auto t0 = clock::now();
            SessionRun run = run_scenario_once(spec, rng);
            auto t1 = clock::now();
            if (run.verdict != Verdict::Protected) return kExitMismatch;
            ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
    } else {
        std::cerr << "unknown bench target " << target << "\n";
        return kExitUsage;
    }

    stats::BenchStats st = stats::summarize_timings(target, std::move(ms));
    if (as_json) std::cout << st.to_json() << std::endl;
    else std::cout << target << ": median=" << st.median_ms << "ms mean=" << st.mean_ms
                   << "ms stddev=" << st.stddev_ms << "ms over " << st.iters << " iters\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oblivious digital token toolkit"};
    app.require_subcommand(1);

    std::optional<uint64_t> seed;
    app.add_option("--seed", seed, "seed for all randomness (default: entropy)");
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    auto* serve = app.add_subcommand("serve", "run a TLS-shaped server");
    serve->fallthrough();
    std::string mode = "plain", listen = "127.0.0.1:0", odt_log, register_pk;
    uint64_t expect_seed = 0, expect_size = 1u << 17, max_sessions = 0;
    serve->add_option("--mode", mode, "plain|aggressor")
        ->check(CLI::IsMember({"plain", "aggressor"}));
    serve->add_option("--listen", listen, "host:port (port 0 picks one)");
    serve->add_option("--expect-seed", expect_seed, "seed of the expected agent image");
    serve->add_option("--expect-size", expect_size, "size of the expected agent image (words)");
    serve->add_option("--odt-log", odt_log, "append stored tokens as JSON lines");
    serve->add_option("--max-sessions", max_sessions, "stop after N sessions (0 = forever)");
    serve->add_option("--register-pk", register_pk, "hex verification key to enroll");

    auto* connect = app.add_subcommand("connect", "run the mediated client once");
    connect->fallthrough();
    uint64_t process_seed = 0, process_size = 1u << 17;
    std::string to;
    bool print_pk = false;
    connect->add_option("--process-seed", process_seed, "agent image seed");
    connect->add_option("--process-size", process_size, "agent image size in words");
    connect->add_option("--to", to, "server host:port")->required();
    connect->add_flag("--print-pk", print_pk, "print the signing key before connecting");

    auto* scenario = app.add_subcommand("scenario", "run a scenario file");
    scenario->fallthrough();
    std::string scenario_file;
    uint64_t runs = 1;
    scenario->add_option("file", scenario_file, "scenario config")->required();
    scenario->add_option("--runs", runs, "repetitions");

    auto* analyze = app.add_subcommand("analyze", "statistical distinguishers");
    analyze->fallthrough();
    auto* uniformity = analyze->add_subcommand("uniformity", "aggressor vs plain nonces");
    uniformity->fallthrough();
    uint64_t samples = 100000;
    std::string out_file;
    uniformity->add_option("--samples", samples, "samples per population");
    uniformity->add_option("--out", out_file, "CSV dump of both sample sets");

    auto* calc = app.add_subcommand("calc", "analytic security bounds");
    calc->fallthrough();
    auto* preservation = calc->add_subcommand("preservation", "guessing-game win probability");
    preservation->fallthrough();
    std::string calc_mode = "key";
    uint64_t i_size = 1u << 17, q = 1000000;
    unsigned x_bits = 64, c_locations = 1, k_bits = 0;
    preservation->add_option("--mode", calc_mode, "general|key")
        ->check(CLI::IsMember({"general", "key"}));
    preservation->add_option("--i-size", i_size, "number of measurable locations");
    preservation->add_option("--x-bits", x_bits, "log2 of values per location");
    preservation->add_option("--q", q, "query budget");
    preservation->add_option("--c", c_locations, "locations measured per query (general)");
    preservation->add_option("--k-bits", k_bits, "known bits per location (general)");

    auto* bench = app.add_subcommand("bench", "micro/macro benchmarks");
    bench->fallthrough();
    std::string target = "commitment";
    uint64_t iters = 1000;
    bench->add_option("--target", target, "commitment|elligator|full_handshake")
        ->check(CLI::IsMember({"commitment", "elligator", "full_handshake"}));
    bench->add_option("--iters", iters, "iterations")->check(CLI::Range(uint64_t{100}, UINT64_MAX));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*serve)
            return cmd_serve(mode, listen, pick_seed(seed), expect_seed, expect_size, odt_log,
                             max_sessions, register_pk);
        if (*connect)
            return cmd_connect(process_seed, process_size, to, pick_seed(seed), as_json, print_pk);
        if (*scenario) return cmd_scenario(scenario_file, runs, pick_seed(seed), as_json);
        if (*analyze) {
            if (!*uniformity) {
                std::cerr << "analyze requires the uniformity subcommand\n";
                return kExitUsage;
            }
            return cmd_analyze(samples, pick_seed(seed), out_file, as_json);
        }
        if (*calc) {
            if (!*preservation) {
                std::cerr << "calc requires the preservation subcommand\n";
                return kExitUsage;
            }
            return cmd_calc(calc_mode, i_size, x_bits, q, c_locations, k_bits, as_json);
        }
        if (*bench) return cmd_bench(target, iters, pick_seed(seed), as_json);
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMismatch;
    }
    return kExitUsage;
}
