#include "odt/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "odt/sha2.hpp"

namespace odt {

namespace {

std::map<std::string, std::string> parse_kv(std::istringstream& in, size_t line_no) {
    std::map<std::string, std::string> kv;
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

uint64_t need_u64(const std::map<std::string, std::string>& kv, const std::string& key,
                  size_t line_no) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": missing " + key);
    return std::stoull(it->second);
}

std::string need_str(const std::map<std::string, std::string>& kv, const std::string& key,
                     size_t line_no) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": missing " + key);
    return it->second;
}

// Stream wrapper that hashes everything crossing it, from the client's side.
class TapStream final : public wire::Stream {
  public:
    explicit TapStream(wire::Stream& inner) : inner_(inner) {}

    void write(std::span<const uint8_t> data) override {
        hash_.update(data);
        inner_.write(data);
    }
    size_t read(std::span<uint8_t> out) override {
        size_t n = inner_.read(out);
        hash_.update(out.subspan(0, n));
        return n;
    }
    void close_write() override { inner_.close_write(); }

    Bytes32 digest() { return hash_.finish(); }

  private:
    wire::Stream& inner_;
    Sha256 hash_;
};

}  // namespace

ScenarioSpec ScenarioSpec::parse(std::istream& in) {
    ScenarioSpec spec;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;

        if (word == "device") {
            DeviceDecl d;
            if (!(ls >> d.id))
                throw std::invalid_argument("line " + std::to_string(line_no) + ": device id");
            std::string flag;
            if (ls >> flag) {
                if (flag != "otee")
                    throw std::invalid_argument("line " + std::to_string(line_no) +
                                                ": unknown flag " + flag);
                d.otee = true;
            }
            spec.devices.push_back(d);
        } else if (word == "process") {
            ProcessDecl p;
            if (!(ls >> p.pid))
                throw std::invalid_argument("line " + std::to_string(line_no) + ": process pid");
            auto kv = parse_kv(ls, line_no);
            p.device = need_str(kv, "device", line_no);
            p.seed = need_u64(kv, "seed", line_no);
            p.size = need_u64(kv, "size", line_no);
            spec.processes.push_back(p);
        } else if (word == "clone") {
            CloneDecl c;
            if (!(ls >> c.pid))
                throw std::invalid_argument("line " + std::to_string(line_no) + ": clone pid");
            auto kv = parse_kv(ls, line_no);
            c.to = need_str(kv, "to", line_no);
            c.fraction = std::stod(need_str(kv, "fraction", line_no));
            spec.clones.push_back(c);
        } else if (word == "route") {
            std::string pid;
            if (!(ls >> pid))
                throw std::invalid_argument("line " + std::to_string(line_no) + ": route pid");
            auto kv = parse_kv(ls, line_no);
            spec.routes.push_back(sim::RoutingRule{pid, need_str(kv, "via", line_no)});
        } else if (word == "interrupt") {
            auto kv = parse_kv(ls, line_no);
            InterruptDecl i;
            i.read_index = need_u64(kv, "read", line_no);
            if (kv.count("session")) i.session = need_u64(kv, "session", line_no);
            spec.interrupts.push_back(i);
        } else if (word == "aggressor") {
            auto kv = parse_kv(ls, line_no);
            spec.aggressor_image = {need_u64(kv, "seed", line_no), need_u64(kv, "size", line_no)};
        } else if (word == "client") {
            if (!(ls >> spec.client_pid))
                throw std::invalid_argument("line " + std::to_string(line_no) + ": client pid");
        } else if (word == "expect") {
            std::string verdict;
            if (!(ls >> verdict))
                throw std::invalid_argument("line " + std::to_string(line_no) + ": expect verdict");
            if (verdict == "Protected") spec.expected = Verdict::Protected;
            else if (verdict == "Inconclusive") spec.expected = Verdict::Inconclusive;
            else
                throw std::invalid_argument("line " + std::to_string(line_no) +
                                            ": verdict must be Protected or Inconclusive");
            auto kv = parse_kv(ls, line_no);
            if (kv.count("rate")) spec.expected_rate = std::stod(kv.at("rate"));
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown directive " + word);
        }
    }
    spec.validate();
    return spec;
}

ScenarioSpec ScenarioSpec::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open scenario file " + path);
    return parse(f);
}

void ScenarioSpec::validate() const {
    auto has_device = [&](const std::string& id) {
        for (const auto& d : devices)
            if (d.id == id) return true;
        return false;
    };
    auto has_process = [&](const std::string& pid) {
        for (const auto& p : processes)
            if (p.pid == pid) return true;
        return false;
    };
    if (devices.empty()) throw std::invalid_argument("scenario declares no devices");
    for (const auto& p : processes)
        if (!has_device(p.device))
            throw std::invalid_argument("process " + p.pid + " on unknown device " + p.device);
    for (const auto& c : clones) {
        if (!has_process(c.pid)) throw std::invalid_argument("clone of unknown process " + c.pid);
        if (!has_device(c.to)) throw std::invalid_argument("clone to unknown device " + c.to);
        if (c.fraction < 0.0 || c.fraction > 1.0)
            throw std::invalid_argument("clone fraction outside [0,1]");
    }
    for (const auto& r : routes) {
        if (!has_process(r.process))
            throw std::invalid_argument("route for unknown process " + r.process);
        if (!has_device(r.via_device))
            throw std::invalid_argument("route via unknown device " + r.via_device);
    }
    if (!has_process(client_pid))
        throw std::invalid_argument("client process " + client_pid + " not declared");
    if (expected_rate && (*expected_rate < 0.0 || *expected_rate > 1.0))
        throw std::invalid_argument("expected rate outside [0,1]");
}

SessionRun run_scenario_once(const ScenarioSpec& spec, Rng& rng) {
    sim::World world;
    for (const auto& d : spec.devices) world.add_device(d.id, d.otee);
    for (const auto& p : spec.processes)
        sim::load_process(world.device(p.device), p.pid, p.seed, p.size);
    for (const auto& c : spec.clones) {
        const sim::ProcessImage& src = world.owner_of(c.pid).process(c.pid);
        sim::clone_memory_subset(src, world.device(c.to), c.fraction, rng);
    }
    // Routed egress devices front with a clone when one exists; otherwise
    // they get an independent random proxy (the NAT-style attack surface).
    for (const auto& r : spec.routes) {
        sim::Device& via = world.device(r.via_device);
        if (!via.has_process(r.process) && !via.has_process("proxy")) {
            uint64_t size = 1;
            for (const auto& p : spec.processes)
                if (p.pid == r.process) size = p.size;
            sim::load_process(via, "proxy", rng.next_u64(), size);
        }
        world.set_route(r);
    }

    sim::Endpoint ep = world.resolve_endpoint(spec.client_pid);
    for (const auto& i : spec.interrupts)
        ep.device->schedule_interrupt(i.session, i.read_index);

    Registry registry;
    std::map<std::string, OteeIdentity> identities;
    for (const auto& d : spec.devices) {
        if (!d.otee) continue;
        OteeIdentity id{ed25519::keygen(rng), d.id};
        registry.enroll(id.keys.pk, d.id);
        identities.emplace(d.id, id);
    }

    std::optional<sim::ProcessImage> expected;
    if (spec.aggressor_image)
        expected = sim::make_process_image(spec.client_pid, "aggressor-host",
                                           spec.aggressor_image->first,
                                           spec.aggressor_image->second);

    auto [client_end, server_end] = wire::MemoryStream::make_pair();
    Rng server_rng = rng.fork();
    Rng client_rng = rng.fork();

    SessionRun run{};
    std::thread server_thread([&] {
        if (expected) {
            run.server = aggressor_accept(*server_end, *expected, registry, server_rng);
        } else {
            run.server = plain_accept(*server_end, server_rng);
        }
    });

    TapStream tap(*client_end);
    if (ep.device->has_otee()) {
        run.client = otee_connect(tap, world, *ep.device, *ep.fronting,
                                  identities.at(ep.device->id()), client_rng);
    } else {
        run.client = plain_client_connect(tap, client_rng);
    }
    server_thread.join();

    run.verdict = run.server.outcome.verdict();
    run.wire_digest = tap.digest();
    return run;
}

ScenarioOutcome run_scenario(const ScenarioSpec& spec, uint64_t runs, Rng& rng) {
    ScenarioOutcome out;
    out.runs = runs;
    for (uint64_t i = 0; i < runs; i++) {
        SessionRun run = run_scenario_once(spec, rng);
        if (run.verdict == Verdict::Protected) out.protected_count++;
    }
    if (spec.expected_rate) {
        auto [lo, hi] = binomial_ci95(*spec.expected_rate, runs);
        out.expectation_met = out.rate() >= lo && out.rate() <= hi;
    } else if (spec.expected == Verdict::Protected) {
        out.expectation_met = out.protected_count == runs;
    } else {
        out.expectation_met = out.protected_count == 0;
    }
    return out;
}

std::pair<double, double> binomial_ci95(double p, uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

}  // namespace odt
