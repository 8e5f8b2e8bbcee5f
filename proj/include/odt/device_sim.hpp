#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "odt/errors.hpp"
#include "odt/rng.hpp"

namespace odt::sim {

// 48-bit virtual address of an 8-byte-aligned word.
struct VirtualAddress {
    uint64_t value = 0;

    VirtualAddress() = default;
    explicit VirtualAddress(uint64_t v) : value(v) {
        if (v >= (1ull << 48)) throw std::invalid_argument("address beyond 48 bits");
        if (v & 7) throw std::invalid_argument("address not 8-byte aligned");
    }
    bool operator==(const VirtualAddress&) const = default;
};

struct AddressRange {
    uint64_t start = 0;  // inclusive, byte address
    uint64_t end = 0;    // exclusive
    uint64_t words() const { return (end - start) / 8; }
};

// Predefined measurable address ranges: disjoint, sorted, non-empty.
class Omega {
  public:
    explicit Omega(std::vector<AddressRange> ranges);
    // Single 1 MiB range at 0x10000000000: 2^17 words.
    static const Omega& default_layout();

    uint64_t total_words() const { return total_words_; }
    // Address of the idx-th word across the concatenated ranges.
    VirtualAddress word_address(uint64_t idx) const;
    bool contains(VirtualAddress a) const;
    const std::vector<AddressRange>& ranges() const { return ranges_; }

  private:
    std::vector<AddressRange> ranges_;
    uint64_t total_words_ = 0;
};

struct ProcessImage {
    std::string pid;
    std::string device;
    bool is_clone = false;  // staged memory copy, not a running process
    std::unordered_map<uint64_t, uint64_t> memory;  // aligned 48-bit addr -> word

    std::optional<uint64_t> peek(VirtualAddress a) const {
        auto it = memory.find(a.value);
        if (it == memory.end()) return std::nullopt;
        return it->second;
    }
};

// Per-session measurement context: the simulator analogue of the exception
// info a TEE records. Read indices are 1-based.
struct MeasurementContext {
    uint64_t session_id = 0;
    uint64_t reads_issued = 0;
    uint64_t exceptions = 0;
    bool exception_seen() const { return exceptions > 0; }
};

struct InterruptEvent {
    uint64_t session = 0;
    uint64_t read_index = 0;  // 1-based
    bool consumed = false;
};

class Device {
  public:
    Device() = default;
    Device(std::string id, bool has_otee) : id_(std::move(id)), has_otee_(has_otee) {}

    const std::string& id() const { return id_; }
    bool has_otee() const { return has_otee_; }

    ProcessImage& add_process(ProcessImage img);
    bool has_process(const std::string& pid) const { return processes_.count(pid) > 0; }
    ProcessImage& process(const std::string& pid);
    const ProcessImage& process(const std::string& pid) const;
    const std::map<std::string, ProcessImage>& processes() const { return processes_; }

    void schedule_interrupt(uint64_t session, uint64_t read_index);

    // One memory load. Returns the word, or nothing when the address is
    // unmapped or a scheduled interrupt fires at this read index; either way
    // the outcome is recorded in ctx.
    std::optional<uint64_t> read_word(const ProcessImage& p, VirtualAddress addr,
                                      MeasurementContext& ctx);

  private:
    std::string id_;
    bool has_otee_ = false;
    std::map<std::string, ProcessImage> processes_;
    std::vector<InterruptEvent> interrupts_;
};

// Traffic from one process egresses through another device (NAT-style).
struct RoutingRule {
    std::string process;     // source process pid
    std::string via_device;  // egress device; must differ from the owner
};

struct Endpoint {
    Device* device = nullptr;
    const ProcessImage* fronting = nullptr;
};

class World {
  public:
    Device& add_device(const std::string& id, bool has_otee);
    Device& device(const std::string& id);
    bool has_device(const std::string& id) const { return devices_.count(id) > 0; }

    void set_route(RoutingRule rule);
    const std::vector<RoutingRule>& routes() const { return routes_; }

    // Owner device of a process pid (unique across the world by construction).
    Device& owner_of(const std::string& pid);

    // Where a connection from `pid` terminates and which local process image
    // fronts it there. Without a route this is the process itself on its own
    // device. With a route, the egress device fronts the connection with its
    // local image of the same pid when one exists (a clone), and with a
    // process named "proxy" otherwise.
    Endpoint resolve_endpoint(const std::string& pid);

    uint64_t new_session() { return next_session_++; }

  private:
    std::map<std::string, Device> devices_;
    std::vector<RoutingRule> routes_;
    uint64_t next_session_ = 0;
};

// Deterministically fills the first size_words words of omega with a seeded
// stream. Same (seed, size) always produces the identical image.
ProcessImage make_process_image(const std::string& pid, const std::string& device,
                                uint64_t seed, uint64_t size_words,
                                const Omega& omega = Omega::default_layout());

ProcessImage& load_process(Device& dev, const std::string& pid, uint64_t seed,
                           uint64_t size_words,
                           const Omega& omega = Omega::default_layout());

// Copies each mapped word with probability f to a new image on dst; uncopied
// addresses stay unmapped there.
ProcessImage& clone_memory_subset(const ProcessImage& src, Device& dst, double fraction,
                                  Rng& rng);

}  // namespace odt::sim
