#include "odt/device_sim.hpp"

#include <algorithm>

namespace odt::sim {

Omega::Omega(std::vector<AddressRange> ranges) : ranges_(std::move(ranges)) {
    if (ranges_.empty()) throw std::invalid_argument("omega needs at least one range");
    std::sort(ranges_.begin(), ranges_.end(),
              [](const AddressRange& a, const AddressRange& b) { return a.start < b.start; });
    uint64_t prev_end = 0;
    for (const auto& r : ranges_) {
        if (r.end <= r.start || (r.start & 7) || (r.end & 7))
            throw std::invalid_argument("malformed range");
        if (r.end > (1ull << 48)) throw std::invalid_argument("range beyond 48 bits");
        if (r.start < prev_end) throw std::invalid_argument("overlapping ranges");
        prev_end = r.end;
        total_words_ += r.words();
    }
    if (total_words_ == 0) throw std::invalid_argument("empty omega");
}

const Omega& Omega::default_layout() {
    static const Omega o({AddressRange{0x10000000000ull, 0x10000100000ull}});
    return o;
}

VirtualAddress Omega::word_address(uint64_t idx) const {
    for (const auto& r : ranges_) {
        if (idx < r.words()) return VirtualAddress(r.start + 8 * idx);
        idx -= r.words();
    }
    throw std::out_of_range("word index outside omega");
}

bool Omega::contains(VirtualAddress a) const {
    for (const auto& r : ranges_)
        if (a.value >= r.start && a.value < r.end) return true;
    return false;
}

ProcessImage& Device::add_process(ProcessImage img) {
    img.device = id_;
    auto [it, inserted] = processes_.insert_or_assign(img.pid, std::move(img));
    (void)inserted;
    return it->second;
}

ProcessImage& Device::process(const std::string& pid) {
    auto it = processes_.find(pid);
    if (it == processes_.end()) throw std::out_of_range("no process " + pid + " on " + id_);
    return it->second;
}

const ProcessImage& Device::process(const std::string& pid) const {
    auto it = processes_.find(pid);
    if (it == processes_.end()) throw std::out_of_range("no process " + pid + " on " + id_);
    return it->second;
}

void Device::schedule_interrupt(uint64_t session, uint64_t read_index) {
    interrupts_.push_back(InterruptEvent{session, read_index, false});
}

std::optional<uint64_t> Device::read_word(const ProcessImage& p, VirtualAddress addr,
                                          MeasurementContext& ctx) {
    uint64_t current = ++ctx.reads_issued;
    for (auto& ev : interrupts_) {
        if (!ev.consumed && ev.session == ctx.session_id && ev.read_index == current) {
            ev.consumed = true;
            ctx.exceptions++;
            return std::nullopt;
        }
    }
    auto word = p.peek(addr);
    if (!word) {
        ctx.exceptions++;
        return std::nullopt;
    }
    return word;
}

Device& World::add_device(const std::string& id, bool has_otee) {
    auto [it, inserted] = devices_.try_emplace(id, Device(id, has_otee));
    if (!inserted) throw std::invalid_argument("duplicate device " + id);
    return it->second;
}

Device& World::device(const std::string& id) {
    auto it = devices_.find(id);
    if (it == devices_.end()) throw std::out_of_range("no device " + id);
    return it->second;
}

void World::set_route(RoutingRule rule) {
    if (owner_of(rule.process).id() == rule.via_device)
        throw std::invalid_argument("route must cross devices");
    routes_.push_back(std::move(rule));
}

Device& World::owner_of(const std::string& pid) {
    for (auto& [id, dev] : devices_)
        if (dev.has_process(pid) && !dev.process(pid).is_clone) return dev;
    throw std::out_of_range("no device owns process " + pid);
}

Endpoint World::resolve_endpoint(const std::string& pid) {
    for (const auto& rule : routes_) {
        if (rule.process != pid) continue;
        Device& via = device(rule.via_device);
        const ProcessImage* front = nullptr;
        if (via.has_process(pid)) front = &via.process(pid);
        else if (via.has_process("proxy")) front = &via.process("proxy");
        else throw std::out_of_range("no fronting process on " + rule.via_device);
        return Endpoint{&via, front};
    }
    Device& own = owner_of(pid);
    return Endpoint{&own, &own.process(pid)};
}

ProcessImage make_process_image(const std::string& pid, const std::string& device,
                                uint64_t seed, uint64_t size_words, const Omega& omega) {
    if (size_words < 1) throw std::invalid_argument("size_words must be >= 1");
    if (size_words > omega.total_words())
        throw RegionOverflow("image of " + std::to_string(size_words) +
                             " words exceeds omega capacity " +
                             std::to_string(omega.total_words()));
    ProcessImage img;
    img.pid = pid;
    img.device = device;
    img.memory.reserve(size_words);
    SplitMix64 stream(seed);
    for (uint64_t i = 0; i < size_words; i++)
        img.memory.emplace(omega.word_address(i).value, stream.next());
    return img;
}

ProcessImage& load_process(Device& dev, const std::string& pid, uint64_t seed,
                           uint64_t size_words, const Omega& omega) {
    return dev.add_process(make_process_image(pid, dev.id(), seed, size_words, omega));
}

ProcessImage& clone_memory_subset(const ProcessImage& src, Device& dst, double fraction,
                                  Rng& rng) {
    if (fraction < 0.0 || fraction > 1.0) throw std::invalid_argument("fraction outside [0,1]");
    ProcessImage img;
    img.pid = src.pid;
    img.device = dst.id();
    img.is_clone = true;
    for (const auto& [addr, word] : src.memory) {
        if (fraction >= 1.0 || (fraction > 0.0 && rng.bernoulli(fraction)))
            img.memory.emplace(addr, word);
    }
    return dst.add_process(std::move(img));
}

}  // namespace odt::sim
