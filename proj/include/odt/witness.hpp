#pragma once

#include <functional>
#include <vector>

#include "odt/bytes.hpp"
#include "odt/device_sim.hpp"
#include "odt/scalar.hpp"

namespace odt {

struct ChallengeAddresses {
    std::vector<sim::VirtualAddress> addrs;
};

// c_i for i = 1..m: the word index is sha256(be64(i) || k) taken as a
// big-endian integer mod omega.total_words(). Deterministic in (k, m, omega),
// and each address depends only on its own index.
ChallengeAddresses select_addresses(const Bytes32& key, size_t m, const sim::Omega& omega);

struct MeasureResult {
    uint8_t b_co = 0;  // 1 = all reads clean and co-resident, 0 = exception seen
    std::vector<uint64_t> words;
};

// One memory load per challenge address, in order. An exceptional read leaves
// a zero word and clears b_co; it never aborts.
using ReadWordFn = std::function<std::optional<uint64_t>(sim::VirtualAddress)>;
MeasureResult measure(const ReadWordFn& read, const ChallengeAddresses& addrs);

// Plain lookup view of an image, no device mediation.
ReadWordFn image_view(const sim::ProcessImage& img);

// The verifier's forecast of a clean co-resident measurement of its
// reconstruction: b_co = 1 and the image's words at the challenge addresses
// (zero where the reconstruction has a gap). A prover result that carries an
// exception can therefore never match a forecast.
MeasureResult predict_clean_measurement(const sim::ProcessImage& img,
                                        const ChallengeAddresses& addrs);

struct Witness {
    Bytes32 digest;
    Scalar scalar;
};

// digest = sha256(byte(b_co) || be64(w_1) || ... || be64(w_m));
// scalar = digest mod l (big-endian).
Witness compute_witness(const MeasureResult& mr);

}  // namespace odt
