#include "odt/witness.hpp"

#include "odt/sha2.hpp"

namespace odt {

namespace {

// 256-bit big-endian digest mod a u64 modulus.
uint64_t digest_mod(const Bytes32& digest, uint64_t modulus) {
    unsigned __int128 rem = 0;
    for (uint8_t b : digest) rem = (rem << 8 | b) % modulus;
    return static_cast<uint64_t>(rem);
}

}  // namespace

ChallengeAddresses select_addresses(const Bytes32& key, size_t m, const sim::Omega& omega) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    ChallengeAddresses out;
    out.addrs.reserve(m);
    for (uint64_t i = 1; i <= m; i++) {
        ByteVec buf;
        append_be64(buf, i);
        append(buf, key);
        Bytes32 digest = sha256(buf);
        out.addrs.push_back(omega.word_address(digest_mod(digest, omega.total_words())));
    }
    return out;
}

MeasureResult measure(const ReadWordFn& read, const ChallengeAddresses& addrs) {
    MeasureResult mr;
    mr.b_co = 1;
    mr.words.reserve(addrs.addrs.size());
    for (const auto& a : addrs.addrs) {
        std::optional<uint64_t> w = read(a);
        if (w) {
            mr.words.push_back(*w);
        } else {
            mr.words.push_back(0);
            mr.b_co = 0;
        }
    }
    return mr;
}

ReadWordFn image_view(const sim::ProcessImage& img) {
    return [&img](sim::VirtualAddress a) { return img.peek(a); };
}

MeasureResult predict_clean_measurement(const sim::ProcessImage& img,
                                        const ChallengeAddresses& addrs) {
    MeasureResult mr;
    mr.b_co = 1;
    mr.words.reserve(addrs.addrs.size());
    for (const auto& a : addrs.addrs) mr.words.push_back(img.peek(a).value_or(0));
    return mr;
}

Witness compute_witness(const MeasureResult& mr) {
    ByteVec buf;
    buf.push_back(mr.b_co);
    for (uint64_t w : mr.words) append_be64(buf, w);
    Witness out;
    out.digest = sha256(buf);
    out.scalar = Scalar::from_bytes_be(out.digest);
    return out;
}

}  // namespace odt
