#include "odt/analysis.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <sstream>

#include "odt/errors.hpp"
#include "odt/ppet.hpp"

namespace odt::stats {

namespace {

std::array<uint64_t, 256> byte_histogram(const std::vector<Bytes32>& samples, size_t from,
                                         size_t to) {
    std::array<uint64_t, 256> h{};
    for (size_t i = from; i < to; i++)
        for (uint8_t b : samples[i]) h[b]++;
    return h;
}

}  // namespace

double chi_square_sf(double x, double df) {
    if (x <= 0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

UniformityReport uniformity_test(const SampleSet& a, const SampleSet& b) {
    if (a.samples.size() < 1000) throw InsufficientSamples(a.samples.size());
    if (b.samples.size() < 1000) throw InsufficientSamples(b.samples.size());

    UniformityReport rep;
    const size_t na = a.samples.size(), nb = b.samples.size();

    // per-bit two-sample z-scores
    rep.bit_z.resize(256);
    std::array<uint64_t, 256> ca{}, cb{};
    for (const auto& s : a.samples)
        for (int bit = 0; bit < 256; bit++) ca[bit] += (s[bit >> 3] >> (bit & 7)) & 1;
    for (const auto& s : b.samples)
        for (int bit = 0; bit < 256; bit++) cb[bit] += (s[bit >> 3] >> (bit & 7)) & 1;
    for (int bit = 0; bit < 256; bit++) {
        double pa = static_cast<double>(ca[bit]) / na;
        double pb = static_cast<double>(cb[bit]) / nb;
        double pool = (static_cast<double>(ca[bit]) + cb[bit]) / (na + nb);
        double denom = std::sqrt(pool * (1.0 - pool) * (1.0 / na + 1.0 / nb));
        double z = denom > 0 ? (pa - pb) / denom : 0.0;
        rep.bit_z[bit] = z;
        rep.max_abs_bit_z = std::max(rep.max_abs_bit_z, std::abs(z));
    }

    // pooled byte-value two-sample chi-square, df = 255
    std::array<uint64_t, 256> ha = byte_histogram(a.samples, 0, na);
    std::array<uint64_t, 256> hb = byte_histogram(b.samples, 0, nb);
    double tot_a = 32.0 * na, tot_b = 32.0 * nb;
    double chi2 = 0.0;
    for (int v = 0; v < 256; v++) {
        double row = static_cast<double>(ha[v]) + hb[v];
        double ea = row * tot_a / (tot_a + tot_b);
        double eb = row * tot_b / (tot_a + tot_b);
        if (ea > 0) chi2 += (ha[v] - ea) * (ha[v] - ea) / ea;
        if (eb > 0) chi2 += (hb[v] - eb) * (hb[v] - eb) / eb;
    }
    rep.byte_chi2 = chi2;
    rep.byte_chi2_p = chi_square_sf(chi2, 255.0);

    // held-out logistic threshold distinguisher on byte histograms:
    // log-likelihood-ratio weights from the first half, accuracy on the rest
    size_t half_a = na / 2, half_b = nb / 2;
    std::array<uint64_t, 256> ta = byte_histogram(a.samples, 0, half_a);
    std::array<uint64_t, 256> tb = byte_histogram(b.samples, 0, half_b);
    std::array<double, 256> weight{};
    double tot_ta = 32.0 * half_a + 256.0, tot_tb = 32.0 * half_b + 256.0;
    for (int v = 0; v < 256; v++) {
        double fa = (static_cast<double>(ta[v]) + 1.0) / tot_ta;  // Laplace smoothing
        double fb = (static_cast<double>(tb[v]) + 1.0) / tot_tb;
        weight[v] = std::log(fa / fb);
    }
    auto classify_a = [&](const Bytes32& s) {
        double score = 0.0;
        for (uint8_t v : s) score += weight[v];
        return score >= 0.0;
    };
    uint64_t correct = 0, total = 0;
    for (size_t i = half_a; i < na; i++, total++) correct += classify_a(a.samples[i]);
    for (size_t i = half_b; i < nb; i++, total++) correct += !classify_a(b.samples[i]);
    rep.distinguisher_advantage =
        std::abs(static_cast<double>(correct) / static_cast<double>(total) - 0.5);
    return rep;
}

std::string UniformityReport::to_json() const {
    std::ostringstream os;
    os << "{\"max_abs_bit_z\":" << max_abs_bit_z << ",\"byte_chi2\":" << byte_chi2
       << ",\"byte_chi2_p\":" << byte_chi2_p
       << ",\"distinguisher_advantage\":" << distinguisher_advantage << "}";
    return os.str();
}

namespace {

BigInt binomial(const BigInt& n, unsigned k) {
    if (BigInt(k) > n) return 0;
    BigInt num = 1, den = 1;
    for (unsigned i = 0; i < k; i++) {
        num *= n - i;
        den *= i + 1;
    }
    return num / den;
}

BigFloat win_probability(const BigFloat& eps, const BigFloat& exponent) {
    // 1 - (1 - eps)^e, computed as -expm1(e * log1p(-eps))
    BigFloat l = boost::multiprecision::log1p(-eps);
    return -boost::multiprecision::expm1(exponent * l);
}

}  // namespace

GeneralBound preservation_bound_general(const PreservationParams& p) {
    if (p.queries < 1) throw DomainError("q must be >= 1");
    if (p.locations < 1 || BigInt(p.locations) > p.index_size)
        throw DomainError("C must satisfy 1 <= C <= |I|");
    BigInt known = BigInt(1) << p.known_bits;
    if (p.x_size <= known) throw DomainError("X must exceed 2^k");

    BigFloat base = BigFloat(p.x_size - known);
    BigFloat guess_space = boost::multiprecision::pow(base, static_cast<int>(p.locations));
    BigFloat per_subset = BigFloat(p.queries) / BigFloat(binomial(p.index_size, p.locations));
    BigFloat inner = guess_space - per_subset;
    if (inner <= 0) throw DomainError("(X - 2^k)^C must exceed q / binom(|I|, C)");

    GeneralBound out;
    out.probability = win_probability(1 / inner, BigFloat(p.queries));

    BigFloat pow2c = boost::multiprecision::pow(BigFloat(2), static_cast<int>(p.locations));
    BigFloat denom = pow2c - BigFloat(p.queries);
    out.simplified_upper = denom > 0 ? BigFloat(p.queries) / denom
                                     : BigFloat(1);
    return out;
}

BigFloat preservation_bound_key(const BigInt& index_size, const BigInt& x_size,
                                const BigInt& queries) {
    if (index_size < 1) throw DomainError("|I| must be >= 1");
    if (queries < 0) throw DomainError("q must be >= 0");
    BigFloat per_location = BigFloat(queries) / BigFloat(index_size);
    if (per_location >= BigFloat(x_size)) throw DomainError("q / |I| must stay below X");
    if (queries == 0) return BigFloat(0);
    BigFloat eps = 1 / (BigFloat(x_size) - per_location);
    return win_probability(eps, 4 * per_location);
}

CloneModel clone_success_model(double fraction, unsigned locations, uint64_t successes,
                               uint64_t trials) {
    if (fraction < 0.0 || fraction > 1.0) throw DomainError("fraction outside [0,1]");
    if (locations < 1) throw DomainError("locations must be >= 1");
    CloneModel m{};
    m.analytic = std::pow(fraction, static_cast<double>(locations));
    m.empirical_rate =
        trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    double half = trials ? 1.959963984540054 *
                               std::sqrt(m.analytic * (1.0 - m.analytic) /
                                         static_cast<double>(trials))
                         : 1.0;
    m.ci_low = std::max(0.0, m.analytic - half);
    m.ci_high = std::min(1.0, m.analytic + half);
    m.empirical_within_ci = m.empirical_rate >= m.ci_low && m.empirical_rate <= m.ci_high;
    return m;
}

BenchStats summarize_timings(const std::string& target, std::vector<double> samples_ms) {
    BenchStats st;
    st.target = target;
    st.iters = samples_ms.size();
    if (samples_ms.empty()) return st;
    std::sort(samples_ms.begin(), samples_ms.end());
    size_t n = samples_ms.size();
    st.median_ms = n % 2 ? samples_ms[n / 2]
                         : 0.5 * (samples_ms[n / 2 - 1] + samples_ms[n / 2]);
    double sum = 0.0;
    for (double v : samples_ms) sum += v;
    st.mean_ms = sum / static_cast<double>(n);
    double var = 0.0;
    for (double v : samples_ms) var += (v - st.mean_ms) * (v - st.mean_ms);
    st.stddev_ms = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    return st;
}

std::string BenchStats::to_json() const {
    std::ostringstream os;
    os << "{\"target\":\"" << target << "\",\"iters\":" << iters
       << ",\"median_ms\":" << median_ms << ",\"mean_ms\":" << mean_ms
       << ",\"stddev_ms\":" << stddev_ms << "}";
    return os.str();
}

SampleSet sample_plain_nonces(size_t n, Rng& rng) {
    SampleSet s{"plain", {}};
    s.samples.reserve(n);
    for (size_t i = 0; i < n; i++) s.samples.push_back(rng.bytes32());
    return s;
}

SampleSet sample_aggressor_nonces(size_t n, Rng& rng) {
    SampleSet s{"aggressor", {}};
    s.samples.reserve(n);
    for (size_t i = 0; i < n; i++) {
        GroupElement u = prover_init<Curve25519Group>(rng);
        Scalar guess = Scalar::random(rng);
        auto st = verifier_commit<Curve25519Group>(u, guess, rng, true);
        auto enc = encode_uniform(st.v, rng);
        s.samples.push_back(enc->bytes);  // guaranteed by require_encodable
    }
    return s;
}

SampleSet sample_biased_nonces(size_t n, Rng& rng) {
    SampleSet s{"biased", {}};
    s.samples.reserve(n);
    for (size_t i = 0; i < n; i++) {
        Bytes32 b = rng.bytes32();
        for (auto& v : b) v &= 0x7f;
        s.samples.push_back(b);
    }
    return s;
}

}  // namespace odt::stats
