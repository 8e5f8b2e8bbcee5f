#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

#include "odt/bytes.hpp"
#include "odt/rng.hpp"

namespace odt::stats {

using BigFloat = boost::multiprecision::cpp_bin_float_100;
using BigInt = boost::multiprecision::cpp_int;

// Labeled collection of fixed-width samples (nonces).
struct SampleSet {
    std::string label;
    std::vector<Bytes32> samples;
};

struct UniformityReport {
    std::vector<double> bit_z;  // 256 two-sample z-scores
    double max_abs_bit_z = 0.0;
    double byte_chi2 = 0.0;    // two-sample statistic over 256 byte values
    double byte_chi2_p = 0.0;  // upper tail, df = 255
    double distinguisher_advantage = 0.0;
    std::string to_json() const;
};

// Compares two nonce populations: per-bit-position frequency z-scores, a
// pooled byte-value chi-square, and the held-out accuracy of a logistic
// threshold distinguisher trained on byte histograms. Deterministic in the
// inputs. Both sets need >= 1000 samples.
UniformityReport uniformity_test(const SampleSet& a, const SampleSet& b);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

struct PreservationParams {
    BigInt x_size;          // values a location can hold, e.g. 2^64
    unsigned known_bits;    // adversary's prior knowledge per location
    unsigned locations;     // C, locations measured per query
    BigInt index_size;      // |I|, number of measurable locations
    BigInt queries;         // q >= 1
};

struct GeneralBound {
    BigFloat probability;      // exact formula at high precision
    BigFloat simplified_upper; // q / (2^C - q)
};

// Adversary success probability for the partial-knowledge game:
// P = 1 - (1 - ((X - 2^k)^C - q / binom(I, C))^-1)^q.
// DomainError when (X - 2^k)^C <= q / binom(I, C) or parameters are invalid.
GeneralBound preservation_bound_general(const PreservationParams& p);

// Key-extraction game: 1 - (1 - (X - q/I)^-1)^(4 q / I), with q/I real.
// DomainError when q/I >= X.
BigFloat preservation_bound_key(const BigInt& index_size, const BigInt& x_size,
                                const BigInt& queries);

struct CloneModel {
    double analytic;  // f^m
    double empirical_rate;
    double ci_low, ci_high;  // 95% interval around the analytic rate
    bool empirical_within_ci;
};

CloneModel clone_success_model(double fraction, unsigned locations, uint64_t successes,
                               uint64_t trials);

struct BenchStats {
    std::string target;
    size_t iters = 0;
    double median_ms = 0.0;
    double mean_ms = 0.0;
    double stddev_ms = 0.0;
    std::string to_json() const;
};

BenchStats summarize_timings(const std::string& target, std::vector<double> samples_ms);

// Samplers for the obliviousness tests.
SampleSet sample_plain_nonces(size_t n, Rng& rng);
// n1 values as the aggressor builds them: fresh u, random witness guess,
// encodable commitment, uniform encoding.
SampleSet sample_aggressor_nonces(size_t n, Rng& rng);
// Positive control: every byte has its top bit cleared.
SampleSet sample_biased_nonces(size_t n, Rng& rng);

}  // namespace odt::stats
