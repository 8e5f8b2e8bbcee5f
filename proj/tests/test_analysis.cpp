#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "odt/analysis.hpp"
#include "odt/errors.hpp"

using namespace odt;
using namespace odt::stats;

TEST_CASE("chi-square survival function spot values") {
    // chi2 sf reference values (scipy): sf(255, 255) ~ 0.4887, sf(310, 255) ~ 0.0105
    CHECK(chi_square_sf(255.0, 255.0) == doctest::Approx(0.48867).epsilon(1e-3));
    CHECK(chi_square_sf(310.0, 255.0) == doctest::Approx(0.010515).epsilon(1e-3));
    CHECK(chi_square_sf(0.0, 255.0) == doctest::Approx(1.0));
    CHECK(chi_square_sf(1e4, 255.0) < 1e-100);
}

TEST_CASE("uniformity null case") {
    Rng rng(1);
    SampleSet a = sample_plain_nonces(4000, rng);
    SampleSet b = sample_plain_nonces(4000, rng);
    UniformityReport rep = uniformity_test(a, b);
    CHECK(rep.byte_chi2_p > 0.001);
    CHECK(rep.max_abs_bit_z < 5.0);
    CHECK(rep.distinguisher_advantage < 0.02);
}

TEST_CASE("uniformity planted positive control") {
    Rng rng(2);
    SampleSet a = sample_plain_nonces(4000, rng);
    SampleSet b = sample_biased_nonces(4000, rng);
    UniformityReport rep = uniformity_test(a, b);
    CHECK(rep.byte_chi2_p < 1e-10);
    CHECK(rep.max_abs_bit_z > 10.0);
    CHECK(rep.distinguisher_advantage > 0.45);
}

TEST_CASE("uniformity rejects small sets") {
    Rng rng(3);
    SampleSet a = sample_plain_nonces(999, rng);
    SampleSet b = sample_plain_nonces(2000, rng);
    CHECK_THROWS_AS(uniformity_test(a, b), InsufficientSamples);
    CHECK_THROWS_AS(uniformity_test(b, a), InsufficientSamples);
}

TEST_CASE("uniformity is deterministic in its inputs") {
    Rng rng(4);
    SampleSet a = sample_plain_nonces(1500, rng);
    SampleSet b = sample_plain_nonces(1500, rng);
    UniformityReport r1 = uniformity_test(a, b);
    UniformityReport r2 = uniformity_test(a, b);
    CHECK(r1.byte_chi2 == r2.byte_chi2);
    CHECK(r1.distinguisher_advantage == r2.distinguisher_advantage);
}

TEST_CASE("general preservation bound: small worked case and domain") {
    // X = 4, k = 0, C = 1, I = 1, q = 1: P = 1 - (1 - 1/(3 - 1)) = 1/2
    PreservationParams p{BigInt(4), 0, 1, BigInt(1), BigInt(1)};
    GeneralBound g = preservation_bound_general(p);
    CHECK(static_cast<double>(g.probability) == doctest::Approx(0.5));

    // q = 0 rejected; X <= 2^k rejected; formula domain violation rejected
    CHECK_THROWS_AS(
        preservation_bound_general(PreservationParams{BigInt(4), 0, 1, BigInt(1), BigInt(0)}),
        DomainError);
    CHECK_THROWS_AS(
        preservation_bound_general(PreservationParams{BigInt(2), 1, 1, BigInt(1), BigInt(1)}),
        DomainError);
    CHECK_THROWS_AS(
        preservation_bound_general(PreservationParams{BigInt(3), 0, 1, BigInt(1), BigInt(5)}),
        DomainError);
}

TEST_CASE("general preservation bound respects the simplified upper bound") {
    // sweep a grid; every point satisfies P <= q / (2^C - q)
    int points = 0;
    for (unsigned c : {8u, 16u, 24u, 32u, 48u}) {
        for (uint64_t q : {1ull, 16ull, 256ull, 4096ull, 65536ull}) {
            for (unsigned xbits : {8u, 16u, 64u}) {
                if (BigInt(q) >= (BigInt(1) << c)) continue;
                for (unsigned k : {0u, 4u}) {
                    if (k >= xbits) continue;
                    PreservationParams p{BigInt(1) << xbits, k, c,
                                         BigInt(1) << 17, BigInt(q)};
                    GeneralBound g = preservation_bound_general(p);
                    CHECK(g.probability <= g.simplified_upper);
                    CHECK(g.probability >= 0);
                    points++;
                }
            }
        }
    }
    CHECK(points >= 100);
}

TEST_CASE("general preservation bound decreases in C") {
    BigFloat last = 1;
    for (unsigned c : {4u, 8u, 12u, 16u, 20u}) {
        PreservationParams p{BigInt(1) << 16, 0, c, BigInt(1) << 17, BigInt(1000)};
        GeneralBound g = preservation_bound_general(p);
        CHECK(g.probability < last);
        last = g.probability;
    }
}

TEST_CASE("simplified bound direct arithmetic: C = 64, q = 2^20") {
    PreservationParams p{BigInt(1) << 16, 0, 64, BigInt(1) << 17, BigInt(1) << 20};
    GeneralBound g = preservation_bound_general(p);
    // 2^20 / (2^64 - 2^20) ~ 2^-44
    double log2b = static_cast<double>(boost::multiprecision::log2(g.simplified_upper));
    CHECK(log2b == doctest::Approx(-44.0).epsilon(1e-6));
}

TEST_CASE("key preservation bound reproduces the megabyte-process figure") {
    // |I| = 2^17, X = 2^64, q = 10^6 lands at 2^-59.07
    BigFloat p = preservation_bound_key(BigInt(1) << 17, BigInt(1) << 64, BigInt(1000000));
    double log2p = static_cast<double>(boost::multiprecision::log2(p));
    CHECK(log2p == doctest::Approx(-59.0684).epsilon(1e-4));
    CHECK(log2p > -59.5);
    CHECK(log2p < -58.5);
}

TEST_CASE("key preservation bound edge cases") {
    CHECK(preservation_bound_key(BigInt(1) << 17, BigInt(1) << 64, BigInt(0)) == BigFloat(0));
    CHECK_THROWS_AS(preservation_bound_key(BigInt(1), BigInt(4), BigInt(10)), DomainError);

    // doubling |I| roughly halves the probability in the small-p regime
    BigFloat p1 = preservation_bound_key(BigInt(1) << 17, BigInt(1) << 64, BigInt(1000000));
    BigFloat p2 = preservation_bound_key(BigInt(1) << 18, BigInt(1) << 64, BigInt(1000000));
    double ratio = static_cast<double>(p2 / p1);
    CHECK(ratio == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("clone success model") {
    CloneModel full = clone_success_model(1.0, 5, 100, 100);
    CHECK(full.analytic == doctest::Approx(1.0));
    CHECK(full.empirical_within_ci);

    CloneModel none = clone_success_model(0.0, 5, 0, 100);
    CHECK(none.analytic == doctest::Approx(0.0));
    CHECK(none.empirical_within_ci);

    CloneModel half = clone_success_model(0.5, 5, 313, 10000);
    CHECK(half.analytic == doctest::Approx(0.03125));
    CHECK(half.empirical_within_ci);

    CloneModel off = clone_success_model(0.5, 5, 600, 10000);
    CHECK(!off.empirical_within_ci);

    CHECK_THROWS_AS(clone_success_model(1.5, 5, 0, 10), DomainError);
    CHECK_THROWS_AS(clone_success_model(0.5, 0, 0, 10), DomainError);
}

TEST_CASE("bench summary statistics") {
    BenchStats st = summarize_timings("x", {3.0, 1.0, 2.0, 4.0, 100.0});
    CHECK(st.median_ms == doctest::Approx(3.0));
    CHECK(st.mean_ms == doctest::Approx(22.0));
    CHECK(st.iters == 5);
    CHECK(st.stddev_ms > 40.0);

    BenchStats even = summarize_timings("y", {1.0, 2.0, 3.0, 4.0});
    CHECK(even.median_ms == doctest::Approx(2.5));
    CHECK(!st.to_json().empty());
}

TEST_CASE("aggressor nonces pass byte-level uniformity at test scale") {
    Rng rng(5);
    SampleSet a = sample_aggressor_nonces(2000, rng);
    SampleSet b = sample_plain_nonces(2000, rng);
    UniformityReport rep = uniformity_test(a, b);
    CHECK(rep.byte_chi2_p > 0.001);
    CHECK(rep.max_abs_bit_z < 5.0);
    CHECK(rep.distinguisher_advantage < 0.025);
}
