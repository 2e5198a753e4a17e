#include <cmath>

#include "doctest.h"
#include "philox.hpp"
#include "sampler.hpp"

using namespace qnd;
using namespace qnd::mc;

namespace {

ProbabilityTable gaussian_table(double mean, double sigma) {
    const int n = 4096;
    const double extent = 20.0 * sigma;
    ProbabilityTable t;
    t.width = extent / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = mean - extent / 2 + (i + 0.5) * t.width;
        const double p = std::exp(-0.5 * (v - mean) * (v - mean) / (sigma * sigma));
        t.values.push_back(v);
        t.probs.push_back(p);
        sum += p;
    }
    for (auto& p : t.probs) {
        p /= sum;
    }
    return t;
}

BatchStats stats_of(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= v.size();
    double var = 0.0;
    for (double x : v) {
        var += (x - mean) * (x - mean);
    }
    return BatchStats{mean, var / (v.size() - 1)};
}

}  // namespace

TEST_CASE("philox4x32-10 known-answer vectors") {
    // Reference vectors of the Random123 distribution.
    auto out = Philox4x32::block({0u, 0u, 0u, 0u}, {0u, 0u});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("counter streams are deterministic and distinct") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    bool all_equal = true;
    for (int i = 0; i < 100; ++i) {
        const double va = a.uniform();
        CHECK(va == b.uniform());
        CHECK(va >= 0.0);
        CHECK(va < 1.0);
        all_equal = all_equal && (va == c.uniform());
    }
    CHECK_FALSE(all_equal);
}

TEST_CASE("point-mass table yields constant outcomes up to bin jitter") {
    ProbabilityTable t{{2.0}, {1.0}, 1e-9};
    const auto batch = sample_outcomes(t, 1000, 1);
    for (double v : batch.mu_first) {
        CHECK(v == doctest::Approx(2.0).epsilon(1e-8));
    }
}

TEST_CASE("unit gaussian sampling reproduces the variance") {
    const auto t = gaussian_table(0.0, 1.0);
    const std::size_t n = 100000;
    const auto batch = sample_outcomes(t, n, 2024);
    const BatchStats s = stats_of(batch.mu_first);
    CHECK(std::abs(s.mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(s.var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("identical seeds give bit-identical batches") {
    const auto t = gaussian_table(1.0, 0.5);
    const auto a = sample_outcomes(t, 5000, 99, 7);
    const auto b = sample_outcomes(t, 5000, 99, 7);
    CHECK(a.mu_first == b.mu_first);
    const auto c = sample_outcomes(t, 5000, 100, 7);
    CHECK(a.mu_first != c.mu_first);
}

TEST_CASE("pair sampling draws from the joint table") {
    ProbabilityTable2D joint;
    joint.values_x = {0.0, 1.0};
    joint.values_y = {0.0, 1.0};
    joint.width_x = 1e-9;
    joint.width_y = 1e-9;
    // Perfectly anticorrelated bits.
    joint.probs = {0.0, 0.5, 0.5, 0.0};
    const auto batch = sample_outcomes(joint, 2000, 5);
    REQUIRE(batch.is_pair());
    for (std::size_t i = 0; i < batch.mu_first.size(); ++i) {
        CHECK(std::round(batch.mu_first[i]) + std::round(batch.mu_second[i]) ==
              doctest::Approx(1.0));
    }
}

TEST_CASE("jackknife error tracks the analytic sampling error") {
    const auto t = gaussian_table(0.0, 1.0);
    const auto batch = sample_outcomes(t, 40000, 31);
    const auto est = jackknife({&batch.mu_first},
                               [](const std::vector<BatchStats>& s) { return s[0].var; });
    const double analytic = std::sqrt(2.0 / 40000.0);
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.05));
    CHECK(est.std_error == doctest::Approx(analytic).epsilon(0.5));
}

TEST_CASE("calibration against a noiseless reference") {
    const auto system = gaussian_table(0.4, 0.9);

    SUBCASE("test drawn from the same distribution has no noise") {
        const auto ref = sample_outcomes(system, 100000, 11, 0);
        const auto test = sample_outcomes(system, 100000, 11, 1);
        const auto cal = calibrate_noise(ref, 0.0, test);
        CHECK(std::abs(cal.epsilon2.value) <= 3.0 * cal.epsilon2.std_error);
        CHECK(cal.sigma2.value == doctest::Approx(0.81).epsilon(0.05));
    }
    SUBCASE("a biased probe shows up in the systematic error") {
        const auto ref = sample_outcomes(system, 100000, 12, 0);
        const auto test = sample_outcomes(gaussian_table(1.1, 0.9), 100000, 12, 1);
        const auto cal = calibrate_noise(ref, 0.0, test);
        CHECK(std::abs(cal.d.value - 0.7) <= 3.0 * cal.d.std_error);
    }
    SUBCASE("overstated reference noise triggers a calibration failure") {
        const auto ref = sample_outcomes(gaussian_table(0.0, 0.1), 100000, 13, 0);
        const auto test = sample_outcomes(system, 100000, 13, 1);
        CHECK_THROWS_AS((void)calibrate_noise(ref, 5.0, test), Error);
    }
}

TEST_CASE("disturbance estimate vanishes for identical preparations") {
    const auto t = gaussian_table(0.0, 1.3);
    const auto with_first = sample_outcomes(t, 80000, 21, 0);
    const auto without_first = sample_outcomes(t, 80000, 21, 1);
    const auto d = estimate_disturbance(with_first, without_first);
    CHECK(std::abs(d.eta2.value) <= 3.0 * d.eta2.std_error);
    CHECK(std::abs(d.d.value) <= 3.0 * d.d.std_error);
}

TEST_CASE("estimator error shrinks like n^{-1/2}") {
    const auto narrow = gaussian_table(0.0, 1.0);
    const auto wide = gaussian_table(0.0, std::sqrt(2.0));
    double previous_error = 1e9;
    for (const std::size_t n : {1000u, 10000u, 100000u}) {
        const auto with_first = sample_outcomes(wide, n, 77, 0);
        const auto without_first = sample_outcomes(narrow, n, 77, 1);
        const auto d = estimate_disturbance(with_first, without_first);
        CHECK(std::abs(d.eta2.value - 1.0) <= 5.0 * d.eta2.std_error);
        CHECK(d.eta2.std_error < previous_error);
        previous_error = d.eta2.std_error;
    }
}
