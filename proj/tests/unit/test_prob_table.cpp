#include <cmath>

#include "doctest.h"
#include "prob_table.hpp"

using namespace qnd;

namespace {

ProbabilityTable gaussian_table(double mean, double sigma, int n, double extent) {
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

}  // namespace

TEST_CASE("moments of simple tables") {
    SUBCASE("symmetric table has zero mean") {
        ProbabilityTable t{{-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25}, 1.0};
        const auto m = table_moments(t);
        CHECK(m.mean == doctest::Approx(0.0));
        CHECK(m.variance == doctest::Approx(0.5));
    }
    SUBCASE("unit gaussian table has unit variance") {
        const auto t = gaussian_table(0.3, 1.0, 4096, 24.0);
        const auto m = table_moments(t);
        CHECK(m.mean == doctest::Approx(0.3).epsilon(1e-10));
        CHECK(m.variance == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("single-bin table has vanishing variance") {
        ProbabilityTable t{{2.0}, {1.0}, 0.5};
        const auto m = table_moments(t);
        CHECK(m.mean == doctest::Approx(2.0));
        CHECK(m.variance <= 0.5 * 0.5 / 12.0);
    }
}

TEST_CASE("validate_table rejects unnormalized input") {
    ProbabilityTable t{{0.0, 1.0}, {0.7, 0.7}, 1.0};
    CHECK_THROWS_AS(validate_table(t), Error);
    t.probs = {0.5, 0.5};
    CHECK_NOTHROW(validate_table(t));
}

TEST_CASE("gaussian convolution adds the kernel variance") {
    const auto t = gaussian_table(-0.2, 0.9, 2048, 16.0);
    const double before = table_moments(t).variance;
    const double resolution2 = 0.3;
    const auto convolved = convolve_gaussian(t, std::sqrt(resolution2));
    validate_table(convolved, 1e-9);
    const double after = table_moments(convolved).variance;
    CHECK(after - before == doctest::Approx(resolution2).epsilon(1e-6));
    CHECK(table_moments(convolved).mean == doctest::Approx(-0.2).epsilon(1e-9));
}

TEST_CASE("zero resolution leaves the table untouched") {
    const auto t = gaussian_table(0.0, 1.0, 512, 12.0);
    const auto same = convolve_gaussian(t, 0.0);
    CHECK(same.values == t.values);
    CHECK(same.probs == t.probs);
}

TEST_CASE("joint table marginals and axis-wise convolution") {
    const auto tx = gaussian_table(0.0, 0.8, 128, 10.0);
    const auto ty = gaussian_table(0.5, 1.2, 128, 14.0);
    ProbabilityTable2D joint;
    joint.values_x = tx.values;
    joint.values_y = ty.values;
    joint.width_x = tx.width;
    joint.width_y = ty.width;
    for (double px : tx.probs) {
        for (double py : ty.probs) {
            joint.probs.push_back(px * py);
        }
    }
    validate_table(joint);

    const auto mx = table_moments(marginal_x(joint));
    const auto my = table_moments(marginal_y(joint));
    CHECK(mx.variance == doctest::Approx(table_moments(tx).variance).epsilon(1e-10));
    CHECK(my.mean == doctest::Approx(0.5).epsilon(1e-9));

    const auto blurred = convolve_gaussian(joint, 0.4, 0.0);
    validate_table(blurred, 1e-9);
    const auto bx = table_moments(marginal_x(blurred));
    const auto by = table_moments(marginal_y(blurred));
    CHECK(bx.variance - mx.variance == doctest::Approx(0.16).epsilon(1e-6));
    CHECK(by.variance == doctest::Approx(my.variance).epsilon(1e-10));
}
