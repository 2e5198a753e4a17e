#include <cmath>

#include "doctest.h"
#include "gaussian_prep.hpp"
#include "philox.hpp"

using namespace qnd;

TEST_CASE("uncorrelated preparation is minimal-uncertainty") {
    const auto p = make_preparation(1.0, 1.0, 0.0);
    const auto m = reduced_probe_moments(p);
    CHECK(m.delta_x2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.delta_tilde_k2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.xi == doctest::Approx(0.0));
}

TEST_CASE("reduced moments of the r = -0.4 preparation") {
    const auto p = make_preparation(1.0, 1.0, -0.4);
    CHECK(p.det4() == doctest::Approx(0.84).epsilon(1e-12));
    const auto m = reduced_probe_moments(p);
    CHECK(m.delta_x2 == doctest::Approx(1.0 / 3.36).epsilon(1e-12));
    CHECK(m.xi == doctest::Approx(-0.4 / 3.36).epsilon(1e-12));
}

TEST_CASE("preparation Kennard products never dip below 1/4") {
    mc::CounterRng rng(50, 0);
    for (int i = 0; i < 500; ++i) {
        const double dk = 0.3 + 2.0 * rng.uniform();
        const double dtx = 0.3 + 2.0 * rng.uniform();
        const double r = -0.99 + 1.98 * rng.uniform();
        const auto p = make_preparation(dk, dtx, r);
        const auto m = reduced_probe_moments(p);
        CHECK(m.delta_x2 * dtx * dtx >= 0.25 - 1e-12);
        CHECK(m.delta_tilde_k2 * dk * dk >= 0.25 - 1e-12);
    }
}

TEST_CASE("singular preparations are rejected") {
    CHECK_THROWS_AS((void)make_preparation(1.0, 1.0, 1.0 - 1e-10), Error);
    CHECK_THROWS_AS((void)make_preparation(1.0, 1.0, -1.0), Error);
    CHECK_THROWS_AS((void)make_preparation(0.0, 1.0, 0.0), Error);
}

TEST_CASE("to_scenario wires the derived moments into a valid scenario") {
    SystemMoments sys;
    sys.sigma_x = 1.0 / std::sqrt(2.0);
    sys.sigma_k = 1.0 / std::sqrt(2.0);
    Couplings couplings;

    SUBCASE("r = 0 gives an uncorrelated scenario") {
        const Scenario s = to_scenario(make_preparation(1.0, 1.0, 0.0), sys, 0.0, 0.0, couplings);
        CHECK(s.cross.kappa == doctest::Approx(0.0));
        CHECK(s.cross.xi == doctest::Approx(0.0));
        CHECK(validate_scenario(s).ok());
    }
    SUBCASE("r = -0.5 with spreads 2 sits on the violation boundary") {
        const Scenario s =
            to_scenario(make_preparation(2.0, 2.0, -0.5), sys, 0.0, 0.0, couplings);
        CHECK(s.cross.kappa == doctest::Approx(-2.0).epsilon(1e-12));
        const NoiseDisturbance nd = noise_disturbance(canonicalize(s));
        CHECK(nd.primary.eta2_signed == doctest::Approx(0.0));
    }
    SUBCASE("random preparations validate by construction") {
        mc::CounterRng rng(51, 0);
        for (int i = 0; i < 200; ++i) {
            const auto p = make_preparation(0.3 + 2.0 * rng.uniform(), 0.3 + 2.0 * rng.uniform(),
                                            -0.95 + 1.9 * rng.uniform());
            const Scenario s = to_scenario(p, sys, 0.1, 0.2, couplings);
            CHECK(validate_scenario(s).ok());
        }
    }
}

TEST_CASE("violation product closed form") {
    SUBCASE("uncorrelated saturates 1/4 for any spreads") {
        CHECK(violation_product(make_preparation(1.0, 1.0, 0.0)) ==
              doctest::Approx(0.25).epsilon(1e-12));
        CHECK(violation_product(make_preparation(0.4, 2.3, 0.0)) ==
              doctest::Approx(0.25).epsilon(1e-12));
    }
    SUBCASE("r = -0.4 at equal spreads") {
        CHECK(violation_product(make_preparation(1.0, 1.0, -0.4)) ==
              doctest::Approx(5.0 / 84.0).epsilon(1e-12));
    }
    SUBCASE("r = -0.5 at equal spreads kills the disturbance") {
        CHECK(violation_product(make_preparation(1.0, 1.0, -0.5)) == doctest::Approx(0.0));
    }
}

TEST_CASE("violation product equals epsilon2 * eta2 of the derived scenario") {
    mc::CounterRng rng(52, 0);
    SystemMoments sys;
    sys.sigma_x = 1.0;
    sys.sigma_k = 0.7;
    for (int i = 0; i < 200; ++i) {
        const auto p = make_preparation(0.3 + 2.0 * rng.uniform(), 0.3 + 2.0 * rng.uniform(),
                                        -0.95 + 1.9 * rng.uniform());
        const Scenario s = to_scenario(p, sys, 0.0, 0.0, Couplings{});
        const NoiseDisturbance nd = noise_disturbance(s);
        CHECK(violation_product(p) ==
              doctest::Approx(nd.primary.epsilon2 * nd.primary.eta2_signed).epsilon(1e-12));
    }
}

TEST_CASE("violation boundary follows the sign of r (r + 2 delta_k/delta_tilde_x)") {
    mc::CounterRng rng(53, 0);
    for (int i = 0; i < 500; ++i) {
        const double dk = 0.3 + 2.0 * rng.uniform();
        const double dtx = 0.3 + 2.0 * rng.uniform();
        const double r = -0.95 + 1.9 * rng.uniform();
        const double product = violation_product(make_preparation(dk, dtx, r));
        const bool below = product < 0.25 - 1e-12;
        const bool predicted = r * (r + 2.0 * dk / dtx) < -1e-12;
        if (std::abs(r * (r + 2.0 * dk / dtx)) > 1e-9) {
            CHECK(below == predicted);
        }
    }
}

TEST_CASE("scan classifications along the t = 1 row") {
    const auto points = violation_scan(1.0, 1.0, 1, -0.9, 0.3, 13);
    for (const ScanPoint& p : points) {
        CHECK(p.t == 1.0);
        if (p.r <= -0.5) {
            CHECK(p.cls == ViolationClass::Reduction);
        } else if (p.r < -1e-9) {
            CHECK(p.cls == ViolationClass::Violated);
        } else {
            // r = 0 lands within rounding of the saturated product.
            CHECK(p.cls == ViolationClass::Holds);
        }
        CHECK(p.product == doctest::Approx(p.epsilon2 * p.eta2).epsilon(1e-12));
    }
}

TEST_CASE("scan r = 0 column is constant 1/4 and r > 0 always holds") {
    const auto zero = violation_scan(0.5, 2.5, 9, 0.0, 0.0, 1);
    for (const ScanPoint& p : zero) {
        CHECK(p.product == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(p.cls == ViolationClass::Holds);
    }
    const auto positive = violation_scan(0.5, 2.5, 9, 0.05, 0.9, 12);
    for (const ScanPoint& p : positive) {
        CHECK(p.product > 0.25);
        CHECK(p.cls == ViolationClass::Holds);
    }
}

TEST_CASE("scan rejects empty or out-of-range inputs") {
    CHECK_THROWS_AS((void)violation_scan(2.0, 1.0, 4, -0.5, 0.5, 4), Error);
    CHECK_THROWS_AS((void)violation_scan(0.0, 1.0, 4, -0.5, 0.5, 4), Error);
    CHECK_THROWS_AS((void)violation_scan(1.0, 2.0, 0, -0.5, 0.5, 4), Error);
    CHECK_THROWS_AS((void)violation_scan(1.0, 2.0, 4, -1.0, 0.5, 4), Error);
}

TEST_CASE("preparation wavefunction moments match the covariance matrix") {
    const auto p = make_preparation(1.0, 1.0, -0.4);
    const Grid1D grid_jk = Grid1D::make(512, 16.0);
    const Grid1D grid_phix = Grid1D::make(512, 16.0);
    const ProbePairWave wave = preparation_wavefunction(p, grid_jk, grid_phix);

    double norm2 = 0.0;
    double mean_j = 0.0, mean_phi = 0.0, jj = 0.0, pp = 0.0, jp = 0.0;
    const double w = grid_jk.spacing() * grid_phix.spacing();
    for (int i = 0; i < grid_jk.n; ++i) {
        for (int j = 0; j < grid_phix.n; ++j) {
            const double prob = std::norm(wave.amp[i * grid_phix.n + j]) * w;
            const double u = grid_jk.value(i);
            const double v = grid_phix.value(j);
            norm2 += prob;
            mean_j += u * prob;
            mean_phi += v * prob;
            jj += u * u * prob;
            pp += v * v * prob;
            jp += u * v * prob;
        }
    }
    CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mean_j == doctest::Approx(0.0));
    CHECK(mean_phi == doctest::Approx(0.0));
    CHECK(jj == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(pp == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(jp == doctest::Approx(-0.4).epsilon(1e-6));
}

TEST_CASE("uncorrelated preparation wavefunction factorizes") {
    const auto p = make_preparation(1.0, 1.0, 0.0);
    const Grid1D g = Grid1D::make(256, 8.0);
    const ProbePairWave wave = preparation_wavefunction(p, g, g);
    // Rank-1 check: amp(i,j) * amp(0,0) == amp(i,0) * amp(0,j).
    const int c = g.n / 2;
    for (int i = 0; i < g.n; i += 37) {
        for (int j = 0; j < g.n; j += 41) {
            const auto lhs = wave.amp[i * g.n + j] * wave.amp[c * g.n + c];
            const auto rhs = wave.amp[i * g.n + c] * wave.amp[c * g.n + j];
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("under-resolved grids are rejected with a diagnostic") {
    const auto p = make_preparation(1.0, 1.0, -0.4);
    CHECK_THROWS_AS(
        (void)preparation_wavefunction(p, Grid1D::make(64, 16.0), Grid1D::make(512, 16.0)),
        Error);
    CHECK_THROWS_AS(
        (void)preparation_wavefunction(p, Grid1D::make(512, 4.0), Grid1D::make(512, 16.0)),
        Error);
    try {
        (void)preparation_wavefunction(p, Grid1D::make(64, 16.0), Grid1D::make(512, 16.0));
    } catch (const Error& e) {
        CHECK(e.status() == Status::GridResolution);
    }
}
