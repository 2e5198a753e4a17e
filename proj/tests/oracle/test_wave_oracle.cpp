#include <cmath>
#include <complex>

#include "doctest.h"
#include "gaussian_prep.hpp"
#include "philox.hpp"
#include "runners.hpp"
#include "wave_oracle.hpp"

using namespace qnd;
using namespace qnd::wave;

namespace {

Grid1D small_grid(double extent = 12.0) {
    return Grid1D::make(64, extent);
}

// Uncorrelated minimal-uncertainty state on modest grids.
WaveState minimal_state() {
    const Grid1D g = small_grid();
    const double s = 1.0 / std::sqrt(2.0);
    const auto sys = gaussian_1d(g, 0.0, s, s, 0.0);
    const auto px = gaussian_1d(g, 0.0, s, s, 0.0);
    const auto pk = gaussian_1d(g, 0.0, s, s, 0.0);
    return init_state(g, sys, g, px, Rep::Base, g, pk, Rep::Base);
}

ParsedConfig config_from_text(const std::string& text) {
    return ConfigMap::from_text(text).materialize();
}

}  // namespace

TEST_CASE("axis transform round-trips to 1e-12") {
    WaveState s = minimal_state();
    // Scramble the state so the round trip is not trivially Gaussian.
    apply_kick_x(s, 0.7);
    const WaveState before = s;
    for (int axis = 0; axis < 3; ++axis) {
        to_rep(s, axis, Rep::Conj);
        CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-10));
        to_rep(s, axis, Rep::Base);
    }
    CHECK(state_distance(before, s) < 1e-12);
}

TEST_CASE("gaussian_1d realizes requested spreads and means") {
    const Grid1D g = Grid1D::make(256, 24.0, 0.3);

    SUBCASE("minimal pair") {
        const auto amp = gaussian_1d(g, 0.3, 1.0, 0.5, -0.8);
        WaveState s = init_state(g, amp, small_grid(), gaussian_1d(small_grid(), 0, 0.8, 0.8, 0),
                                 Rep::Base, small_grid(),
                                 gaussian_1d(small_grid(), 0, 0.8, 0.8, 0), Rep::Base);
        const auto base = axis_moments(s, AxisSystem, Rep::Base);
        CHECK(base.mean == doctest::Approx(0.3).epsilon(1e-9));
        CHECK(base.variance == doctest::Approx(1.0).epsilon(1e-9));
        const auto conj = axis_moments(s, AxisSystem, Rep::Conj);
        CHECK(conj.mean == doctest::Approx(-0.8).epsilon(1e-9));
        CHECK(conj.variance == doctest::Approx(0.25).epsilon(1e-9));
    }
    SUBCASE("chirped non-minimal pair") {
        const auto amp = gaussian_1d(g, 0.0, 0.9, 1.7, 0.0);
        WaveState s = init_state(g, amp, small_grid(), gaussian_1d(small_grid(), 0, 0.8, 0.8, 0),
                                 Rep::Base, small_grid(),
                                 gaussian_1d(small_grid(), 0, 0.8, 0.8, 0), Rep::Base);
        CHECK(axis_moments(s, AxisSystem, Rep::Base).variance ==
              doctest::Approx(0.81).epsilon(1e-8));
        CHECK(axis_moments(s, AxisSystem, Rep::Conj).variance ==
              doctest::Approx(2.89).epsilon(1e-8));
    }
    SUBCASE("below-Kennard spreads are rejected") {
        CHECK_THROWS_AS((void)gaussian_1d(g, 0.0, 0.5, 0.5, 0.0), Error);
    }
}

TEST_CASE("init_state norm and product moments") {
    WaveState s = minimal_state();
    CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(axis_moments(s, AxisProbeX, Rep::Base).variance == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(axis_moments(s, AxisProbeK, Rep::Conj).variance == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(pair_covariance(s, AxisProbeX, Rep::Base, AxisProbeK, Rep::Conj)) < 1e-10);
}

TEST_CASE("correlated pair state carries kappa into the full state") {
    const auto prep = make_preparation(1.0, 1.0, -0.4);
    const Grid1D pg = Grid1D::make(256, 16.0);
    const ProbePairWave pair = preparation_wavefunction(prep, pg, pg);
    const Grid1D gsys = small_grid();
    WaveState s = init_state(gsys, gaussian_1d(gsys, 0, std::sqrt(0.5), std::sqrt(0.5), 0), pair);
    CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pair_covariance(s, AxisProbeX, Rep::Base, AxisProbeK, Rep::Conj) ==
          doctest::Approx(-0.4).epsilon(1e-6));
    CHECK(axis_moments(s, AxisProbeK, Rep::Conj).variance == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(axis_moments(s, AxisProbeX, Rep::Base).variance == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("derived conjugate moments of the pair state match the quarter-inverse rule") {
    // Pins the sign convention of xi: Cov(Phi_K, J_X) = kappa / (4 det C).
    const auto prep = make_preparation(1.0, 1.0, -0.4);
    const auto reduced = reduced_probe_moments(prep);
    const Grid1D pg = Grid1D::make(256, 16.0);
    const ProbePairWave pair = preparation_wavefunction(prep, pg, pg);
    const Grid1D gsys = Grid1D::make(16, 12.0);
    WaveState s = init_state(gsys, gaussian_1d(gsys, 0, std::sqrt(0.5), std::sqrt(0.5), 0), pair);

    CHECK(axis_moments(s, AxisProbeX, Rep::Conj).variance ==
          doctest::Approx(reduced.delta_x2).epsilon(1e-6));
    CHECK(axis_moments(s, AxisProbeK, Rep::Base).variance ==
          doctest::Approx(reduced.delta_tilde_k2).epsilon(1e-6));
    CHECK(pair_covariance(s, AxisProbeK, Rep::Base, AxisProbeX, Rep::Conj) ==
          doctest::Approx(reduced.xi).epsilon(1e-5));
}

TEST_CASE("kick rules move the right variables by the right amounts") {
    const Grid1D g = small_grid(16.0);
    const double s2 = std::sqrt(0.5);

    SUBCASE("a displaced Phi_X packet shifts the system momentum") {
        const double phi0 = 0.9;
        const auto sys = gaussian_1d(g, 0.0, s2, s2, 0.0);
        const auto px = gaussian_1d(g, phi0, 0.35, 1.0 / 0.7 * 1.01, 0.0);
        const auto pk = gaussian_1d(g, 0.0, s2, s2, 0.0);
        WaveState state = init_state(g, sys, g, px, Rep::Base, g, pk, Rep::Base);
        const double k_before = axis_moments(state, AxisSystem, Rep::Conj).mean;
        apply_kick_x(state);
        const double k_after = axis_moments(state, AxisSystem, Rep::Conj).mean;
        CHECK(k_after - k_before == doctest::Approx(phi0).epsilon(1e-6));
    }
    SUBCASE("a displaced system shifts the pointer J_X") {
        const double x0 = 1.1;
        const auto sys = gaussian_1d(g, x0, s2, s2, 0.0);
        const auto px = gaussian_1d(g, 0.0, s2, s2, 0.0);
        const auto pk = gaussian_1d(g, 0.0, s2, s2, 0.0);
        WaveState state = init_state(g, sys, g, px, Rep::Base, g, pk, Rep::Base);
        apply_kick_x(state);
        CHECK(axis_moments(state, AxisProbeX, Rep::Conj).mean ==
              doctest::Approx(x0).epsilon(1e-6));
    }
    SUBCASE("the K kick pushes X by minus Phi_K") {
        const double phi0 = -0.6;
        const auto sys = gaussian_1d(g, 0.0, s2, s2, 0.0);
        const auto px = gaussian_1d(g, 0.0, s2, s2, 0.0);
        const auto pk = gaussian_1d(g, phi0, 0.35, 1.0 / 0.7 * 1.01, 0.0);
        WaveState state = init_state(g, sys, g, px, Rep::Base, g, pk, Rep::Base);
        apply_kick_k(state);
        CHECK(axis_moments(state, AxisSystem, Rep::Base).mean ==
              doctest::Approx(-phi0).epsilon(1e-6));
    }
}

TEST_CASE("norm is preserved through full pipelines") {
    WaveState s = minimal_state();
    apply_sequential(s, Ordering::XthenK);
    CHECK(s.norm2() == doctest::Approx(1.0).epsilon(1e-10));
    WaveState j = minimal_state();
    apply_joint(j);
    CHECK(j.norm2() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("zero-coupling run reproduces the undisturbed variance") {
    auto cfg = config_from_text("system.sigma_x = 0.7071067811865476\n"
                                "system.sigma_k = 0.7071067811865476\n"
                                "probe_x.delta = 0.6\n"
                                "probe_x.delta_tilde = 0.9\n"
                                "probe_k.delta = 0.7\n"
                                "probe_k.delta_tilde = 0.8\n");
    const WaveRuns runs = run_wave_scenario(cfg);
    const double expected = 0.7 * 0.7 + 0.5;
    CHECK(table_moments(runs.second_without).variance ==
          doctest::Approx(expected).epsilon(5e-3));
}

TEST_CASE("sequential run on the correlated preparation hits Var = 1.7") {
    auto cfg = config_from_text("system.sigma_x = 0.7071067811865476\n"
                                "system.sigma_k = 0.7071067811865476\n"
                                "prep.delta_k = 1\n"
                                "prep.delta_tilde_x = 1\n"
                                "prep.r = -0.4\n");
    const WaveRuns runs = run_wave_scenario(cfg);
    CHECK(table_moments(runs.second_with).variance == doctest::Approx(1.7).epsilon(5e-3));
    CHECK(table_moments(runs.second_without).variance == doctest::Approx(1.5).epsilon(5e-3));
    const double eta2 = table_moments(runs.second_with).variance -
                        table_moments(runs.second_without).variance;
    CHECK(eta2 == doctest::Approx(0.2).epsilon(5e-2));
    CHECK(table_moments(runs.first_readout).variance ==
          doctest::Approx(0.5 + 1.0 / 3.36).epsilon(5e-3));
}

TEST_CASE("joint run matches the midpoint-prescription variances") {
    const std::string base = "system.sigma_x = 0.7071067811865476\n"
                             "system.sigma_k = 0.7071067811865476\n"
                             "coupling.ordering = joint\n";

    SUBCASE("uncorrelated saturation point") {
        auto cfg = config_from_text(base + "probe_x.delta = 0.5\n"
                                           "probe_x.delta_tilde = 1\n"
                                           "probe_k.delta = 0.5\n"
                                           "probe_k.delta_tilde = 1\n");
        const WaveRuns runs = run_wave_scenario(cfg);
        CHECK(table_moments(runs.first_readout).variance == doctest::Approx(1.0).epsilon(5e-3));
        CHECK(table_moments(runs.second_with).variance == doctest::Approx(1.0).epsilon(5e-3));
    }
    SUBCASE("correlated pair shifts Var(J_K) by kappa") {
        auto with = config_from_text(base + "prep.delta_k = 1\n"
                                            "prep.delta_tilde_x = 1\n"
                                            "prep.r = 0.5\n");
        auto without = config_from_text(base + "prep.delta_k = 1\n"
                                               "prep.delta_tilde_x = 1\n"
                                               "prep.r = 1e-12\n");
        const double var_with = table_moments(run_wave_scenario(with).second_with).variance;
        const double var_without =
            table_moments(run_wave_scenario(without).second_with).variance;
        CHECK(var_with - var_without == doctest::Approx(0.5).epsilon(5e-2));
    }
}

TEST_CASE("readout resolution model") {
    auto cfg = config_from_text("system.sigma_x = 0.7071067811865476\n"
                                "system.sigma_k = 0.7071067811865476\n"
                                "probe_x.delta = 0.6\n"
                                "probe_x.delta_tilde = 0.9\n"
                                "probe_k.delta = 0.7\n"
                                "probe_k.delta_tilde = 0.8\n");
    const GridPlan grids = plan_grids(canonicalize(cfg.scenario), false, cfg.grid);
    const auto sys = gaussian_1d(grids.sys, 0, 0.7071067811865476, 0.7071067811865476, 0);
    const auto px = gaussian_1d(grids.px, 0, 0.9, 0.6, 0);
    const auto pk = gaussian_1d(grids.pk, 0, 0.8, 0.7, 0);
    WaveState state =
        init_state(grids.sys, sys, grids.px, px, Rep::Base, grids.pk, pk, Rep::Base);
    apply_sequential(state, Ordering::XthenK);

    const auto ideal = readout_distribution(state, AxisProbeK, ReadoutModel::ideal());
    const auto blurred =
        readout_distribution(state, AxisProbeK, ReadoutModel::gaussian(std::sqrt(0.3)));
    const double vi = table_moments(ideal).variance;
    const double vb = table_moments(blurred).variance;
    CHECK(vb - vi == doctest::Approx(0.3).epsilon(1e-6));

    // Heuristic correction term of the analytic formula.
    const double analytic = 0.5 + 0.7 * 0.7 + 0.9 * 0.9 + 0.3;
    CHECK(vb == doctest::Approx(analytic).epsilon(5e-3));
}

TEST_CASE("joint readout distribution marginals match the per-probe readouts") {
    WaveState s = minimal_state();
    apply_joint(s);
    const auto joint =
        joint_readout_distribution(s, ReadoutModel::ideal(), ReadoutModel::ideal());
    const auto direct_x = readout_distribution(s, AxisProbeX, ReadoutModel::ideal());
    const auto mx = table_moments(marginal_x(joint));
    const auto dx = table_moments(direct_x);
    CHECK(mx.variance == doctest::Approx(dx.variance).epsilon(1e-10));
}

TEST_CASE("exact joint factorization agrees with converged split-step") {
    WaveState exact = minimal_state();
    apply_joint(exact);
    WaveState stepped = minimal_state();
    apply_joint_split_step(stepped, 128);
    to_rep(stepped, AxisSystem, exact.reps[AxisSystem]);
    CHECK(state_distance(exact, stepped) < 1e-4);

    WaveState finer = minimal_state();
    apply_joint_split_step(finer, 256);
    to_rep(finer, AxisSystem, exact.reps[AxisSystem]);
    CHECK(state_distance(exact, finer) < state_distance(exact, stepped));
}

TEST_CASE("oracle runner flags correlated scenarios without a prep block") {
    auto cfg = config_from_text("system.sigma_x = 0.8\n"
                                "system.sigma_k = 0.7\n"
                                "probe_x.delta = 0.6\n"
                                "probe_x.delta_tilde = 0.9\n"
                                "probe_k.delta = 0.7\n"
                                "probe_k.delta_tilde = 0.8\n"
                                "cross.kappa = -0.3\n");
    CHECK_THROWS_AS((void)run_wave_scenario(cfg), Error);
}

TEST_CASE("user-pinned undersized grids are rejected with a grid diagnostic") {
    auto cfg = config_from_text("system.sigma_x = 0.7071067811865476\n"
                                "system.sigma_k = 0.7071067811865476\n"
                                "prep.delta_k = 1\n"
                                "prep.delta_tilde_x = 1\n"
                                "prep.r = -0.4\n"
                                "grid.n = 32\n");
    try {
        (void)run_wave_scenario(cfg);
        FAIL("expected a grid resolution error");
    } catch (const Error& e) {
        CHECK(e.status() == Status::GridResolution);
    }
}

TEST_CASE("oracle comparison table stays within tolerance on a benign scenario") {
    auto cfg = config_from_text("system.sigma_x = 0.7071067811865476\n"
                                "system.sigma_k = 0.7071067811865476\n"
                                "probe_x.delta = 0.6\n"
                                "probe_x.delta_tilde = 0.9\n"
                                "probe_k.delta = 0.7\n"
                                "probe_k.delta_tilde = 0.8\n"
                                "probe_k.resolution = 0.4\n");
    const RunResult result = run_oracle(cfg);
    CHECK(result.status == Status::Ok);
    REQUIRE(result.table.rows.size() == 4);
}

TEST_CASE("biased probes show up in the oracle readout means") {
    auto cfg = config_from_text("system.sigma_x = 0.7071067811865476\n"
                                "system.sigma_k = 0.7071067811865476\n"
                                "system.mean_x = 0.4\n"
                                "probe_x.delta = 0.6\n"
                                "probe_x.delta_tilde = 0.9\n"
                                "probe_x.mean_j = 0.7\n"
                                "probe_k.delta = 0.7\n"
                                "probe_k.delta_tilde = 0.8\n");
    const WaveRuns runs = run_wave_scenario(cfg);
    CHECK(table_moments(runs.first_readout).mean == doctest::Approx(1.1).epsilon(1e-4));
    CHECK(table_moments(runs.reference_first).mean == doctest::Approx(0.4).epsilon(1e-6));
}
