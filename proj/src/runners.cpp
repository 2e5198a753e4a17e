// Copyright 2026 The qnd-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "runners.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "instruments.hpp"
#include "sampler.hpp"

namespace qnd {

namespace {

using wave::AxisProbeK;
using wave::AxisProbeX;
using wave::AxisSystem;
using wave::ReadoutModel;
using wave::Rep;
using wave::WaveState;

void add_value_row(Table& t, const std::string& name, double value,
                   const std::string& status = {}) {
    auto& row = t.add_row();
    row.emplace_back(name);
    row.emplace_back(value);
    row.emplace_back(status);
}

Scenario canonical_of(const ParsedConfig& cfg) {
    return cfg.scenario.canonical ? cfg.scenario : canonicalize(cfg.scenario);
}

struct AxisNeeds {
    double center = 0.0;
    double base_init = 0.0;   // narrowest spread the base variable ever has
    double base_cover = 0.0;  // spread + mean offsets the base window must hold
    double conj_cover = 0.0;  // same for the conjugate window
    double max_conj_spacing = 0.0;    // >0: cap on the conjugate grid spacing
    double base_points_per_sigma = 8.0;
};

Grid1D plan_axis(const AxisNeeds& need, const GridSettings& grid, const char* name) {
    const double e = grid.extent_sigmas;
    double extent = e * need.base_cover;
    if (need.max_conj_spacing > 0.0) {
        // Conjugate spacing is 2 pi / extent, independent of n.
        extent = std::max(extent, 2.0 * std::numbers::pi / need.max_conj_spacing);
    }

    const double conj_needed = e * need.conj_cover;
    const double max_spacing = need.base_init / need.base_points_per_sigma;
    if (grid.n > 0) {
        const Grid1D g = Grid1D::make(grid.n, extent, need.center);
        if (g.conj_length() < conj_needed) {
            fail(Status::GridResolution,
                 std::string("grid for ") + name + " is under-resolved: the conjugate window " +
                     std::to_string(g.conj_length()) + " cannot hold " +
                     std::to_string(conj_needed) + "; raise grid.n");
        }
        if (g.spacing() > max_spacing) {
            fail(Status::GridResolution,
                 std::string("grid for ") + name +
                     " is under-resolved: fewer than " +
                     std::to_string(static_cast<int>(need.base_points_per_sigma)) +
                     " points per standard deviation; raise grid.n");
        }
        return g;
    }

    int n = 128;
    auto adequate = [&](int candidate) {
        const Grid1D g = Grid1D::make(candidate, extent, need.center);
        return g.conj_length() >= conj_needed && g.spacing() <= max_spacing;
    };
    while (n < 4096 && !adequate(n)) {
        n *= 2;
    }
    if (!adequate(n)) {
        fail(Status::GridResolution, std::string("no affordable grid covers axis ") + name);
    }
    return Grid1D::make(n, extent, need.center);
}

GridPlan plan(const Scenario& s, bool with_prep, const GridSettings& grid) {
    const double ax = std::abs(s.system.mean_x);
    const double ak = std::abs(s.system.mean_k);
    const double ajx = std::abs(s.probe_x.mean_j);
    const double apx = std::abs(s.probe_x.mean_phi);
    const double ajk = std::abs(s.probe_k.mean_j);
    const double apk = std::abs(s.probe_k.mean_phi);

    const double sx = s.system.sigma_x;
    const double sk = s.system.sigma_k;
    const double dx = s.probe_x.delta;
    const double dtx = s.probe_x.delta_tilde;
    const double dk = s.probe_k.delta;
    const double dtk = s.probe_k.delta_tilde;
    const double kap = std::abs(s.cross.kappa);
    const double xi = std::abs(s.cross.xi);

    AxisNeeds sys;
    sys.center = s.system.mean_x;
    sys.base_init = sx;
    // X picks up -Phi_K during the K stage; K picks up +Phi_X.
    sys.base_cover = std::sqrt(sx * sx + dtk * dtk) + ax + apk;
    sys.conj_cover = std::sqrt(sk * sk + dtx * dtx) + ak + apx;

    AxisNeeds px;
    px.center = s.probe_x.mean_phi;
    px.base_init = dtx;
    px.base_cover = dtx + apx;
    px.conj_cover = std::sqrt(dx * dx + sx * sx + dtk * dtk + 2.0 * xi) + ajx + ax + apk;

    AxisNeeds pk;
    pk.center = s.probe_k.mean_phi;
    pk.base_init = dtk;
    pk.base_cover = dtk + apk;
    pk.conj_cover = std::sqrt(dk * dk + sk * sk + dtx * dtx + 2.0 * kap) + ajk + ak + apx;
    if (with_prep) {
        // The correlated preparation is sampled on the J_K grid directly and
        // demands 16 points per delta_K there; the Phi_X grid likewise.
        pk.max_conj_spacing = dk / 16.0;
        px.base_points_per_sigma = 16.0;
    }
    // A Gaussian readout kernel must be well sampled on the pointer grid.
    if (s.probe_x.resolution > 0.0) {
        const double cap = s.probe_x.resolution / 2.0;
        px.max_conj_spacing =
            px.max_conj_spacing > 0.0 ? std::min(px.max_conj_spacing, cap) : cap;
    }
    if (s.probe_k.resolution > 0.0) {
        const double cap = s.probe_k.resolution / 2.0;
        pk.max_conj_spacing =
            pk.max_conj_spacing > 0.0 ? std::min(pk.max_conj_spacing, cap) : cap;
    }

    GridPlan p;
    p.sys = plan_axis(sys, grid, "system");
    p.px = plan_axis(px, grid, "probe X");
    p.pk = plan_axis(pk, grid, "probe K");
    return p;
}

// Per-axis phase multiplication in the current representation.
template <typename PhaseFn>
void modulate_axis(WaveState& s, int axis, PhaseFn&& phase) {
    const int n = s.grids[axis].n;
    std::vector<wave::complexd> factors(n);
    for (int i = 0; i < n; ++i) {
        factors[i] = phase(s.coordinate(axis, i));
    }
    const int n1 = s.grids[1].n;
    const int n2 = s.grids[2].n;
    std::size_t idx = 0;
    for (int i0 = 0; i0 < s.grids[0].n; ++i0) {
        for (int i1 = 0; i1 < n1; ++i1) {
            for (int i2 = 0; i2 < n2; ++i2, ++idx) {
                const int which = axis == 0 ? i0 : axis == 1 ? i1 : i2;
                s.amp[idx] *= factors[which];
            }
        }
    }
}

WaveState initial_state(const ParsedConfig& cfg, const Scenario& canon, const GridPlan& grids) {
    const auto sys_amp = wave::gaussian_1d(grids.sys, canon.system.mean_x, canon.system.sigma_x,
                                           canon.system.sigma_k, canon.system.mean_k);
    if (cfg.prep) {
        const ProbePairPreparation prep =
            make_preparation(canon.probe_k.delta, canon.probe_x.delta_tilde, cfg.prep->r);
        const Grid1D grid_jk = Grid1D::make(grids.pk.n, grids.pk.conj_length(), 0.0);
        const ProbePairWave pair = preparation_wavefunction(
            prep, grid_jk, grids.px, canon.probe_k.mean_j, canon.probe_x.mean_phi);
        WaveState state = wave::init_state(grids.sys, sys_amp, pair);
        if (canon.probe_x.mean_j != 0.0) {
            const double b = canon.probe_x.mean_j;
            modulate_axis(state, AxisProbeX,
                          [b](double phi) { return std::polar(1.0, b * phi); });
        }
        if (canon.probe_k.mean_phi != 0.0) {
            const double b = canon.probe_k.mean_phi;
            modulate_axis(state, AxisProbeK, [b](double j) { return std::polar(1.0, -b * j); });
        }
        return state;
    }
    require(canon.cross.kappa == 0.0 && canon.cross.xi == 0.0, Status::InvalidArgument,
            "wave-oracle runs with correlated probes require the prep block");
    const auto px_amp = wave::gaussian_1d(grids.px, canon.probe_x.mean_phi,
                                          canon.probe_x.delta_tilde, canon.probe_x.delta,
                                          canon.probe_x.mean_j);
    const auto pk_amp = wave::gaussian_1d(grids.pk, canon.probe_k.mean_phi,
                                          canon.probe_k.delta_tilde, canon.probe_k.delta,
                                          canon.probe_k.mean_j);
    return wave::init_state(grids.sys, sys_amp, grids.px, px_amp, Rep::Base, grids.pk, pk_amp,
                            Rep::Base);
}

ReadoutModel model_for(double resolution) {
    return resolution > 0.0 ? ReadoutModel::gaussian(resolution) : ReadoutModel::ideal();
}

}  // namespace

GridPlan plan_grids(const Scenario& canonical, bool with_prep, const GridSettings& grid) {
    return plan(canonical, with_prep, grid);
}

WaveRuns run_wave_scenario(const ParsedConfig& cfg) {
    WaveRuns runs;
    runs.canonical = canonical_of(cfg);
    const Scenario& canon = runs.canonical;
    const GridPlan grids = plan(canon, cfg.prep.has_value(), cfg.grid);

    const Ordering ordering = canon.couplings.ordering;
    const bool k_first = ordering == Ordering::KthenX;
    const int first_axis = k_first ? AxisProbeK : AxisProbeX;
    const int second_axis = k_first ? AxisProbeX : AxisProbeK;
    const double first_res = k_first ? canon.probe_k.resolution : canon.probe_x.resolution;
    const double second_res = k_first ? canon.probe_x.resolution : canon.probe_k.resolution;

    {
        WaveState state = initial_state(cfg, canon, grids);
        runs.reference_first =
            wave::marginal_distribution(state, AxisSystem, k_first ? Rep::Conj : Rep::Base);
        // The reference marginal was taken in the readout representation of
        // the system axis; restore nothing, the state is rebuilt below.
    }
    {
        WaveState with = initial_state(cfg, canon, grids);
        if (ordering == Ordering::Joint) {
            wave::apply_joint(with);
        } else {
            wave::apply_sequential(with, ordering);
        }
        runs.first_readout = wave::readout_distribution(with, first_axis, model_for(first_res));
        runs.second_with = wave::readout_distribution(with, second_axis, model_for(second_res));
    }
    {
        WaveState without = initial_state(cfg, canon, grids);
        if (second_axis == AxisProbeK) {
            wave::apply_kick_k(without);
        } else {
            wave::apply_kick_x(without);
        }
        runs.second_without =
            wave::readout_distribution(without, second_axis, model_for(second_res));
    }
    return runs;
}

Table run_predict(const ParsedConfig& cfg) {
    const Scenario canon = canonical_of(cfg);
    const Ordering ordering = canon.couplings.ordering;
    const bool k_first = ordering == Ordering::KthenX;

    Table t;
    t.command = "predict";
    t.columns = {"quantity", "value", "status"};

    const NoiseDisturbance nd = noise_disturbance(canon);
    if (ordering == Ordering::Joint) {
        const VarianceReport v = joint_variances(canon);
        add_value_row(t, "delta2_x", v.delta2_first);
        add_value_row(t, "delta2_k", v.delta2_second_alone);
        add_value_row(t, "epsilon2_x", nd.primary.epsilon2);
        add_value_row(t, "epsilon2_k", nd.secondary->epsilon2);
        add_value_row(t, "eta2_k_given_x", nd.primary.eta2_signed,
                      nd.primary.noise_reduction() ? "reduction" : "");
        add_value_row(t, "eta2_x_given_k", nd.secondary->eta2_signed,
                      nd.secondary->noise_reduction() ? "reduction" : "");
        add_value_row(t, "d_x", nd.primary.d_sys_error);
        add_value_row(t, "d_k", nd.secondary->d_sys_error);
        add_value_row(t, "d_k_given_x", nd.primary.d_sys_disturbance);
        add_value_row(t, "d_x_given_k", nd.secondary->d_sys_disturbance);
        add_value_row(t, "total_error2_x", nd.primary.total_error2);
        add_value_row(t, "total_error2_k", nd.secondary->total_error2);
        add_value_row(t, "total_disturbance2_k_given_x", nd.primary.total_disturbance2);
        add_value_row(t, "total_disturbance2_x_given_k", nd.secondary->total_disturbance2);
    } else {
        const VarianceReport v = sequential_variances(canon);
        const char* first = k_first ? "k" : "x";
        const char* second = k_first ? "x" : "k";
        auto tagged = [&](const char* stem, const char* a, const char* b) {
            return std::string(stem) + "_" + a + (b ? std::string("_given_") + b : std::string());
        };
        add_value_row(t, tagged("delta2", first, nullptr), v.delta2_first);
        add_value_row(t, tagged("delta2", second, first), v.delta2_second_given_first);
        add_value_row(t, tagged("delta2", second, nullptr), v.delta2_second_alone);
        add_value_row(t, tagged("epsilon2", first, nullptr), nd.primary.epsilon2);
        add_value_row(t, tagged("eta2", second, first), nd.primary.eta2_signed,
                      nd.primary.noise_reduction() ? "reduction" : "");
        add_value_row(t, tagged("d", first, nullptr), nd.primary.d_sys_error);
        add_value_row(t, tagged("d", second, first), nd.primary.d_sys_disturbance);
        add_value_row(t, tagged("total_error2", first, nullptr), nd.primary.total_error2);
        add_value_row(t, tagged("total_disturbance2", second, first),
                      nd.primary.total_disturbance2);
    }

    for (const RelationCheck& c : check_relations(canon).checks) {
        add_value_row(t, c.name, c.lhs, relation_status_name(c.status));
    }
    return t;
}

RunResult run_oracle(const ParsedConfig& cfg) {
    const WaveRuns runs = run_wave_scenario(cfg);
    const Scenario& canon = runs.canonical;
    const Ordering ordering = canon.couplings.ordering;
    const bool k_first = ordering == Ordering::KthenX;
    const NoiseDisturbance nd = noise_disturbance(canon);

    RunResult out;
    out.table.command = "oracle";
    out.table.columns = {"quantity", "analytic", "oracle", "deviation", "status"};

    bool failed = false;
    auto add = [&](const std::string& name, double analytic, double oracle) {
        // Relative deviation, absolute when the analytic value sits near 0.
        const double scale = std::max(std::abs(analytic), 1.0);
        const double dev = std::abs(oracle - analytic) / scale;
        const bool ok = dev <= cfg.run.tolerance;
        failed = failed || !ok;
        auto& row = out.table.add_row();
        row.emplace_back(name);
        row.emplace_back(analytic);
        row.emplace_back(oracle);
        row.emplace_back(dev);
        row.emplace_back(std::string(ok ? "ok" : "exceeds_tolerance"));
    };

    const double var_first = table_moments(runs.first_readout).variance;
    const double var_with = table_moments(runs.second_with).variance;
    const double var_without = table_moments(runs.second_without).variance;

    const char* first = k_first ? "k" : "x";
    const char* second = k_first ? "x" : "k";
    if (ordering == Ordering::Joint) {
        const VarianceReport v = joint_variances(canon);
        add("delta2_x", v.delta2_first, var_first);
        add("delta2_k", v.delta2_second_alone, var_with);
        add("eta2_k_given_x", nd.primary.eta2_signed, var_with - var_without);
    } else {
        const VarianceReport v = sequential_variances(canon);
        add(std::string("delta2_") + first, v.delta2_first, var_first);
        add(std::string("delta2_") + second + "_given_" + first, v.delta2_second_given_first,
            var_with);
        add(std::string("delta2_") + second, v.delta2_second_alone, var_without);
        add(std::string("eta2_") + second + "_given_" + first, nd.primary.eta2_signed,
            var_with - var_without);
    }

    out.status = failed ? Status::Tolerance : Status::Ok;
    return out;
}

RunResult run_sample(const ParsedConfig& cfg) {
    const WaveRuns runs = run_wave_scenario(cfg);
    const std::size_t n = cfg.run.samples;
    const std::uint64_t seed = cfg.run.seed;

    const auto reference = mc::sample_outcomes(runs.reference_first, n, seed, 0, "reference");
    const auto test = mc::sample_outcomes(runs.first_readout, n, seed, 1, "first");
    const auto with_first = mc::sample_outcomes(runs.second_with, n, seed, 2, "second_with");
    const auto without_first =
        mc::sample_outcomes(runs.second_without, n, seed, 3, "second_without");

    RunResult out;
    out.table.command = "sample";
    out.table.columns = {"quantity", "estimate", "std_error"};
    auto add = [&](const std::string& name, const mc::Estimate& e) {
        auto& row = out.table.add_row();
        row.emplace_back(name);
        row.emplace_back(e.value);
        row.emplace_back(e.std_error);
    };

    try {
        const mc::CalibrationResult cal = mc::calibrate_noise(reference, 0.0, test);
        const mc::DisturbanceResult dist = mc::estimate_disturbance(with_first, without_first);
        add("sigma2_hat", cal.sigma2);
        add("epsilon2_hat", cal.epsilon2);
        add("d_hat", cal.d);
        add("eta2_hat", dist.eta2);
        add("d_disturbance_hat", dist.d);
        add("product2_hat", mc::product2_estimate(reference, 0.0, test, with_first,
                                                  without_first));
        add("heisenberg_product_hat",
            mc::product_estimate(reference, 0.0, test, with_first, without_first));
    } catch (const Error& e) {
        if (e.status() != Status::Calibration) {
            throw;
        }
        out.status = Status::Calibration;
    }
    return out;
}

Table run_scan(double t_min, double t_max, int t_steps, double r_min, double r_max,
               int r_steps) {
    const auto points = violation_scan(t_min, t_max, t_steps, r_min, r_max, r_steps);
    Table t;
    t.command = "scan";
    t.columns = {"t", "r", "epsilon2", "eta2", "product", "classification"};
    for (const ScanPoint& p : points) {
        auto& row = t.add_row();
        row.emplace_back(p.t);
        row.emplace_back(p.r);
        row.emplace_back(p.epsilon2);
        row.emplace_back(p.eta2);
        row.emplace_back(p.product);
        row.emplace_back(violation_class_name(p.cls));
    }
    return t;
}

Table run_instruments_demo(int dim, std::uint64_t seed) {
    require(dim >= 2 && dim <= inst::kMaxFactorDim, Status::InvalidArgument,
            "instrument demo dimension must lie in [2, 4]");
    using inst::FiniteState;
    using inst::Mat;

    const Mat u = inst::controlled_shift(dim, dim);
    const inst::ReadoutFamily readout = inst::ReadoutFamily::projective(dim);
    const FiniteState rho_sys = inst::random_state(dim, seed, 1);

    Table t;
    t.command = "check-instruments";
    t.columns = {"check", "value", "status"};
    auto add = [&t](const std::string& name, double value, bool ok) {
        auto& row = t.add_row();
        row.emplace_back(name);
        row.emplace_back(value);
        row.emplace_back(std::string(ok ? "ok" : "unexpected"));
    };

    // Born rule and instrument axioms over randomized states.
    double born_dev = 0.0;
    double axiom3_dev = 0.0;
    double conditional_dev = 0.0;
    const FiniteState rho_det = inst::random_state(dim, seed, 2);
    const inst::Instrument instrument = inst::build_instrument(readout, u, rho_det);
    for (int trial = 0; trial < 100; ++trial) {
        const FiniteState rho = inst::random_state(dim, seed, 100 + trial);
        const auto probs = inst::born_probability(readout, u, rho_det, rho);
        double sum = 0.0;
        for (double p : probs) {
            sum += p;
        }
        born_dev = std::max(born_dev, std::abs(sum - 1.0));
        axiom3_dev =
            std::max(axiom3_dev, std::abs(instrument.apply_all(rho.rho).trace().real() - 1.0));
        for (int mu = 0; mu < readout.outcomes(); ++mu) {
            if (probs[mu] < 1e-6) {
                continue;
            }
            const Mat via_instrument = instrument.apply(mu, rho.rho) / probs[mu];
            const Mat direct = inst::conditional_state(readout, u, rho_det, rho, mu).rho;
            conditional_dev =
                std::max(conditional_dev, (via_instrument - direct).cwiseAbs().maxCoeff());
        }
    }
    add("born_normalization_dev", born_dev, born_dev < 1e-12);
    add("axiom3_trace_dev", axiom3_dev, axiom3_dev < 1e-12);
    add("instrument_vs_conditional_dev", conditional_dev, conditional_dev < 1e-9);

    // Product probes: the sequential chain factorizes.
    const FiniteState product_pair = FiniteState::make(
        inst::kron(inst::random_state(dim, seed, 3).rho, inst::random_state(dim, seed, 4).rho));
    const auto product_check = inst::sequential_factorization_check(
        product_pair, dim, dim, u, u, readout, readout, rho_sys);
    const double product_swap = inst::swapped_correlation(product_pair, dim, dim, u, rho_sys);
    add("product_discrepancy", product_check.max_discrepancy,
        product_check.max_discrepancy < 1e-12);
    add("product_swapped_correlation", product_swap, product_swap < 1e-12);

    // Entangled probes: correlations get swapped onto the system and the
    // chain no longer factorizes.
    const FiniteState bell = inst::max_entangled(dim);
    const auto bell_check =
        inst::sequential_factorization_check(bell, dim, dim, u, u, readout, readout, rho_sys);
    const double bell_swap = inst::swapped_correlation(bell, dim, dim, u, rho_sys);
    add("entangled_discrepancy", bell_check.max_discrepancy,
        bell_check.max_discrepancy > 0.01);
    add("entangled_swapped_correlation", bell_swap, bell_swap > 0.1);
    add("feedback_deviation", inst::feedback_deviation(instrument), true);

    return t;
}

}  // namespace qnd
