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

#pragma once

#include <cstdint>

#include "config.hpp"
#include "prob_table.hpp"
#include "table.hpp"
#include "wave_oracle.hpp"

// Command-level drivers shared by the C API (and through it the CLI).

namespace qnd {

struct RunResult {
    Table table;
    Status status = Status::Ok;
};

/// Analytic prediction: variances, noise/disturbance and relation checks.
Table run_predict(const ParsedConfig& cfg);

/// Wavefunction-oracle comparison; status Tolerance when any deviation
/// exceeds cfg.run.tolerance.
RunResult run_oracle(const ParsedConfig& cfg);

/// Monte Carlo calibration/disturbance estimates from oracle distributions.
RunResult run_sample(const ParsedConfig& cfg);

/// Violation-region scan table.
Table run_scan(double t_min, double t_max, int t_steps, double r_min, double r_max, int r_steps);

/// Instruments demonstration at the given per-factor dimension.
Table run_instruments_demo(int dim, std::uint64_t seed);

/// Grids for the three axes, adequate for the scenario's initial and final
/// spreads; grid.n == 0 selects sizes automatically, a user-pinned size is
/// checked and rejected with a diagnostic when inadequate.
struct GridPlan {
    Grid1D sys;
    Grid1D px;
    Grid1D pk;
};
GridPlan plan_grids(const Scenario& canonical, bool with_prep, const GridSettings& grid);

/// Oracle evolutions of one scenario: readout tables for the first and
/// second measurement (with and without the first stage) plus the ideal
/// reference distribution of the first-measured system variable.
struct WaveRuns {
    Scenario canonical;
    ProbabilityTable reference_first;  // ideal measurement of the bare system
    ProbabilityTable first_readout;    // J of the first probe, resolution applied
    ProbabilityTable second_with;      // J of the second probe, first stage on
    ProbabilityTable second_without;   // J of the second probe, first stage off
};
WaveRuns run_wave_scenario(const ParsedConfig& cfg);

}  // namespace qnd
