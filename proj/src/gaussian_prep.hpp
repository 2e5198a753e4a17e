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

#include <complex>
#include <vector>

#include "grid.hpp"
#include "moments.hpp"

// Correlated pure-Gaussian preparation of the two probes. The state is
// specified in the (J_K, Phi_X) representation by the covariance matrix
//
//     C = [ delta_K^2   kappa        ]      kappa = r * delta_K * delta_tilde_X
//         [ kappa       delta_tilde_X^2 ]
//
// with wavefunction  psi(J_K, Phi_X) ~ exp(-1/4 v C^-1 v^T).  The moments of
// the conjugate pair (Phi_K, J_X) follow from the quarter-inverse rule
// Cov(-Phi_K, J_X) = (1/4) C^-1, giving
//
//     delta_X^2       = delta_K^2       / (4 det C)
//     delta_tilde_K^2 = delta_tilde_X^2 / (4 det C)
//     xi              = kappa           / (4 det C)
//
// The sign of xi follows this convention and is pinned against the grid
// oracle by test.

namespace qnd {

struct ProbePairPreparation {
    double delta_k = 0.0;        // spread of J_K
    double delta_tilde_x = 0.0;  // spread of Phi_X
    double r = 0.0;              // linear correlator, |r| < 1

    double kappa() const {
        return r * delta_k * delta_tilde_x;
    }
    double det4() const {  // det C = delta_K^2 delta_tilde_X^2 (1 - r^2)
        const double p = delta_k * delta_tilde_x;
        return p * p * (1.0 - r * r);
    }
};

/// Validates spreads and the singularity cap |r| <= 1 - 1e-9.
ProbePairPreparation make_preparation(double delta_k, double delta_tilde_x, double r);

struct ReducedProbeMoments {
    double delta_x2 = 0.0;
    double delta_tilde_k2 = 0.0;
    double xi = 0.0;
};

ReducedProbeMoments reduced_probe_moments(const ProbePairPreparation& p);

/// Complete scenario with all probe moments derived from the preparation.
Scenario to_scenario(const ProbePairPreparation& p, const SystemMoments& system,
                     double resolution_x, double resolution_k, const Couplings& couplings);

/// Signed product epsilon_X^2 * eta^2_{K|X} at ideal readout. Equals
/// (1/4) (1 + 2 r delta_K/delta_tilde_X) / (1 - r^2); below 1/4 exactly when
/// r (r + 2 delta_K/delta_tilde_X) < 0.
double violation_product(const ProbePairPreparation& p);

enum class ViolationClass { Holds, Violated, Reduction };

std::string violation_class_name(ViolationClass c);

struct ScanPoint {
    double t = 0.0;  // delta_tilde_X / delta_K
    double r = 0.0;
    double epsilon2 = 0.0;
    double eta2 = 0.0;
    double product = 0.0;
    ViolationClass cls = ViolationClass::Holds;
};

/// Grid scan of the noise-disturbance product over spread ratio t and
/// correlator r, at delta_K = 1 and ideal readout. Points are ordered by
/// (t index, r index).
std::vector<ScanPoint> violation_scan(double t_min, double t_max, int t_steps, double r_min,
                                      double r_max, int r_steps);

/// Discretized two-probe amplitude on (J_K, Phi_X), row-major [j_k][phi_x],
/// normalized with the measure weights of the two grids. Optional mean
/// offsets shift the sampled state. Grids must span at least 8 standard
/// deviations and carry at least 16 points per standard deviation.
struct ProbePairWave {
    Grid1D grid_jk;
    Grid1D grid_phix;
    std::vector<std::complex<double>> amp;
};

ProbePairWave preparation_wavefunction(const ProbePairPreparation& p, const Grid1D& grid_jk,
                                       const Grid1D& grid_phix, double mean_jk = 0.0,
                                       double mean_phix = 0.0);

}  // namespace qnd
