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

#include <optional>
#include <string>
#include <vector>

#include "error.hpp"

// Analytic engine for sequential and joint nondemolition measurements of
// position X and wave number K = P/hbar, working on second moments only.
// Units: hbar = 1 throughout. All variance/noise formulas assume canonical
// couplings (lambda absorbed into the probe variables via canonicalize()).
//
// Variable conventions per probe A in {X, K}: J_A is the pointer (readout)
// variable, Phi_A its conjugate with [Phi_A, J_A] = i. The X interaction
// shifts J_X by X and kicks K by +Phi_X; the K interaction shifts J_K by K
// and kicks X by -Phi_K. Cross-covariances: kappa = Cov(Phi_X, J_K),
// xi = Cov(Phi_K, J_X).

namespace qnd {

enum class Ordering { XthenK, KthenX, Joint };

std::string ordering_name(Ordering o);

struct SystemMoments {
    double mean_x = 0.0;
    double mean_k = 0.0;
    double sigma_x = 0.0;  // intrinsic spread of X
    double sigma_k = 0.0;  // intrinsic spread of K
};

struct ProbeMoments {
    double delta = 0.0;        // spread of the pointer J_A
    double delta_tilde = 0.0;  // spread of Phi_A
    double mean_j = 0.0;
    double mean_phi = 0.0;
    double resolution = 0.0;  // readout spread delta'_A
};

struct CrossCovariances {
    double kappa = 0.0;  // Cov(Phi_X, J_K)
    double xi = 0.0;     // Cov(Phi_K, J_X)
};

struct Couplings {
    double lambda_x = 1.0;
    double lambda_k = 1.0;
    Ordering ordering = Ordering::XthenK;
};

struct Scenario {
    SystemMoments system;
    ProbeMoments probe_x;
    ProbeMoments probe_k;
    CrossCovariances cross;
    Couplings couplings;
    bool canonical = false;
};

struct ValidationResult {
    std::vector<std::string> violations;
    bool ok() const {
        return violations.empty();
    }
};

/// Checks positivity, the Kennard inequalities (system and per probe) and
/// the two Cauchy-Schwarz bounds on the cross-covariances. Failures are
/// named, never thrown.
ValidationResult validate_scenario(const Scenario& s);

/// Absorbs the couplings: Phi_A-like quantities are multiplied by lambda_A,
/// J_A-like quantities divided by lambda_A, cross-covariances rescaled by
/// the corresponding ratio. Probe Kennard products are unchanged.
Scenario canonicalize(const Scenario& s);

struct VarianceReport {
    double delta2_first = 0.0;               // readout variance of the first measurement
    double delta2_second_given_first = 0.0;  // second readout, first measurement on
    double delta2_second_alone = 0.0;        // second readout, first measurement off
};

/// Final readout variances for the two sequential orderings.
VarianceReport sequential_variances(const Scenario& s);

/// Final readout variances of the simultaneous measurement; the report
/// carries Var(J_X) in delta2_first and Var(J_K) in delta2_second_alone
/// (delta2_second_given_first mirrors delta2_second_alone, there is no
/// "first off" run in a joint measurement).
VarianceReport joint_variances(const Scenario& s);

struct NoiseDisturbanceReport {
    double epsilon2 = 0.0;             // statistical noise squared of the measured variable
    double eta2_signed = 0.0;          // statistical disturbance squared (may be negative)
    double d_sys_error = 0.0;          // mean shift of the measured readout
    double d_sys_disturbance = 0.0;    // mean shift induced on the other readout
    double total_error2 = 0.0;         // d_sys_error^2 + epsilon2
    double total_disturbance2 = 0.0;   // eta2_signed + d_sys_disturbance^2
    bool noise_reduction() const {
        return eta2_signed < 0.0;
    }
};

/// Noise/disturbance from the first-measured variable's point of view.
/// For the joint ordering both directions exist: `primary` is the X
/// measurement disturbing K, `secondary` the K measurement disturbing X.
struct NoiseDisturbance {
    NoiseDisturbanceReport primary;
    std::optional<NoiseDisturbanceReport> secondary;
};

NoiseDisturbance noise_disturbance(const Scenario& s);

enum class RelationStatus { Holds, Violated, Reduction };

std::string relation_status_name(RelationStatus st);

struct RelationCheck {
    std::string name;
    double lhs = 0.0;
    double bound = 0.0;
    RelationStatus status = RelationStatus::Holds;
};

struct RelationReport {
    std::vector<RelationCheck> checks;
    const RelationCheck& find(const std::string& name) const;
};

/// Evaluates the inequality chain on a scenario: the Heisenberg
/// noise-disturbance product, the operational and Ozawa-definition forms of
/// the universal relation, the u-operator bound, the joint-noise bound and
/// the Arthurs-Kelly bound. Checks involving eta skip to "reduction" status
/// when the signed disturbance is negative.
RelationReport check_relations(const Scenario& s);

/// Coupling lambda_K that equalizes the canonical spreads delta_K/lambda_K
/// and lambda_X*delta_tilde_X, so that perfect anticorrelation cancels the
/// probe contribution to the second readout variance.
double cancellation_coupling(double delta_k_physical, double delta_tilde_x_physical,
                             double lambda_x);

}  // namespace qnd
