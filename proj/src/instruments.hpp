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

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "error.hpp"

// Finite-dimensional measurement algebra: Born rule with positive readout
// families, conditional states, operation/effect decompositions, instrument
// axioms, and the correlated-probe obstruction to composing sequential
// instruments. Everything is dense and exact at desk scale (dimensions are
// capped so brute force stays instant).

namespace qnd::inst {

using Mat = Eigen::MatrixXcd;

inline constexpr int kMaxFactorDim = 4;
inline constexpr int kMaxTotalDim = 64;

struct FiniteState {
    Mat rho;

    int dim() const {
        return static_cast<int>(rho.rows());
    }
    /// Validates Hermiticity, positivity and unit trace.
    static FiniteState make(Mat m, double tol = 1e-12);
};

struct ReadoutFamily {
    std::vector<Mat> effects;  // one positive operator per outcome

    int outcomes() const {
        return static_cast<int>(effects.size());
    }
    int dim() const {
        return effects.empty() ? 0 : static_cast<int>(effects.front().rows());
    }
    void validate(double tol = 1e-12) const;
    bool commuting(double tol = 1e-10) const;

    static ReadoutFamily projective(int dim);
};

/// Outcome-indexed family of completely positive maps, stored as the system
/// operators M_{J,I}(mu).
struct Instrument {
    std::vector<std::vector<Mat>> kraus;

    int outcomes() const {
        return static_cast<int>(kraus.size());
    }
    Mat apply(int mu, const Mat& rho_sys) const;  // unnormalized conditional state
    Mat apply_all(const Mat& rho_sys) const;      // total (trace-preserving) map
    Mat effect(int mu) const;                     // E(mu) = sum M^dag M
};

/// Born probabilities P(mu) = Tr{(F(mu) x 1) U (rho_det x rho_sys) U^dag}.
std::vector<double> born_probability(const ReadoutFamily& f, const Mat& u,
                                     const FiniteState& rho_det, const FiniteState& rho_sys);

/// Conditional system state for a given outcome; requires P(mu) > 0.
FiniteState conditional_state(const ReadoutFamily& f, const Mat& u, const FiniteState& rho_det,
                              const FiniteState& rho_sys, int mu);

/// Operations M_{J,I}(mu) = sqrt(p(mu|J) w(I)) <J|U|I>. For a commuting
/// family, |J> is the common eigenbasis of all effects; otherwise each
/// outcome uses the eigenbasis of its own effect.
Instrument build_instrument(const ReadoutFamily& f, const Mat& u, const FiniteState& rho_det);

/// Trace-norm distance between the system/probe-B state after the first
/// interaction and the product of its marginals. Zero exactly when the
/// initial probe correlations do not get swapped onto the system.
double swapped_correlation(const FiniteState& rho_det_ab, int dim_a, int dim_b, const Mat& u_a,
                           const FiniteState& rho_sys);

struct FactorizationCheck {
    Eigen::MatrixXd joint;     // exact P(mu_a, mu_b) from the full chain
    Eigen::MatrixXd composed;  // instrument composition built from the marginals
    double max_discrepancy = 0.0;
};

FactorizationCheck sequential_factorization_check(const FiniteState& rho_det_ab, int dim_a,
                                                  int dim_b, const Mat& u_a, const Mat& u_b,
                                                  const ReadoutFamily& f_a,
                                                  const ReadoutFamily& f_b,
                                                  const FiniteState& rho_sys);

/// Polar-decomposition diagnostic: writes each operation as V E^{1/2} and
/// reports the largest relative deviation of V from the identity, i.e. the
/// size of the avoidable feedback hidden in the instrument.
double feedback_deviation(const Instrument& instrument);

// Dense tensor utilities.
Mat kron(const Mat& a, const Mat& b);
Mat partial_trace(const Mat& m, const std::vector<int>& dims, const std::vector<int>& keep);
Mat embed(const Mat& op, const std::vector<int>& dims, const std::vector<int>& factors);
double trace_norm(const Mat& m);

// Canned ingredients for demos and tests.
Mat controlled_shift(int probe_dim, int sys_dim);  // on probe x system
FiniteState max_entangled(int dim);                // on dim x dim
FiniteState random_state(int dim, std::uint64_t seed, std::uint64_t stream);

}  // namespace qnd::inst
