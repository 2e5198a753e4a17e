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

#include <array>
#include <complex>
#include <vector>

#include "gaussian_prep.hpp"
#include "grid.hpp"
#include "moments.hpp"
#include "prob_table.hpp"

// Brute-force verification engine: the full wavefunction of
// system x probe-X x probe-K is evolved under the impulsive interactions
// and readout statistics are measured, independently of every analytic
// formula in moments.hpp.
//
// Each axis stores a "base" variable and reaches its conjugate through the
// unitary discrete Fourier transform psi~(q) = (2pi)^{-1/2} Int e^{-iqy}
// psi(y) dy, with [y, q] = i. Axis conventions:
//
//   axis 0  system   base X      conjugate K
//   axis 1  probe X  base Phi_X  conjugate J_X
//   axis 2  probe K  base Phi_K  conjugate J_K
//
// so every pair satisfies the same commutator and one transform routine
// serves all axes. Interactions are instantaneous phase multiplications in
// the representation that diagonalizes them (couplings already canonical).

namespace qnd::wave {

using complexd = std::complex<double>;

enum class Rep { Base, Conj };

enum Axis : int { AxisSystem = 0, AxisProbeX = 1, AxisProbeK = 2 };

struct WaveState {
    std::array<Grid1D, 3> grids;
    std::array<Rep, 3> reps = {Rep::Base, Rep::Base, Rep::Base};
    std::vector<complexd> amp;  // [sys][probe_x][probe_k], row-major

    double spacing(int axis) const {
        return reps[axis] == Rep::Base ? grids[axis].spacing() : grids[axis].conj_spacing();
    }
    double coordinate(int axis, int i) const {
        return reps[axis] == Rep::Base ? grids[axis].value(i) : grids[axis].conj_value(i);
    }
    double norm2() const;
    void normalize();
};

/// Normalized one-axis amplitude with prescribed spreads of the base and
/// conjugate variables (a quadratic chirp realizes any pair satisfying
/// sigma_base*sigma_conj >= 1/2) and prescribed means.
std::vector<complexd> gaussian_1d(const Grid1D& g, double mean_base, double sigma_base,
                                  double sigma_conj, double mean_conj);

/// Tensor product of a system amplitude with two independent probe
/// amplitudes (each tagged with the representation it is stored in).
WaveState init_state(const Grid1D& grid_sys, const std::vector<complexd>& sys_amp,
                     const Grid1D& grid_px, const std::vector<complexd>& px_amp, Rep px_rep,
                     const Grid1D& grid_pk, const std::vector<complexd>& pk_amp, Rep pk_rep);

/// Tensor product of a system amplitude with a correlated two-probe
/// amplitude given on (J_K, Phi_X); the probe-K axis starts in the
/// conjugate representation.
WaveState init_state(const Grid1D& grid_sys, const std::vector<complexd>& sys_amp,
                     const ProbePairWave& pair);

/// Moves one axis to the requested representation (no-op if already there).
void to_rep(WaveState& s, int axis, Rep target);

/// One nondemolition stage: exp(i X Phi_X) or exp(i K Phi_K), with an
/// optional strength factor (used by the split-step oracle).
void apply_kick_x(WaveState& s, double strength = 1.0);
void apply_kick_k(WaveState& s, double strength = 1.0);

/// Both stages consecutively in the given sequential order (tau -> 0+: no
/// free evolution in between).
void apply_sequential(WaveState& s, Ordering ordering);

/// Simultaneous measurement via the exact factorization
/// exp[i(X Phi_X + K Phi_K)] = exp(i X Phi_X) exp(i K Phi_K) exp(i Phi_X Phi_K / 2),
/// valid because the commutator of the two interaction terms is central.
void apply_joint(WaveState& s);

/// Symmetric split-step approximation of the joint unitary; converges to
/// apply_joint's result as substeps grow. Kept as a cross-check only.
void apply_joint_split_step(WaveState& s, int substeps);

/// Squared L2 distance between two states on identical grids/representations.
double state_distance(const WaveState& a, const WaveState& b);

struct ReadoutModel {
    enum class Family { Ideal, Gaussian };
    Family family = Family::Ideal;
    double resolution = 0.0;

    static ReadoutModel ideal() {
        return ReadoutModel{};
    }
    static ReadoutModel gaussian(double resolution);
};

/// Marginal distribution of one axis variable in the given representation.
ProbabilityTable marginal_distribution(WaveState& s, int axis, Rep rep);

/// Marginal distribution of the probe's pointer variable J, convolved with
/// the resolution kernel for the Gaussian readout family.
ProbabilityTable readout_distribution(WaveState& s, int probe_axis, const ReadoutModel& model);

/// Joint distribution of (J_X, J_K), convolved per axis.
ProbabilityTable2D joint_readout_distribution(WaveState& s, const ReadoutModel& model_x,
                                              const ReadoutModel& model_k);

TableMoments measure_moments(const ProbabilityTable& t);

/// Mean/variance of one axis variable in the requested representation.
TableMoments axis_moments(WaveState& s, int axis, Rep rep);

/// Covariance of two commuting axis variables (distinct axes).
double pair_covariance(WaveState& s, int axis_a, Rep rep_a, int axis_b, Rep rep_b);

}  // namespace qnd::wave
