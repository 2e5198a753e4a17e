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
#include <functional>
#include <string>
#include <vector>

#include "prob_table.hpp"

// Monte Carlo side of the operational definitions: outcomes are drawn from
// oracle-computed probability tables (inverse transform on the discrete CDF
// with within-bin jitter), keeping this estimation path independent of the
// analytic formulas it is used to check.

namespace qnd::mc {

/// Number of sample blocks; doubles as the jackknife block count.
inline constexpr int kBlocks = 100;

struct OutcomeBatch {
    std::vector<double> mu_first;
    std::vector<double> mu_second;  // filled when sampling outcome pairs
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string scenario_id;

    bool is_pair() const {
        return !mu_second.empty();
    }
};

/// Draws n outcomes; blocks of samples use split counter streams, so the
/// batch is a pure function of (table, n, seed, stream).
OutcomeBatch sample_outcomes(const ProbabilityTable& table, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream = 0, std::string scenario_id = {});

OutcomeBatch sample_outcomes(const ProbabilityTable2D& table, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream = 0, std::string scenario_id = {});

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct BatchStats {
    double mean = 0.0;
    double var = 0.0;  // unbiased sample variance
};

/// Jackknife standard error over kBlocks leave-one-block-out resamples of a
/// statistic that depends on the batches only through their means and
/// variances. All batches are blocked in lockstep.
Estimate jackknife(const std::vector<const std::vector<double>*>& batches,
                   const std::function<double(const std::vector<BatchStats>&)>& statistic);

struct CalibrationResult {
    Estimate sigma2;    // inferred intrinsic variance of the system
    Estimate epsilon2;  // statistical noise of the probe under test
    Estimate d;         // systematic error (mean shift against the reference)
};

/// Calibration against a bias-free reference probe of known noise epsilon0:
/// sigma2 = Var(ref) - epsilon0^2, epsilon2 = Var(test) - sigma2,
/// d = mean(test) - mean(ref). Throws Status::Calibration when the inferred
/// sigma2 is negative beyond three standard errors.
CalibrationResult calibrate_noise(const OutcomeBatch& reference, double epsilon0,
                                  const OutcomeBatch& test);

struct DisturbanceResult {
    Estimate eta2;  // signed
    Estimate d;
};

DisturbanceResult estimate_disturbance(const OutcomeBatch& with_first,
                                       const OutcomeBatch& without_first);

/// Joint estimate of epsilon^2 * eta^2 with its jackknife error, resampling
/// all four batches in lockstep.
Estimate product2_estimate(const OutcomeBatch& reference, double epsilon0,
                           const OutcomeBatch& test, const OutcomeBatch& with_first,
                           const OutcomeBatch& without_first);

/// Same resampling for epsilon * eta (negative eta^2 clamps to zero).
Estimate product_estimate(const OutcomeBatch& reference, double epsilon0,
                          const OutcomeBatch& test, const OutcomeBatch& with_first,
                          const OutcomeBatch& without_first);

}  // namespace qnd::mc
