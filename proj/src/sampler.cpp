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

#include "sampler.hpp"

#include <algorithm>
#include <cmath>

#include "philox.hpp"

namespace qnd::mc {

namespace {

std::vector<double> cumulative(const std::vector<double>& probs) {
    std::vector<double> cdf(probs.size());
    double run = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        run += probs[i];
        cdf[i] = run;
    }
    cdf.back() = 1.0;
    return cdf;
}

std::size_t pick_bin(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

struct BlockRange {
    std::size_t begin;
    std::size_t end;
};

BlockRange block_range(std::size_t n, int block) {
    return BlockRange{n * block / kBlocks, n * (block + 1) / kBlocks};
}

// Per-block sums for leave-one-out statistics.
struct BlockedBatch {
    std::vector<double> sum;
    std::vector<double> sumsq;
    std::vector<std::size_t> count;
    double total_sum = 0.0;
    double total_sumsq = 0.0;
    std::size_t total_count = 0;

    explicit BlockedBatch(const std::vector<double>& values) {
        sum.assign(kBlocks, 0.0);
        sumsq.assign(kBlocks, 0.0);
        count.assign(kBlocks, 0);
        for (int b = 0; b < kBlocks; ++b) {
            const BlockRange r = block_range(values.size(), b);
            for (std::size_t i = r.begin; i < r.end; ++i) {
                sum[b] += values[i];
                sumsq[b] += values[i] * values[i];
            }
            count[b] = r.end - r.begin;
            total_sum += sum[b];
            total_sumsq += sumsq[b];
            total_count += count[b];
        }
    }

    BatchStats stats_without(int block) const {
        const double s = total_sum - (block >= 0 ? sum[block] : 0.0);
        const double s2 = total_sumsq - (block >= 0 ? sumsq[block] : 0.0);
        const double n = static_cast<double>(total_count - (block >= 0 ? count[block] : 0));
        BatchStats st;
        st.mean = s / n;
        st.var = (s2 - s * s / n) / (n - 1.0);
        return st;
    }
};

}  // namespace

OutcomeBatch sample_outcomes(const ProbabilityTable& table, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream, std::string scenario_id) {
    validate_table(table);
    require(n >= 1, Status::InvalidArgument, "need at least one sample");
    const std::vector<double> cdf = cumulative(table.probs);

    OutcomeBatch batch;
    batch.seed = seed;
    batch.stream = stream;
    batch.scenario_id = std::move(scenario_id);
    batch.mu_first.resize(n);
    for (int b = 0; b < kBlocks; ++b) {
        CounterRng rng(seed, (stream << 32) | static_cast<std::uint32_t>(b));
        const BlockRange r = block_range(n, b);
        for (std::size_t i = r.begin; i < r.end; ++i) {
            const std::size_t bin = pick_bin(cdf, rng.uniform());
            batch.mu_first[i] = table.values[bin] + (rng.uniform() - 0.5) * table.width;
        }
    }
    return batch;
}

OutcomeBatch sample_outcomes(const ProbabilityTable2D& table, std::size_t n, std::uint64_t seed,
                             std::uint64_t stream, std::string scenario_id) {
    validate_table(table);
    require(n >= 1, Status::InvalidArgument, "need at least one sample");
    const std::vector<double> cdf = cumulative(table.probs);
    const std::size_t ny = table.values_y.size();

    OutcomeBatch batch;
    batch.seed = seed;
    batch.stream = stream;
    batch.scenario_id = std::move(scenario_id);
    batch.mu_first.resize(n);
    batch.mu_second.resize(n);
    for (int b = 0; b < kBlocks; ++b) {
        CounterRng rng(seed, (stream << 32) | static_cast<std::uint32_t>(b));
        const BlockRange r = block_range(n, b);
        for (std::size_t i = r.begin; i < r.end; ++i) {
            const std::size_t bin = pick_bin(cdf, rng.uniform());
            batch.mu_first[i] = table.values_x[bin / ny] + (rng.uniform() - 0.5) * table.width_x;
            batch.mu_second[i] = table.values_y[bin % ny] + (rng.uniform() - 0.5) * table.width_y;
        }
    }
    return batch;
}

Estimate jackknife(const std::vector<const std::vector<double>*>& batches,
                   const std::function<double(const std::vector<BatchStats>&)>& statistic) {
    std::vector<BlockedBatch> blocked;
    blocked.reserve(batches.size());
    for (const auto* batch : batches) {
        require(batch->size() >= static_cast<std::size_t>(2 * kBlocks), Status::InvalidArgument,
                "batches must hold at least two samples per jackknife block");
        blocked.emplace_back(*batch);
    }

    std::vector<BatchStats> full(batches.size());
    for (std::size_t i = 0; i < batches.size(); ++i) {
        full[i] = blocked[i].stats_without(-1);
    }
    Estimate est;
    est.value = statistic(full);

    std::vector<double> resamples(kBlocks);
    double mean = 0.0;
    std::vector<BatchStats> partial(batches.size());
    for (int b = 0; b < kBlocks; ++b) {
        for (std::size_t i = 0; i < batches.size(); ++i) {
            partial[i] = blocked[i].stats_without(b);
        }
        resamples[b] = statistic(partial);
        mean += resamples[b];
    }
    mean /= kBlocks;
    double ss = 0.0;
    for (double v : resamples) {
        ss += (v - mean) * (v - mean);
    }
    est.std_error = std::sqrt(ss * (kBlocks - 1.0) / kBlocks);
    return est;
}

CalibrationResult calibrate_noise(const OutcomeBatch& reference, double epsilon0,
                                  const OutcomeBatch& test) {
    const double eps0_2 = epsilon0 * epsilon0;
    const std::vector<const std::vector<double>*> batches = {&reference.mu_first,
                                                             &test.mu_first};
    CalibrationResult result;
    result.sigma2 = jackknife(
        batches, [eps0_2](const std::vector<BatchStats>& s) { return s[0].var - eps0_2; });
    result.epsilon2 = jackknife(batches, [eps0_2](const std::vector<BatchStats>& s) {
        return s[1].var - (s[0].var - eps0_2);
    });
    result.d = jackknife(
        batches, [](const std::vector<BatchStats>& s) { return s[1].mean - s[0].mean; });

    if (result.sigma2.value < -3.0 * result.sigma2.std_error) {
        fail(Status::Calibration,
             "inferred intrinsic variance is negative beyond statistical tolerance");
    }
    return result;
}

DisturbanceResult estimate_disturbance(const OutcomeBatch& with_first,
                                       const OutcomeBatch& without_first) {
    const std::vector<const std::vector<double>*> batches = {&with_first.mu_first,
                                                             &without_first.mu_first};
    DisturbanceResult result;
    result.eta2 =
        jackknife(batches, [](const std::vector<BatchStats>& s) { return s[0].var - s[1].var; });
    result.d = jackknife(
        batches, [](const std::vector<BatchStats>& s) { return s[0].mean - s[1].mean; });
    return result;
}

namespace {

Estimate combined_product(const OutcomeBatch& reference, double epsilon0,
                          const OutcomeBatch& test, const OutcomeBatch& with_first,
                          const OutcomeBatch& without_first, bool take_root) {
    const double eps0_2 = epsilon0 * epsilon0;
    const std::vector<const std::vector<double>*> batches = {
        &reference.mu_first, &test.mu_first, &with_first.mu_first, &without_first.mu_first};
    return jackknife(batches, [eps0_2, take_root](const std::vector<BatchStats>& s) {
        const double eps2 = s[1].var - (s[0].var - eps0_2);
        const double eta2 = s[2].var - s[3].var;
        if (take_root) {
            return std::sqrt(std::max(eps2, 0.0)) * std::sqrt(std::max(eta2, 0.0));
        }
        return eps2 * eta2;
    });
}

}  // namespace

Estimate product2_estimate(const OutcomeBatch& reference, double epsilon0,
                           const OutcomeBatch& test, const OutcomeBatch& with_first,
                           const OutcomeBatch& without_first) {
    return combined_product(reference, epsilon0, test, with_first, without_first, false);
}

Estimate product_estimate(const OutcomeBatch& reference, double epsilon0,
                          const OutcomeBatch& test, const OutcomeBatch& with_first,
                          const OutcomeBatch& without_first) {
    return combined_product(reference, epsilon0, test, with_first, without_first, true);
}

}  // namespace qnd::mc
