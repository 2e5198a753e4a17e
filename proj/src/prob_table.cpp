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

#include "prob_table.hpp"

#include <cmath>
#include <cstddef>

namespace qnd {

namespace {

std::vector<double> gaussian_kernel(double resolution, double width, int& half_out) {
    // Cover +-8 standard deviations so the truncated mass is negligible.
    const int half = static_cast<int>(std::ceil(8.0 * resolution / width));
    std::vector<double> kernel(2 * half + 1);
    double sum = 0.0;
    for (int t = -half; t <= half; ++t) {
        const double x = t * width;
        kernel[t + half] = std::exp(-0.5 * x * x / (resolution * resolution));
        sum += kernel[t + half];
    }
    for (auto& k : kernel) {
        k /= sum;
    }
    half_out = half;
    return kernel;
}

}  // namespace

void validate_table(const ProbabilityTable& t, double tol) {
    require(!t.values.empty() && t.values.size() == t.probs.size(), Status::InvalidArgument,
            "probability table is empty or ragged");
    require(t.width > 0.0, Status::InvalidArgument, "probability table needs a positive spacing");
    double sum = 0.0;
    for (double p : t.probs) {
        require(p >= -tol, Status::InvalidArgument, "probability table has negative entries");
        sum += p;
    }
    require(std::abs(sum - 1.0) <= tol, Status::InvalidArgument,
            "probability table is not normalized");
}

TableMoments table_moments(const ProbabilityTable& t) {
    double mean = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        mean += t.values[i] * t.probs[i];
    }
    double var = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        const double d = t.values[i] - mean;
        var += d * d * t.probs[i];
    }
    return TableMoments{mean, var};
}

ProbabilityTable convolve_gaussian(const ProbabilityTable& t, double resolution) {
    if (resolution == 0.0) {
        return t;
    }
    require(resolution > 0.0, Status::InvalidArgument, "resolution must be nonnegative");

    int half = 0;
    const std::vector<double> kernel = gaussian_kernel(resolution, t.width, half);
    const int n = static_cast<int>(t.values.size());

    ProbabilityTable out;
    out.width = t.width;
    out.values.resize(n + 2 * half);
    out.probs.assign(n + 2 * half, 0.0);
    const double v0 = t.values.front() - half * t.width;
    for (int i = 0; i < n + 2 * half; ++i) {
        out.values[i] = v0 + i * t.width;
    }
    for (int i = 0; i < n; ++i) {
        const double p = t.probs[i];
        if (p == 0.0) {
            continue;
        }
        for (int k = 0; k < 2 * half + 1; ++k) {
            out.probs[i + k] += p * kernel[k];
        }
    }
    return out;
}

void validate_table(const ProbabilityTable2D& t, double tol) {
    require(!t.values_x.empty() && !t.values_y.empty() &&
                t.probs.size() == t.values_x.size() * t.values_y.size(),
            Status::InvalidArgument, "joint probability table is empty or ragged");
    double sum = 0.0;
    for (double p : t.probs) {
        require(p >= -tol, Status::InvalidArgument, "joint table has negative entries");
        sum += p;
    }
    require(std::abs(sum - 1.0) <= tol, Status::InvalidArgument, "joint table is not normalized");
}

ProbabilityTable2D convolve_gaussian(const ProbabilityTable2D& t, double resolution_x,
                                     double resolution_y) {
    ProbabilityTable2D out = t;
    const std::size_t ny = t.values_y.size();

    if (resolution_x > 0.0) {
        int half = 0;
        const auto kernel = gaussian_kernel(resolution_x, t.width_x, half);
        const int nx = static_cast<int>(out.values_x.size());
        std::vector<double> next(static_cast<std::size_t>(nx + 2 * half) * ny, 0.0);
        for (int i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                const double p = out.probs[i * ny + j];
                if (p == 0.0) {
                    continue;
                }
                for (int k = 0; k < 2 * half + 1; ++k) {
                    next[(i + k) * ny + j] += p * kernel[k];
                }
            }
        }
        std::vector<double> vals(nx + 2 * half);
        const double v0 = out.values_x.front() - half * out.width_x;
        for (int i = 0; i < nx + 2 * half; ++i) {
            vals[i] = v0 + i * out.width_x;
        }
        out.values_x = std::move(vals);
        out.probs = std::move(next);
    }
    if (resolution_y > 0.0) {
        int half = 0;
        const auto kernel = gaussian_kernel(resolution_y, t.width_y, half);
        const int nx = static_cast<int>(out.values_x.size());
        const int ny0 = static_cast<int>(out.values_y.size());
        std::vector<double> next(static_cast<std::size_t>(nx) * (ny0 + 2 * half), 0.0);
        for (int i = 0; i < nx; ++i) {
            for (int j = 0; j < ny0; ++j) {
                const double p = out.probs[static_cast<std::size_t>(i) * ny0 + j];
                if (p == 0.0) {
                    continue;
                }
                for (int k = 0; k < 2 * half + 1; ++k) {
                    next[static_cast<std::size_t>(i) * (ny0 + 2 * half) + j + k] += p * kernel[k];
                }
            }
        }
        std::vector<double> vals(ny0 + 2 * half);
        const double v0 = out.values_y.front() - half * out.width_y;
        for (int j = 0; j < ny0 + 2 * half; ++j) {
            vals[j] = v0 + j * out.width_y;
        }
        out.values_y = std::move(vals);
        out.probs = std::move(next);
    }
    return out;
}

ProbabilityTable marginal_x(const ProbabilityTable2D& t) {
    ProbabilityTable out;
    out.values = t.values_x;
    out.width = t.width_x;
    out.probs.assign(t.values_x.size(), 0.0);
    const std::size_t ny = t.values_y.size();
    for (std::size_t i = 0; i < t.values_x.size(); ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            out.probs[i] += t.probs[i * ny + j];
        }
    }
    return out;
}

ProbabilityTable marginal_y(const ProbabilityTable2D& t) {
    ProbabilityTable out;
    out.values = t.values_y;
    out.width = t.width_y;
    out.probs.assign(t.values_y.size(), 0.0);
    const std::size_t ny = t.values_y.size();
    for (std::size_t i = 0; i < t.values_x.size(); ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            out.probs[j] += t.probs[i * ny + j];
        }
    }
    return out;
}

}  // namespace qnd
