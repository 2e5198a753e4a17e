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

#include <vector>

#include "error.hpp"

namespace qnd {

/// Discrete probability table over equally spaced values; probabilities sum
/// to one (they carry the bin measure already).
struct ProbabilityTable {
    std::vector<double> values;
    std::vector<double> probs;
    double width = 0.0;  // spacing between adjacent values
};

struct TableMoments {
    double mean = 0.0;
    double variance = 0.0;
};

void validate_table(const ProbabilityTable& t, double tol = 1e-10);

TableMoments table_moments(const ProbabilityTable& t);

/// Full discrete convolution with a Gaussian kernel of spread `resolution`
/// sampled on the table spacing. The support is extended so no mass is
/// truncated; the variance grows by the kernel variance exactly.
ProbabilityTable convolve_gaussian(const ProbabilityTable& t, double resolution);

/// Joint table over a pair of readouts, row-major [x][y].
struct ProbabilityTable2D {
    std::vector<double> values_x;
    std::vector<double> values_y;
    std::vector<double> probs;
    double width_x = 0.0;
    double width_y = 0.0;
};

void validate_table(const ProbabilityTable2D& t, double tol = 1e-10);

/// Axis-wise Gaussian convolution of a joint table (independent readout
/// resolutions per axis; zero resolution leaves the axis untouched).
ProbabilityTable2D convolve_gaussian(const ProbabilityTable2D& t, double resolution_x,
                                     double resolution_y);

ProbabilityTable marginal_x(const ProbabilityTable2D& t);
ProbabilityTable marginal_y(const ProbabilityTable2D& t);

}  // namespace qnd
