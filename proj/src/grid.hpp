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

#include <cmath>
#include <numbers>

#include "error.hpp"

namespace qnd {

/// Uniform sampling grid for one axis. The grid stores the geometry of the
/// "base" variable; the conjugate grid is implied by the unitary discrete
/// transform: spacing 2*pi/(n*spacing), centered at zero.
struct Grid1D {
    int n = 0;
    double length = 0.0;
    double center = 0.0;

    double spacing() const {
        return length / n;
    }
    double value(int i) const {
        return center + (i - n / 2) * spacing();
    }
    double conj_spacing() const {
        return 2.0 * std::numbers::pi / (n * spacing());
    }
    double conj_length() const {
        return n * conj_spacing();
    }
    double conj_value(int m) const {
        return (m - n / 2) * conj_spacing();
    }

    static Grid1D make(int n, double length, double center = 0.0) {
        require(n >= 16 && (n & (n - 1)) == 0, Status::InvalidArgument,
                "grid size must be a power of two >= 16");
        require(length > 0.0, Status::InvalidArgument, "grid length must be positive");
        return Grid1D{n, length, center};
    }

    /// Grid whose conjugate samples land on the given points: n points with
    /// conjugate spacing conj_length/n, conjugate extent conj_length.
    static Grid1D from_conjugate(int n, double conj_length, double center = 0.0) {
        require(conj_length > 0.0, Status::InvalidArgument, "conjugate length must be positive");
        return make(n, 2.0 * std::numbers::pi * n / conj_length, center);
    }
};

}  // namespace qnd
