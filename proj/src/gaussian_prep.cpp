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

#include "gaussian_prep.hpp"

#include <cmath>
#include <string>

namespace qnd {

namespace {

constexpr double kSingularCap = 1e-9;

void check_axis_resolution(const Grid1D& g, double sigma, const char* axis) {
    const double half_span = 0.5 * g.length;
    if (half_span < 4.0 * sigma) {
        fail(Status::GridResolution,
             std::string("grid for ") + axis + " spans " + std::to_string(g.length) +
                 ", needs at least 8 standard deviations (" + std::to_string(8.0 * sigma) + ")");
    }
    const double points_per_sigma = sigma / g.spacing();
    if (points_per_sigma < 16.0 - 1e-9) {
        fail(Status::GridResolution,
             std::string("grid for ") + axis + " has " + std::to_string(points_per_sigma) +
                 " points per standard deviation, needs at least 16");
    }
}

}  // namespace

std::string violation_class_name(ViolationClass c) {
    switch (c) {
        case ViolationClass::Holds:
            return "holds";
        case ViolationClass::Violated:
            return "violated";
        case ViolationClass::Reduction:
            return "reduction";
    }
    return "?";
}

ProbePairPreparation make_preparation(double delta_k, double delta_tilde_x, double r) {
    require(delta_k > 0.0 && delta_tilde_x > 0.0, Status::InvalidArgument,
            "preparation spreads must be positive");
    if (std::abs(r) >= 1.0 - kSingularCap) {
        fail(Status::SingularPreparation,
             "correlator |r| = " + std::to_string(std::abs(r)) +
                 " is within 1e-9 of the singular pure-state limit");
    }
    return ProbePairPreparation{delta_k, delta_tilde_x, r};
}

ReducedProbeMoments reduced_probe_moments(const ProbePairPreparation& p) {
    if (std::abs(p.r) >= 1.0 - kSingularCap) {
        fail(Status::SingularPreparation, "preparation is singular");
    }
    const double det4 = p.det4();
    ReducedProbeMoments m;
    m.delta_x2 = p.delta_k * p.delta_k / (4.0 * det4);
    m.delta_tilde_k2 = p.delta_tilde_x * p.delta_tilde_x / (4.0 * det4);
    m.xi = p.kappa() / (4.0 * det4);
    return m;
}

Scenario to_scenario(const ProbePairPreparation& p, const SystemMoments& system,
                     double resolution_x, double resolution_k, const Couplings& couplings) {
    const ReducedProbeMoments m = reduced_probe_moments(p);
    Scenario s;
    s.system = system;
    s.probe_x.delta = std::sqrt(m.delta_x2);
    s.probe_x.delta_tilde = p.delta_tilde_x;
    s.probe_x.resolution = resolution_x;
    s.probe_k.delta = p.delta_k;
    s.probe_k.delta_tilde = std::sqrt(m.delta_tilde_k2);
    s.probe_k.resolution = resolution_k;
    s.cross.kappa = p.kappa();
    s.cross.xi = m.xi;
    s.couplings = couplings;
    s.canonical = false;
    return s;
}

double violation_product(const ProbePairPreparation& p) {
    const ReducedProbeMoments m = reduced_probe_moments(p);
    const double eta2 = p.delta_tilde_x * p.delta_tilde_x + 2.0 * p.kappa();
    return m.delta_x2 * eta2;
}

std::vector<ScanPoint> violation_scan(double t_min, double t_max, int t_steps, double r_min,
                                      double r_max, int r_steps) {
    require(t_steps >= 1 && r_steps >= 1, Status::InvalidArgument, "scan needs at least one step");
    require(t_min > 0.0 && t_min <= t_max, Status::InvalidArgument,
            "scan requires 0 < t_min <= t_max");
    require(r_min <= r_max, Status::InvalidArgument, "scan requires r_min <= r_max");
    require(std::abs(r_min) < 1.0 - kSingularCap && std::abs(r_max) < 1.0 - kSingularCap,
            Status::InvalidArgument, "scan correlator range must stay inside (-1, 1)");

    auto linspace_at = [](double lo, double hi, int steps, int i) {
        return steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
    };

    std::vector<ScanPoint> points;
    points.reserve(static_cast<std::size_t>(t_steps) * r_steps);
    for (int it = 0; it < t_steps; ++it) {
        const double t = linspace_at(t_min, t_max, t_steps, it);
        for (int ir = 0; ir < r_steps; ++ir) {
            const double r = linspace_at(r_min, r_max, r_steps, ir);
            const ProbePairPreparation p = make_preparation(1.0, t, r);
            const ReducedProbeMoments m = reduced_probe_moments(p);
            ScanPoint pt;
            pt.t = t;
            pt.r = r;
            pt.epsilon2 = m.delta_x2;
            pt.eta2 = t * t + 2.0 * p.kappa();
            pt.product = pt.epsilon2 * pt.eta2;
            if (pt.eta2 <= 0.0) {
                pt.cls = ViolationClass::Reduction;
            } else if (pt.product < 0.25 - 1e-12) {
                pt.cls = ViolationClass::Violated;
            } else {
                pt.cls = ViolationClass::Holds;
            }
            points.push_back(pt);
        }
    }
    return points;
}

ProbePairWave preparation_wavefunction(const ProbePairPreparation& p, const Grid1D& grid_jk,
                                       const Grid1D& grid_phix, double mean_jk,
                                       double mean_phix) {
    const ReducedProbeMoments reduced = reduced_probe_moments(p);
    check_axis_resolution(grid_jk, p.delta_k, "J_K");
    check_axis_resolution(grid_phix, p.delta_tilde_x, "Phi_X");
    // The conjugate variables must fit inside the grids' conjugate windows.
    if (0.5 * grid_jk.conj_length() < 4.0 * std::sqrt(reduced.delta_tilde_k2)) {
        fail(Status::GridResolution, "J_K grid spacing too coarse for the Phi_K spread");
    }
    if (0.5 * grid_phix.conj_length() < 4.0 * std::sqrt(reduced.delta_x2)) {
        fail(Status::GridResolution, "Phi_X grid spacing too coarse for the J_X spread");
    }

    const double det4 = p.det4();
    const double a11 = p.delta_tilde_x * p.delta_tilde_x / det4;  // C^-1, (J_K, J_K)
    const double a22 = p.delta_k * p.delta_k / det4;
    const double a12 = -p.kappa() / det4;

    ProbePairWave wave;
    wave.grid_jk = grid_jk;
    wave.grid_phix = grid_phix;
    wave.amp.resize(static_cast<std::size_t>(grid_jk.n) * grid_phix.n);

    double norm2 = 0.0;
    for (int i = 0; i < grid_jk.n; ++i) {
        const double u = grid_jk.value(i) - mean_jk;
        for (int j = 0; j < grid_phix.n; ++j) {
            const double v = grid_phix.value(j) - mean_phix;
            const double q = a11 * u * u + 2.0 * a12 * u * v + a22 * v * v;
            const double val = std::exp(-0.25 * q);
            wave.amp[static_cast<std::size_t>(i) * grid_phix.n + j] = val;
            norm2 += val * val;
        }
    }
    norm2 *= grid_jk.spacing() * grid_phix.spacing();
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& a : wave.amp) {
        a *= scale;
    }
    return wave;
}

}  // namespace qnd
