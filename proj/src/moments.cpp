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

#include "moments.hpp"

#include <cmath>
#include <limits>

namespace qnd {

namespace {

// Absolute slack for inequality checks on exactly-representable inputs.
constexpr double kSlack = 1e-12;

double sq(double v) {
    return v * v;
}

Scenario as_canonical(const Scenario& s) {
    return s.canonical ? s : canonicalize(s);
}

}  // namespace

std::string ordering_name(Ordering o) {
    switch (o) {
        case Ordering::XthenK:
            return "xk";
        case Ordering::KthenX:
            return "kx";
        case Ordering::Joint:
            return "joint";
    }
    return "?";
}

std::string relation_status_name(RelationStatus st) {
    switch (st) {
        case RelationStatus::Holds:
            return "holds";
        case RelationStatus::Violated:
            return "violated";
        case RelationStatus::Reduction:
            return "reduction";
    }
    return "?";
}

ValidationResult validate_scenario(const Scenario& s) {
    ValidationResult result;
    auto flag = [&result](bool ok, const char* name) {
        if (!ok) {
            result.violations.emplace_back(name);
        }
    };

    flag(s.system.sigma_x > 0.0 && s.system.sigma_k > 0.0, "positivity_system");
    flag(s.probe_x.delta >= 0.0 && s.probe_x.delta_tilde >= 0.0, "positivity_probe_x");
    flag(s.probe_k.delta >= 0.0 && s.probe_k.delta_tilde >= 0.0, "positivity_probe_k");
    flag(s.probe_x.resolution >= 0.0, "nonnegative_resolution_x");
    flag(s.probe_k.resolution >= 0.0, "nonnegative_resolution_k");
    flag(s.couplings.lambda_x > 0.0, "positive_coupling_x");
    flag(s.couplings.lambda_k > 0.0, "positive_coupling_k");

    flag(s.system.sigma_x * s.system.sigma_k >= 0.5 - kSlack, "kennard_system");
    flag(s.probe_x.delta * s.probe_x.delta_tilde >= 0.5 - kSlack, "kennard_probe_x");
    flag(s.probe_k.delta * s.probe_k.delta_tilde >= 0.5 - kSlack, "kennard_probe_k");

    flag(std::abs(s.cross.kappa) <= s.probe_x.delta_tilde * s.probe_k.delta + kSlack,
         "cauchy_schwarz_kappa");
    flag(std::abs(s.cross.xi) <= s.probe_k.delta_tilde * s.probe_x.delta + kSlack,
         "cauchy_schwarz_xi");

    return result;
}

Scenario canonicalize(const Scenario& s) {
    require(!s.canonical, Status::InvalidArgument, "scenario is already canonical");
    const double lx = s.couplings.lambda_x;
    const double lk = s.couplings.lambda_k;
    require(lx > 0.0 && lk > 0.0, Status::InvalidArgument, "couplings must be positive");

    Scenario c = s;
    c.probe_x.delta /= lx;
    c.probe_x.delta_tilde *= lx;
    c.probe_x.mean_j /= lx;
    c.probe_x.mean_phi *= lx;
    c.probe_x.resolution /= lx;

    c.probe_k.delta /= lk;
    c.probe_k.delta_tilde *= lk;
    c.probe_k.mean_j /= lk;
    c.probe_k.mean_phi *= lk;
    c.probe_k.resolution /= lk;

    c.cross.kappa *= lx / lk;
    c.cross.xi *= lk / lx;

    c.couplings.lambda_x = 1.0;
    c.couplings.lambda_k = 1.0;
    c.canonical = true;
    return c;
}

VarianceReport sequential_variances(const Scenario& scenario) {
    const Scenario s = as_canonical(scenario);
    require(s.couplings.ordering != Ordering::Joint, Status::InvalidArgument,
            "sequential_variances requires a sequential ordering; use joint_variances");

    const double sx2 = sq(s.system.sigma_x);
    const double sk2 = sq(s.system.sigma_k);
    const double rx2 = sq(s.probe_x.resolution);
    const double rk2 = sq(s.probe_k.resolution);

    VarianceReport r;
    if (s.couplings.ordering == Ordering::XthenK) {
        r.delta2_first = sx2 + sq(s.probe_x.delta) + rx2;
        r.delta2_second_given_first =
            sk2 + sq(s.probe_k.delta) + sq(s.probe_x.delta_tilde) + 2.0 * s.cross.kappa + rk2;
        r.delta2_second_alone = sk2 + sq(s.probe_k.delta) + rk2;
    } else {
        // Mirror of the X-first case. The K kick enters X with a minus sign
        // (X -> X - Phi_K), so xi appears as -2*xi where kappa appeared as
        // +2*kappa.
        r.delta2_first = sk2 + sq(s.probe_k.delta) + rk2;
        r.delta2_second_given_first =
            sx2 + sq(s.probe_x.delta) + sq(s.probe_k.delta_tilde) - 2.0 * s.cross.xi + rx2;
        r.delta2_second_alone = sx2 + sq(s.probe_x.delta) + rx2;
    }
    return r;
}

VarianceReport joint_variances(const Scenario& scenario) {
    const Scenario s = as_canonical(scenario);
    require(s.couplings.ordering == Ordering::Joint, Status::InvalidArgument,
            "joint_variances requires the joint ordering; use sequential_variances");

    const double dx2 = sq(s.system.sigma_x) + sq(s.probe_x.delta) + sq(s.probe_x.resolution) +
                       0.25 * sq(s.probe_k.delta_tilde) - s.cross.xi;
    const double dk2 = sq(s.system.sigma_k) + sq(s.probe_k.delta) + sq(s.probe_k.resolution) +
                       0.25 * sq(s.probe_x.delta_tilde) + s.cross.kappa;

    VarianceReport r;
    r.delta2_first = dx2;
    r.delta2_second_given_first = dk2;
    r.delta2_second_alone = dk2;
    return r;
}

NoiseDisturbance noise_disturbance(const Scenario& scenario) {
    const Scenario s = as_canonical(scenario);
    NoiseDisturbance out;

    auto finish = [](NoiseDisturbanceReport& r) {
        r.total_error2 = sq(r.d_sys_error) + r.epsilon2;
        r.total_disturbance2 = r.eta2_signed + sq(r.d_sys_disturbance);
    };

    switch (s.couplings.ordering) {
        case Ordering::XthenK: {
            NoiseDisturbanceReport& r = out.primary;
            r.epsilon2 = sq(s.probe_x.delta) + sq(s.probe_x.resolution);
            r.eta2_signed = sq(s.probe_x.delta_tilde) + 2.0 * s.cross.kappa;
            r.d_sys_error = s.probe_x.mean_j;
            r.d_sys_disturbance = s.probe_x.mean_phi;
            finish(r);
            break;
        }
        case Ordering::KthenX: {
            NoiseDisturbanceReport& r = out.primary;
            r.epsilon2 = sq(s.probe_k.delta) + sq(s.probe_k.resolution);
            r.eta2_signed = sq(s.probe_k.delta_tilde) - 2.0 * s.cross.xi;
            r.d_sys_error = s.probe_k.mean_j;
            r.d_sys_disturbance = -s.probe_k.mean_phi;
            finish(r);
            break;
        }
        case Ordering::Joint: {
            NoiseDisturbanceReport& x = out.primary;
            x.epsilon2 = sq(s.probe_x.delta) + sq(s.probe_x.resolution) +
                         0.25 * sq(s.probe_k.delta_tilde) - s.cross.xi;
            x.eta2_signed = 0.25 * sq(s.probe_x.delta_tilde) + s.cross.kappa;
            x.d_sys_error = s.probe_x.mean_j - 0.5 * s.probe_k.mean_phi;
            x.d_sys_disturbance = 0.5 * s.probe_x.mean_phi;
            finish(x);

            NoiseDisturbanceReport k;
            k.epsilon2 = sq(s.probe_k.delta) + sq(s.probe_k.resolution) +
                         0.25 * sq(s.probe_x.delta_tilde) + s.cross.kappa;
            k.eta2_signed = 0.25 * sq(s.probe_k.delta_tilde) - s.cross.xi;
            k.d_sys_error = s.probe_k.mean_j + 0.5 * s.probe_x.mean_phi;
            k.d_sys_disturbance = -0.5 * s.probe_k.mean_phi;
            finish(k);
            out.secondary = k;
            break;
        }
    }
    return out;
}

const RelationCheck& RelationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) {
            return c;
        }
    }
    fail(Status::Internal, "no relation check named " + name);
}

RelationReport check_relations(const Scenario& scenario) {
    const Scenario s = as_canonical(scenario);
    const NoiseDisturbance nd = noise_disturbance(s);
    RelationReport report;

    auto compare = [](double lhs, double bound) {
        return lhs >= bound - kSlack ? RelationStatus::Holds : RelationStatus::Violated;
    };
    auto product_check = [&](const std::string& name, const NoiseDisturbanceReport& r) {
        RelationCheck c;
        c.name = name;
        c.bound = 0.5;
        if (r.noise_reduction()) {
            c.lhs = std::numeric_limits<double>::quiet_NaN();
            c.status = RelationStatus::Reduction;
        } else {
            c.lhs = std::sqrt(r.epsilon2) * std::sqrt(r.eta2_signed);
            c.status = compare(c.lhs, c.bound);
        }
        report.checks.push_back(c);
    };

    if (s.couplings.ordering == Ordering::Joint) {
        product_check("heisenberg_product_x", nd.primary);
        product_check("heisenberg_product_k", *nd.secondary);
    } else {
        product_check("heisenberg_product", nd.primary);
    }

    // The universal relation is evaluated from the first-measured variable's
    // point of view: sigma_first is the intrinsic spread of the measured
    // variable, sigma_second of the disturbed one.
    const bool k_first = s.couplings.ordering == Ordering::KthenX;
    const double sigma_first = k_first ? s.system.sigma_k : s.system.sigma_x;
    const double sigma_second = k_first ? s.system.sigma_x : s.system.sigma_k;
    const double eps = std::sqrt(nd.primary.epsilon2);
    // With a negative signed disturbance the operational eta is taken as 0
    // (the relation degenerates to eps*sigma >= 1/2).
    const double eta_op = std::sqrt(std::max(nd.primary.eta2_signed, 0.0));
    {
        RelationCheck c;
        c.name = "ozawa_operational";
        c.bound = 0.5;
        c.lhs = eps * eta_op + eps * sigma_second + sigma_first * eta_op;
        c.status = compare(c.lhs, c.bound);
        report.checks.push_back(c);
    }
    {
        // State-independent disturbance: eta~^2 = delta_tilde^2 + <Phi>^2 of
        // the first probe, insensitive to the cross-covariance.
        const ProbeMoments& first_probe = k_first ? s.probe_k : s.probe_x;
        const double eta_oz =
            std::sqrt(sq(first_probe.delta_tilde) + sq(first_probe.mean_phi));
        RelationCheck c;
        c.name = "ozawa_definition";
        c.bound = 0.5;
        c.lhs = eps * eta_oz + eps * sigma_second + sigma_first * eta_oz;
        c.status = compare(c.lhs, c.bound);
        report.checks.push_back(c);
    }

    // Preparation-level bounds, independent of the ordering.
    const double ux2 = sq(s.probe_x.delta) + 0.25 * sq(s.probe_k.delta_tilde) - s.cross.xi;
    const double uk2 = sq(s.probe_k.delta) + 0.25 * sq(s.probe_x.delta_tilde) + s.cross.kappa;
    {
        RelationCheck c;
        c.name = "u_product";
        c.bound = 0.25;
        c.lhs = ux2 * uk2;
        c.status = compare(c.lhs, c.bound);
        report.checks.push_back(c);
    }
    {
        RelationCheck c;
        c.name = "joint_noise_product";
        c.bound = 0.25;
        c.lhs = (ux2 + sq(s.probe_x.resolution)) * (uk2 + sq(s.probe_k.resolution));
        c.status = compare(c.lhs, c.bound);
        report.checks.push_back(c);
    }
    {
        // Total joint readout spreads with ideal readout.
        RelationCheck c;
        c.name = "arthurs_kelly";
        c.bound = 1.0;
        c.lhs = std::sqrt((sq(s.system.sigma_x) + ux2) * (sq(s.system.sigma_k) + uk2));
        c.status = compare(c.lhs, c.bound);
        report.checks.push_back(c);
    }

    return report;
}

double cancellation_coupling(double delta_k_physical, double delta_tilde_x_physical,
                             double lambda_x) {
    require(delta_k_physical > 0.0 && delta_tilde_x_physical > 0.0 && lambda_x > 0.0,
            Status::InvalidArgument, "cancellation_coupling requires positive arguments");
    return delta_k_physical / (lambda_x * delta_tilde_x_physical);
}

}  // namespace qnd
