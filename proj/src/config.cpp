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

#include "config.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qnd {

namespace {

constexpr std::array kKnownKeys = {
    "system.sigma_x",     "system.sigma_k",      "system.mean_x",      "system.mean_k",
    "probe_x.delta",      "probe_x.delta_tilde", "probe_x.mean_j",     "probe_x.mean_phi",
    "probe_x.resolution", "probe_k.delta",       "probe_k.delta_tilde", "probe_k.mean_j",
    "probe_k.mean_phi",   "probe_k.resolution",  "cross.kappa",        "cross.xi",
    "prep.delta_k",       "prep.delta_tilde_x",  "prep.r",             "coupling.lambda_x",
    "coupling.lambda_k",  "coupling.ordering",   "grid.n",             "grid.extent_sigmas",
    "run.tolerance",      "run.samples",         "run.seed",
};

constexpr std::array kPrepExclusive = {
    "probe_x.delta", "probe_x.delta_tilde", "probe_k.delta",
    "probe_k.delta_tilde", "cross.kappa", "cross.xi",
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) {
            return true;
        }
    }
    return false;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        fail(Status::InvalidArgument, "key " + key + ": cannot parse number '" + value + "'");
    }
    require(used == value.size(), Status::InvalidArgument,
            "key " + key + ": trailing characters in '" + value + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    require(v >= 0.0 && v == std::floor(v) && v <= 1e18, Status::InvalidArgument,
            "key " + key + ": expected a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

ConfigMap ConfigMap::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        fail(Status::Io, "cannot open config file " + path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str());
}

ConfigMap ConfigMap::from_text(const std::string& text) {
    ConfigMap map;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, Status::InvalidArgument,
                "line " + std::to_string(line_no) + ": expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(known_key(key), Status::InvalidArgument,
                "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        require(!value.empty(), Status::InvalidArgument,
                "line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        map.values_[key] = value;
    }
    return map;
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    require(known_key(key), Status::InvalidArgument, "unknown key '" + key + "'");
    require(!value.empty(), Status::InvalidArgument, "empty value for '" + key + "'");
    values_[key] = value;
}

ParsedConfig ConfigMap::materialize() const {
    auto get = [this](const char* key) -> std::optional<std::string> {
        const auto it = values_.find(key);
        if (it == values_.end()) {
            return std::nullopt;
        }
        return it->second;
    };
    auto number = [&](const char* key, double fallback) {
        const auto v = get(key);
        return v ? parse_double(key, *v) : fallback;
    };
    auto required_number = [&](const char* key) {
        const auto v = get(key);
        require(v.has_value(), Status::InvalidArgument,
                std::string("missing required key '") + key + "'");
        return parse_double(key, *v);
    };

    ParsedConfig cfg;
    cfg.scenario.system.sigma_x = required_number("system.sigma_x");
    cfg.scenario.system.sigma_k = required_number("system.sigma_k");
    cfg.scenario.system.mean_x = number("system.mean_x", 0.0);
    cfg.scenario.system.mean_k = number("system.mean_k", 0.0);

    cfg.scenario.couplings.lambda_x = number("coupling.lambda_x", 1.0);
    cfg.scenario.couplings.lambda_k = number("coupling.lambda_k", 1.0);
    if (const auto ord = get("coupling.ordering")) {
        if (*ord == "xk") {
            cfg.scenario.couplings.ordering = Ordering::XthenK;
        } else if (*ord == "kx") {
            cfg.scenario.couplings.ordering = Ordering::KthenX;
        } else if (*ord == "joint") {
            cfg.scenario.couplings.ordering = Ordering::Joint;
        } else {
            fail(Status::InvalidArgument,
                 "coupling.ordering must be one of xk, kx, joint (got '" + *ord + "')");
        }
    }

    const bool has_prep = get("prep.delta_k") || get("prep.delta_tilde_x") || get("prep.r");
    if (has_prep) {
        for (const char* key : kPrepExclusive) {
            require(!get(key).has_value(), Status::InvalidArgument,
                    std::string("key '") + key + "' conflicts with the prep block");
        }
        cfg.prep = make_preparation(required_number("prep.delta_k"),
                                    required_number("prep.delta_tilde_x"),
                                    required_number("prep.r"));
        const ReducedProbeMoments reduced = reduced_probe_moments(*cfg.prep);
        cfg.scenario.probe_x.delta = std::sqrt(reduced.delta_x2);
        cfg.scenario.probe_x.delta_tilde = cfg.prep->delta_tilde_x;
        cfg.scenario.probe_k.delta = cfg.prep->delta_k;
        cfg.scenario.probe_k.delta_tilde = std::sqrt(reduced.delta_tilde_k2);
        cfg.scenario.cross.kappa = cfg.prep->kappa();
        cfg.scenario.cross.xi = reduced.xi;
    } else {
        cfg.scenario.probe_x.delta = required_number("probe_x.delta");
        cfg.scenario.probe_x.delta_tilde = required_number("probe_x.delta_tilde");
        cfg.scenario.probe_k.delta = required_number("probe_k.delta");
        cfg.scenario.probe_k.delta_tilde = required_number("probe_k.delta_tilde");
        cfg.scenario.cross.kappa = number("cross.kappa", 0.0);
        cfg.scenario.cross.xi = number("cross.xi", 0.0);
    }
    cfg.scenario.probe_x.mean_j = number("probe_x.mean_j", 0.0);
    cfg.scenario.probe_x.mean_phi = number("probe_x.mean_phi", 0.0);
    cfg.scenario.probe_x.resolution = number("probe_x.resolution", 0.0);
    cfg.scenario.probe_k.mean_j = number("probe_k.mean_j", 0.0);
    cfg.scenario.probe_k.mean_phi = number("probe_k.mean_phi", 0.0);
    cfg.scenario.probe_k.resolution = number("probe_k.resolution", 0.0);

    cfg.grid.n = static_cast<int>(number("grid.n", 0.0));
    require(cfg.grid.n == 0 || (cfg.grid.n >= 16 && (cfg.grid.n & (cfg.grid.n - 1)) == 0),
            Status::InvalidArgument, "grid.n must be 0 (auto) or a power of two >= 16");
    cfg.grid.extent_sigmas = number("grid.extent_sigmas", 8.0);
    require(cfg.grid.extent_sigmas >= 8.0, Status::InvalidArgument,
            "grid.extent_sigmas must be at least 8");

    cfg.run.tolerance = number("run.tolerance", 5e-3);
    require(cfg.run.tolerance > 0.0, Status::InvalidArgument, "run.tolerance must be positive");
    if (const auto v = get("run.samples")) {
        cfg.run.samples = parse_u64("run.samples", *v);
        require(cfg.run.samples >= 2 * 100, Status::InvalidArgument,
                "run.samples must allow at least two samples per jackknife block (>= 200)");
    }
    if (const auto v = get("run.seed")) {
        cfg.run.seed = parse_u64("run.seed", *v);
    }

    const ValidationResult validation = validate_scenario(cfg.scenario);
    if (!validation.ok()) {
        std::string msg = "scenario violates:";
        for (const auto& v : validation.violations) {
            msg += " " + v;
        }
        fail(Status::Validation, msg);
    }
    return cfg;
}

}  // namespace qnd
