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
#include <map>
#include <optional>
#include <string>

#include "gaussian_prep.hpp"
#include "moments.hpp"

// Flat key=value configuration (one `section.key = value` per line, `#`
// comments). All physical inputs are in hbar = 1 canonical units, with
// momentum as the wave number K = P/hbar. Recognized keys:
//
//   system.sigma_x  system.sigma_k  system.mean_x  system.mean_k
//   probe_x.delta  probe_x.delta_tilde  probe_x.mean_j  probe_x.mean_phi
//   probe_x.resolution               (probe_k.* likewise)
//   cross.kappa  cross.xi
//   prep.delta_k  prep.delta_tilde_x  prep.r
//       (mutually exclusive with the probe spread / cross keys)
//   coupling.lambda_x  coupling.lambda_k  coupling.ordering in {xk, kx, joint}
//   grid.n (0 = auto)  grid.extent_sigmas
//   run.tolerance  run.samples  run.seed

namespace qnd {

struct GridSettings {
    int n = 0;  // 0 selects the automatic grid plan
    double extent_sigmas = 8.0;
};

struct RunSettings {
    double tolerance = 5e-3;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 12345;
};

struct ParsedConfig {
    Scenario scenario;  // physical (non-canonical) moments
    std::optional<ProbePairPreparation> prep;
    GridSettings grid;
    RunSettings run;
};

/// Raw key/value store; rejects unknown keys and syntax errors eagerly so
/// error messages can carry line numbers.
class ConfigMap {
  public:
    static ConfigMap from_file(const std::string& path);
    static ConfigMap from_text(const std::string& text);

    /// Validates the key name and stores/overrides the value.
    void set(const std::string& key, const std::string& value);

    /// Builds the scenario (probe moments derived from the preparation block
    /// when present) and validates it; failures name the violated invariant.
    ParsedConfig materialize() const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace qnd
