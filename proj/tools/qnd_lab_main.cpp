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

// Command-line surface over the qnd-lab C API. Emits versioned CSV
// (`# qnd-lab,v1,<command>`); exit codes: 0 success, 1 invalid input or
// config, 2 numerical/tolerance failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qndlab/qndlab.h"

namespace {

int exit_code_for(qnd_status status) {
    switch (status) {
        case QND_OK:
            return 0;
        case QND_ERR_INVALID_ARGUMENT:
        case QND_ERR_VALIDATION:
        case QND_ERR_SINGULAR:
        case QND_ERR_IO:
            return 1;
        default:
            return 2;
    }
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_csv(const qnd_table* table, std::ostream& out) {
    out << "# qnd-lab,v1," << qnd_table_command(table) << "\n";
    for (int c = 0; c < qnd_table_cols(table); ++c) {
        out << (c > 0 ? "," : "") << qnd_table_column(table, c);
    }
    out << "\n";
    for (int r = 0; r < qnd_table_rows(table); ++r) {
        for (int c = 0; c < qnd_table_cols(table); ++c) {
            if (c > 0) {
                out << ",";
            }
            if (qnd_table_cell_is_number(table, r, c)) {
                out << format_number(qnd_table_number(table, r, c));
            } else {
                const char* text = qnd_table_text(table, r, c);
                out << (text ? text : "");
            }
        }
        out << "\n";
    }
}

int emit(const qnd_table* table, const std::string& out_path) {
    if (table == nullptr) {
        return 0;
    }
    if (out_path.empty()) {
        write_csv(table, std::cout);
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << out_path << "\n";
        return 1;
    }
    write_csv(table, out);
    return 0;
}

struct ScenarioArgs {
    std::string config_path;
    std::vector<std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "scenario config file")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_option("--set", overrides,
                        "override a config entry as section.key=value (repeatable)");
    }

    // Builds the scenario handle; returns nonzero exit code on failure.
    int build(qnd_scenario** out) const {
        qnd_status st = qnd_scenario_load(config_path.c_str(), out);
        if (st != QND_OK) {
            std::cerr << "error: " << qnd_last_error() << "\n";
            return exit_code_for(st);
        }
        for (const std::string& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                std::cerr << "error: --set expects section.key=value, got '" << kv << "'\n";
                qnd_scenario_destroy(*out);
                *out = nullptr;
                return 1;
            }
            st = qnd_scenario_set(*out, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
            if (st != QND_OK) {
                std::cerr << "error: " << qnd_last_error() << "\n";
                qnd_scenario_destroy(*out);
                *out = nullptr;
                return exit_code_for(st);
            }
        }
        return 0;
    }
};

using ScenarioCommand = qnd_status (*)(const qnd_scenario*, qnd_table**);

int run_scenario_command(const ScenarioArgs& args, const std::string& out_path,
                         ScenarioCommand command) {
    qnd_scenario* scenario = nullptr;
    if (const int code = args.build(&scenario); code != 0) {
        return code;
    }
    qnd_table* table = nullptr;
    const qnd_status st = command(scenario, &table);
    qnd_scenario_destroy(scenario);
    if (st != QND_OK && table == nullptr) {
        std::cerr << "error: " << qnd_last_error() << "\n";
        return exit_code_for(st);
    }
    const int emit_code = emit(table, out_path);
    if (st != QND_OK) {
        std::cerr << "error: " << qnd_last_error() << "\n";
    }
    qnd_table_destroy(table);
    return emit_code != 0 ? emit_code : exit_code_for(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qnd-lab: noise/disturbance analysis of sequential and joint "
                 "position-momentum measurements with correlated probes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("qnd-lab ") + qnd_version());

    std::string out_path;
    std::string format = "csv";
    app.add_option("--out", out_path, "write the report to a file instead of stdout");
    app.add_option("--format", format, "output format (csv)")->check(CLI::IsMember({"csv"}));

    ScenarioArgs predict_args;
    auto* predict = app.add_subcommand("predict", "analytic variances, noise/disturbance and "
                                                  "relation checks");
    predict_args.attach(predict);

    ScenarioArgs oracle_args;
    auto* oracle = app.add_subcommand("oracle", "compare the analytic formulas against the "
                                                "grid-wavefunction oracle");
    oracle_args.attach(oracle);
    double oracle_tolerance = -1.0;
    int oracle_grid_n = -1;
    double oracle_extent = -1.0;
    oracle->add_option("--tolerance", oracle_tolerance, "override run.tolerance");
    oracle->add_option("--grid-n", oracle_grid_n, "override grid.n");
    oracle->add_option("--extent-sigmas", oracle_extent, "override grid.extent_sigmas");

    ScenarioArgs sample_args;
    auto* sample = app.add_subcommand("sample", "Monte Carlo calibration and disturbance "
                                                "estimates");
    sample_args.attach(sample);
    long long sample_n = -1;
    long long sample_seed = -1;
    sample->add_option("--n", sample_n, "override run.samples");
    sample->add_option("--seed", sample_seed, "override run.seed");

    auto* scan = app.add_subcommand("scan", "scan the violation region over the spread ratio "
                                            "t and correlator r");
    double t_min = 0.5;
    double t_max = 2.0;
    int t_steps = 7;
    double r_min = -0.9;
    double r_max = 0.9;
    int r_steps = 37;
    scan->add_option("--t-min", t_min, "smallest spread ratio");
    scan->add_option("--t-max", t_max, "largest spread ratio");
    scan->add_option("--t-steps", t_steps, "number of ratio steps");
    scan->add_option("--r-min", r_min, "smallest correlator");
    scan->add_option("--r-max", r_max, "largest correlator");
    scan->add_option("--r-steps", r_steps, "number of correlator steps");

    auto* instruments = app.add_subcommand("check-instruments",
                                           "finite-dimensional instrument demonstration");
    int dim = 2;
    long long inst_seed = 20260809;
    instruments->add_option("--dim", dim, "dimension per factor (2-4)");
    instruments->add_option("--seed", inst_seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    if (predict->parsed()) {
        return run_scenario_command(predict_args, out_path, qnd_predict);
    }
    if (oracle->parsed()) {
        if (oracle_tolerance > 0.0) {
            oracle_args.overrides.push_back("run.tolerance=" + format_number(oracle_tolerance));
        }
        if (oracle_grid_n >= 0) {
            oracle_args.overrides.push_back("grid.n=" + std::to_string(oracle_grid_n));
        }
        if (oracle_extent > 0.0) {
            oracle_args.overrides.push_back("grid.extent_sigmas=" +
                                            format_number(oracle_extent));
        }
        return run_scenario_command(oracle_args, out_path, qnd_oracle_compare);
    }
    if (sample->parsed()) {
        if (sample_n >= 0) {
            sample_args.overrides.push_back("run.samples=" + std::to_string(sample_n));
        }
        if (sample_seed >= 0) {
            sample_args.overrides.push_back("run.seed=" + std::to_string(sample_seed));
        }
        return run_scenario_command(sample_args, out_path, qnd_sample_estimates);
    }
    if (scan->parsed()) {
        qnd_table* table = nullptr;
        const qnd_status st =
            qnd_violation_scan(t_min, t_max, t_steps, r_min, r_max, r_steps, &table);
        if (st != QND_OK) {
            std::cerr << "error: " << qnd_last_error() << "\n";
            return exit_code_for(st);
        }
        const int code = emit(table, out_path);
        qnd_table_destroy(table);
        return code;
    }
    if (instruments->parsed()) {
        qnd_table* table = nullptr;
        const qnd_status st =
            qnd_instruments_demo(dim, static_cast<unsigned long long>(inst_seed), &table);
        if (st != QND_OK) {
            std::cerr << "error: " << qnd_last_error() << "\n";
            return exit_code_for(st);
        }
        const int code = emit(table, out_path);
        qnd_table_destroy(table);
        return code;
    }
    return 1;
}
