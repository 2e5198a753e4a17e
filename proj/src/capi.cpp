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

#include "qndlab/qndlab.h"

#include <new>
#include <string>
#include <utility>

#include "config.hpp"
#include "runners.hpp"
#include "table.hpp"

struct qnd_scenario {
    qnd::ConfigMap map;
};

struct qnd_table {
    qnd::Table table;
};

namespace {

thread_local std::string g_last_error;

qnd_status to_c_status(qnd::Status s) {
    switch (s) {
        case qnd::Status::Ok:
            return QND_OK;
        case qnd::Status::InvalidArgument:
            return QND_ERR_INVALID_ARGUMENT;
        case qnd::Status::Validation:
            return QND_ERR_VALIDATION;
        case qnd::Status::SingularPreparation:
            return QND_ERR_SINGULAR;
        case qnd::Status::GridResolution:
            return QND_ERR_GRID;
        case qnd::Status::Tolerance:
            return QND_ERR_TOLERANCE;
        case qnd::Status::Calibration:
            return QND_ERR_CALIBRATION;
        case qnd::Status::Io:
            return QND_ERR_IO;
        case qnd::Status::Internal:
            return QND_ERR_INTERNAL;
    }
    return QND_ERR_INTERNAL;
}

template <typename Fn>
qnd_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return QND_OK;
    } catch (const qnd::Error& e) {
        g_last_error = e.what();
        return to_c_status(e.status());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QND_ERR_INTERNAL;
    }
}

qnd_status table_result(qnd::RunResult result, qnd_table** out) {
    *out = new qnd_table{std::move(result.table)};
    if (result.status != qnd::Status::Ok) {
        g_last_error = std::string("run finished with status ") +
                       qnd_status_name(to_c_status(result.status));
        return to_c_status(result.status);
    }
    g_last_error.clear();
    return QND_OK;
}

}  // namespace

extern "C" {

const char* qnd_version(void) {
    return "0.1.0";
}

const char* qnd_status_name(qnd_status status) {
    switch (status) {
        case QND_OK:
            return "ok";
        case QND_ERR_INVALID_ARGUMENT:
            return "invalid_argument";
        case QND_ERR_VALIDATION:
            return "validation";
        case QND_ERR_SINGULAR:
            return "singular_preparation";
        case QND_ERR_GRID:
            return "grid_resolution";
        case QND_ERR_TOLERANCE:
            return "tolerance";
        case QND_ERR_CALIBRATION:
            return "calibration";
        case QND_ERR_IO:
            return "io";
        case QND_ERR_INTERNAL:
            return "internal";
    }
    return "unknown";
}

const char* qnd_last_error(void) {
    return g_last_error.c_str();
}

qnd_status qnd_scenario_create(qnd_scenario** out) {
    if (out == nullptr) {
        g_last_error = "null output pointer";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = new (std::nothrow) qnd_scenario{};
    if (*out == nullptr) {
        g_last_error = "allocation failed";
        return QND_ERR_INTERNAL;
    }
    g_last_error.clear();
    return QND_OK;
}

qnd_status qnd_scenario_load(const char* path, qnd_scenario** out) {
    if (path == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] { *out = new qnd_scenario{qnd::ConfigMap::from_file(path)}; });
}

qnd_status qnd_scenario_load_string(const char* text, qnd_scenario** out) {
    if (text == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] { *out = new qnd_scenario{qnd::ConfigMap::from_text(text)}; });
}

qnd_status qnd_scenario_set(qnd_scenario* scenario, const char* key, const char* value) {
    if (scenario == nullptr || key == nullptr || value == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] { scenario->map.set(key, value); });
}

void qnd_scenario_destroy(qnd_scenario* scenario) {
    delete scenario;
}

qnd_status qnd_predict(const qnd_scenario* scenario, qnd_table** out) {
    if (scenario == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        *out = new qnd_table{qnd::run_predict(scenario->map.materialize())};
    });
}

qnd_status qnd_oracle_compare(const qnd_scenario* scenario, qnd_table** out) {
    if (scenario == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    qnd::RunResult result;
    const qnd_status st = guarded([&] { result = qnd::run_oracle(scenario->map.materialize()); });
    if (st != QND_OK) {
        return st;
    }
    return table_result(std::move(result), out);
}

qnd_status qnd_sample_estimates(const qnd_scenario* scenario, qnd_table** out) {
    if (scenario == nullptr || out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    qnd::RunResult result;
    const qnd_status st = guarded([&] { result = qnd::run_sample(scenario->map.materialize()); });
    if (st != QND_OK) {
        return st;
    }
    return table_result(std::move(result), out);
}

qnd_status qnd_violation_scan(double t_min, double t_max, int t_steps, double r_min,
                              double r_max, int r_steps, qnd_table** out) {
    if (out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        *out = new qnd_table{qnd::run_scan(t_min, t_max, t_steps, r_min, r_max, r_steps)};
    });
}

qnd_status qnd_instruments_demo(int dim, unsigned long long seed, qnd_table** out) {
    if (out == nullptr) {
        g_last_error = "null argument";
        return QND_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] { *out = new qnd_table{qnd::run_instruments_demo(dim, seed)}; });
}

int qnd_table_rows(const qnd_table* table) {
    return table == nullptr ? 0 : static_cast<int>(table->table.rows.size());
}

int qnd_table_cols(const qnd_table* table) {
    return table == nullptr ? 0 : static_cast<int>(table->table.columns.size());
}

const char* qnd_table_command(const qnd_table* table) {
    return table == nullptr ? "" : table->table.command.c_str();
}

const char* qnd_table_column(const qnd_table* table, int col) {
    if (table == nullptr || col < 0 || col >= qnd_table_cols(table)) {
        return nullptr;
    }
    return table->table.columns[col].c_str();
}

namespace {

const qnd::Table::Cell* cell_at(const qnd_table* table, int row, int col) {
    if (table == nullptr || row < 0 || row >= qnd_table_rows(table) || col < 0 ||
        col >= static_cast<int>(table->table.rows[row].size())) {
        return nullptr;
    }
    return &table->table.rows[row][col];
}

}  // namespace

int qnd_table_cell_is_number(const qnd_table* table, int row, int col) {
    const auto* cell = cell_at(table, row, col);
    return cell != nullptr && std::holds_alternative<double>(*cell) ? 1 : 0;
}

double qnd_table_number(const qnd_table* table, int row, int col) {
    const auto* cell = cell_at(table, row, col);
    if (cell == nullptr || !std::holds_alternative<double>(*cell)) {
        return 0.0;
    }
    return std::get<double>(*cell);
}

const char* qnd_table_text(const qnd_table* table, int row, int col) {
    const auto* cell = cell_at(table, row, col);
    if (cell == nullptr || !std::holds_alternative<std::string>(*cell)) {
        return nullptr;
    }
    return std::get<std::string>(*cell).c_str();
}

void qnd_table_destroy(qnd_table* table) {
    delete table;
}

}  // extern "C"
