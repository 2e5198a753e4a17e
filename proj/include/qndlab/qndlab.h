/* Copyright 2026 The qnd-lab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C API of the qnd-lab measurement simulator.
 *
 * A scenario handle holds a flat key=value configuration (the same keys the
 * config files use; see the project README). Run functions materialize and
 * validate the configuration, execute, and hand results back as an opaque
 * table of named columns whose cells are numbers or short status tags.
 *
 * All functions returning qnd_status leave an explanatory message in
 * qnd_last_error() on failure. Handles are not thread-safe; distinct
 * handles may be used from distinct threads.
 */

#ifndef QNDLAB_QNDLAB_H_
#define QNDLAB_QNDLAB_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qnd_status {
    QND_OK = 0,
    QND_ERR_INVALID_ARGUMENT = 1,
    QND_ERR_VALIDATION = 2,
    QND_ERR_SINGULAR = 3,
    QND_ERR_GRID = 4,
    QND_ERR_TOLERANCE = 5,
    QND_ERR_CALIBRATION = 6,
    QND_ERR_IO = 7,
    QND_ERR_INTERNAL = 8
} qnd_status;

typedef struct qnd_scenario qnd_scenario;
typedef struct qnd_table qnd_table;

const char* qnd_version(void);
const char* qnd_status_name(qnd_status status);

/* Message of the most recent failure on the calling thread. */
const char* qnd_last_error(void);

/* Scenario construction. */
qnd_status qnd_scenario_create(qnd_scenario** out);
qnd_status qnd_scenario_load(const char* path, qnd_scenario** out);
qnd_status qnd_scenario_load_string(const char* text, qnd_scenario** out);
qnd_status qnd_scenario_set(qnd_scenario* scenario, const char* key, const char* value);
void qnd_scenario_destroy(qnd_scenario* scenario);

/* Commands. Tables must be released with qnd_table_destroy. A non-OK status
 * may still produce a table (oracle runs report the offending deviations). */
qnd_status qnd_predict(const qnd_scenario* scenario, qnd_table** out);
qnd_status qnd_oracle_compare(const qnd_scenario* scenario, qnd_table** out);
qnd_status qnd_sample_estimates(const qnd_scenario* scenario, qnd_table** out);
qnd_status qnd_violation_scan(double t_min, double t_max, int t_steps, double r_min,
                              double r_max, int r_steps, qnd_table** out);
qnd_status qnd_instruments_demo(int dim, unsigned long long seed, qnd_table** out);

/* Table access. */
int qnd_table_rows(const qnd_table* table);
int qnd_table_cols(const qnd_table* table);
const char* qnd_table_command(const qnd_table* table);
const char* qnd_table_column(const qnd_table* table, int col);
int qnd_table_cell_is_number(const qnd_table* table, int row, int col);
double qnd_table_number(const qnd_table* table, int row, int col);
/* Returns NULL for numeric cells. */
const char* qnd_table_text(const qnd_table* table, int row, int col);
void qnd_table_destroy(qnd_table* table);

#ifdef __cplusplus
}
#endif

#endif /* QNDLAB_QNDLAB_H_ */
