/* SPDX-License-Identifier: Apache-2.0
 *
 * twrc: relay power minimization for lattice-coded two-way relaying with
 * power-splitting energy harvesting.
 * Copyright (C) 2026 The twrc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 */

/* C interface of the twrc shared library.
 *
 * Every function returns a twrc_status. On failure a message describing the
 * error is available from twrc_last_error() on the calling thread until the
 * next call into the library from that thread. Handles are opaque and owned
 * by the caller; destroy functions accept NULL. */

#ifndef TWRC_H
#define TWRC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define TWRC_API __declspec(dllexport)
#else
#  define TWRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum twrc_status
{
    TWRC_OK = 0,
    TWRC_INVALID_ARGUMENT = 1,
    TWRC_DOMAIN_ERROR = 2,
    TWRC_DEGENERATE_CHANNEL = 3,
    TWRC_INFEASIBLE = 4,
    TWRC_SOLVER_FAILURE = 5,
    TWRC_NESTING_VIOLATION = 6,
    TWRC_BRACKET_ERROR = 7,
    TWRC_IO_ERROR = 8,
    TWRC_USAGE = 9,
    TWRC_INTERNAL = 10
} twrc_status;

/* Receives one line of text without the trailing newline. */
typedef void (*twrc_line_fn)(const char *line, void *user);

/* Receives (finished, total) work units during a sweep. */
typedef void (*twrc_progress_fn)(size_t done, size_t total, void *user);

TWRC_API const char *twrc_version(void);
TWRC_API const char *twrc_status_name(twrc_status status);
TWRC_API const char *twrc_last_error(void);

/* ---- scenario configuration ------------------------------------------ */

typedef struct twrc_config twrc_config;

/* Documented defaults. */
TWRC_API twrc_status twrc_config_create(twrc_config **out);
/* "fig2" or "fig3". */
TWRC_API twrc_status twrc_config_preset(const char *name, twrc_config **out);
TWRC_API void twrc_config_destroy(twrc_config *cfg);

/* Applies the key=value lines of a file on top of the current values. */
TWRC_API twrc_status twrc_config_load(twrc_config *cfg, const char *path);
TWRC_API twrc_status twrc_config_set(twrc_config *cfg, const char *key, const char *value);
TWRC_API twrc_status twrc_config_validate(const twrc_config *cfg);
/* Emits the configuration as key=value lines. */
TWRC_API twrc_status twrc_config_render(const twrc_config *cfg, twrc_line_fn sink, void *user);

/* ---- single channel ---------------------------------------------------- */

/* Solves every configured scheme on channel `trial` at the configured
 * operating point and emits the designs as text. *failures receives the
 * number of schemes whose solve failed. */
TWRC_API twrc_status twrc_solve(const twrc_config *cfg, uint64_t trial, twrc_line_fn sink, void *user,
                                size_t *failures);

/* ---- Monte Carlo sweep ------------------------------------------------- */

typedef struct twrc_sweep twrc_sweep;

TWRC_API twrc_status twrc_sweep_run(const twrc_config *cfg, twrc_progress_fn progress, void *user,
                                    twrc_sweep **out);
TWRC_API void twrc_sweep_destroy(twrc_sweep *sweep);

TWRC_API size_t twrc_sweep_record_count(const twrc_sweep *sweep);
TWRC_API size_t twrc_sweep_failure_count(const twrc_sweep *sweep);
TWRC_API double twrc_sweep_failure_fraction(const twrc_sweep *sweep);

TWRC_API twrc_status twrc_sweep_write_records(const twrc_sweep *sweep, const char *path);
TWRC_API twrc_status twrc_sweep_write_summary(const twrc_sweep *sweep, const char *path);
/* Emits the summary CSV, header first. */
TWRC_API twrc_status twrc_sweep_summary_lines(const twrc_sweep *sweep, twrc_line_fn sink, void *user);

/* ---- N = 2 grid oracle ------------------------------------------------- */

/* Compares scheme 1 against the exhaustive grid on `count` channels with
 * antennas forced to 2. Emits one line per channel and a summary line.
 * *max_abs_diff_db receives the largest |alternation - oracle| in dB. */
TWRC_API twrc_status twrc_oracle_check(const twrc_config *cfg, size_t count, int resolution, twrc_line_fn sink,
                                       void *user, double *max_abs_diff_db);

/* ---- lattice round trip ------------------------------------------------ */

typedef struct twrc_lattice_demo_params
{
    size_t dimension;
    double fine;
    double mid;
    double coarse;
    int dithered;
    uint64_t seed;
    size_t max_pairs;
} twrc_lattice_demo_params;

TWRC_API void twrc_lattice_demo_defaults(twrc_lattice_demo_params *params);

/* *pairs and *matches may be NULL. */
TWRC_API twrc_status twrc_lattice_demo(const twrc_lattice_demo_params *params, twrc_line_fn sink, void *user,
                                       size_t *pairs, size_t *matches);

#ifdef __cplusplus
}
#endif

#endif /* TWRC_H */
