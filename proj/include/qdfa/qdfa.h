/* Copyright 2026 The qdfa authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qdfa shared library: opaque handles, status codes,
 * JSON strings in and out. Status values double as the CLI exit codes. */

#ifndef QDFA_QDFA_H
#define QDFA_QDFA_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qdfa_status {
  QDFA_OK = 0,
  QDFA_ERR_INVALID_INPUT = 1, /* parse/shape errors, non-UCP without permissive */
  QDFA_CHECK_FAILED = 2,      /* a requested predicate was falsified */
  QDFA_ERR_NUMERIC = 3        /* eigensolver/Sylvester/consistency failure */
} qdfa_status;

typedef struct qdfa_channel qdfa_channel;
typedef struct qdfa_report qdfa_report;

typedef struct qdfa_options {
  double tol_ortho;      /* <= 0 selects the default */
  double tol_psd;
  double tol_residual;
  double tol_peripheral;
  uint64_t seed;
  int trials;            /* falsification trials; <= 0 selects 500 */
  int emit_bases;        /* dump subspace bases into the report JSON */
  int permissive;        /* accept validated non-UCP (tagged) channels */
} qdfa_options;

void qdfa_options_init(qdfa_options* opts);

const char* qdfa_version(void);

/* Thread-local message for the most recent failure in this thread. */
const char* qdfa_last_error(void);

/* Channel ingestion (channel JSON format; see docs/report_schema.md). */
qdfa_status qdfa_channel_from_json(const char* json_text, const qdfa_options* opts,
                                   qdfa_channel** out);
qdfa_status qdfa_channel_from_json_file(const char* path, const qdfa_options* opts,
                                        qdfa_channel** out);
void qdfa_channel_free(qdfa_channel* ch);

int qdfa_channel_dim(const qdfa_channel* ch);
int qdfa_channel_is_ucp(const qdfa_channel* ch);
const char* qdfa_channel_label(const qdfa_channel* ch);

/* Full analysis pipeline; fills a report even when consistency checks fail
 * is not possible — failures return QDFA_ERR_NUMERIC with no report. */
qdfa_status qdfa_analyze(const qdfa_channel* ch, const qdfa_options* opts, qdfa_report** out);

/* Evaluate one predicate: "ucp", "faithful", "peripherally-automorphic",
 * or "schwarz-falsify". Returns QDFA_OK when the predicate holds (for
 * schwarz-falsify: when a counterexample was found), QDFA_CHECK_FAILED
 * otherwise. The report carries the witness. */
qdfa_status qdfa_check(const qdfa_channel* ch, const char* predicate, const qdfa_options* opts,
                       qdfa_report** out);

/* Invariant battery over built-ins plus a seeded random corpus.
 * dims may be NULL (defaults to {2,3,4}); random_per_dim <= 0 selects 70.
 * Returns QDFA_CHECK_FAILED if any invariant fails. */
qdfa_status qdfa_run_suite(const qdfa_options* opts, const int* dims, int n_dims,
                           int random_per_dim, qdfa_report** out);

const char* qdfa_report_json(const qdfa_report* rep);
const char* qdfa_report_summary(const qdfa_report* rep);
void qdfa_report_free(qdfa_report* rep);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QDFA_QDFA_H */
