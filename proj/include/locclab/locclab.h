// Copyright 2026 The locclab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOCCLAB_LOCCLAB_H
#define LOCCLAB_LOCCLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(LOCCLAB_BUILDING_LIBRARY)
#define LOCCLAB_API __attribute__((visibility("default")))
#else
#define LOCCLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum locclab_status {
    LOCCLAB_OK = 0,
    LOCCLAB_INVALID_ARGUMENT,
    LOCCLAB_MALFORMED_INPUT,
    LOCCLAB_INVALID_PROGRAM,
    LOCCLAB_LAYOUT_MISMATCH,
    LOCCLAB_INVALID_SUBSET,
    LOCCLAB_INCOMPLETE_INSTRUMENT,
    LOCCLAB_DIMENSION_LIMIT,
    LOCCLAB_BRANCH_EXPLOSION,
    LOCCLAB_COPY_BUDGET_EXCEEDED,
    LOCCLAB_NOT_ENTANGLED,
    LOCCLAB_NOT_IRREDUCIBLE,
    LOCCLAB_NOT_FACTORIZABLE,
    LOCCLAB_NOT_A_CAT_STATE,
    LOCCLAB_NO_EPR_AVAILABLE,
    LOCCLAB_UNSUPPORTED_DIMENSION,
    LOCCLAB_BASIS_SEARCH_EXHAUSTED,
    LOCCLAB_INTERNAL_ERROR
} locclab_status;

/* Check name, e.g. "NotEntangled". */
LOCCLAB_API const char* locclab_status_name(locclab_status status);
/* Process exit code for a status: 0 ok, 2 malformed input, 3 failed precondition, 4 resource guard. */
LOCCLAB_API int locclab_status_exit_code(locclab_status status);
/* Message of the last failure on this thread; empty after success. */
LOCCLAB_API const char* locclab_last_error(void);

typedef struct locclab_state locclab_state;

LOCCLAB_API locclab_status locclab_state_load(const char* path, locclab_state** out);
LOCCLAB_API locclab_status locclab_state_from_json(const char* json, locclab_state** out);
/* kind: ghz, w, epr, random-irreducible, random-factorizable. dims may be NULL. */
LOCCLAB_API locclab_status locclab_state_generate(const char* kind, size_t parties, const size_t* dims, size_t num_dims,
                                                  uint64_t seed, locclab_state** out);
LOCCLAB_API locclab_status locclab_state_to_json(const locclab_state* state, char** json);
LOCCLAB_API locclab_status locclab_state_save(const locclab_state* state, const char* path);
LOCCLAB_API void locclab_state_free(locclab_state* state);

LOCCLAB_API size_t locclab_state_num_parties(const locclab_state* state);
LOCCLAB_API size_t locclab_state_dim(const locclab_state* state);
/* Entropy (bits) across the cut separating the listed parties from the rest. */
LOCCLAB_API locclab_status locclab_entropy_across_cut(const locclab_state* state, const size_t* parties, size_t count,
                                                      double* entropy);
LOCCLAB_API locclab_status locclab_is_irreducible(const locclab_state* state, int* irreducible);
LOCCLAB_API locclab_status locclab_fidelity(const locclab_state* a, const locclab_state* b, double* fidelity);

typedef struct locclab_run_config {
    /* gamble, some-epr, pair-epr, cat2epr, epr2cat, synthesize, loccq-rewrite, audit, sample, generate */
    const char* command;
    const char* state_path;
    const char* protocol_path;
    uint64_t seed;
    size_t trials;
    /* NULL or empty: report only returned */
    const char* output_path;
    /* "json" (default) or "csv" */
    const char* format;
    /* "P1,P2" or NULL */
    const char* pair;
    /* 0 means the command's default */
    size_t copies;
    const char* site;
    const char* kind;
    size_t parties;
    const size_t* dims;
    size_t num_dims;
} locclab_run_config;

/* Zero-initialized config with trials = 100000 and format "json". */
LOCCLAB_API locclab_run_config locclab_run_config_default(void);
/* On success *report holds the rendered report; release it with locclab_string_free. */
LOCCLAB_API locclab_status locclab_run(const locclab_run_config* config, char** report);
LOCCLAB_API void locclab_string_free(char* s);

LOCCLAB_API const char* locclab_version(void);

#ifdef __cplusplus
}
#endif

#endif
