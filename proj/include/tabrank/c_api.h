/*
 * Copyright 2026 The tabrank Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TABRANK_C_API_H_
#define TABRANK_C_API_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TABRANK_BUILDING_LIBRARY)
#    define TABRANK_API __declspec(dllexport)
#  else
#    define TABRANK_API __declspec(dllimport)
#  endif
#else
#  define TABRANK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values match tabrank::ErrorCode. */
typedef enum tabrank_status {
  TABRANK_OK = 0,
  TABRANK_E_INVALID_ARGUMENT = 1,
  TABRANK_E_IO = 2,
  TABRANK_E_CONFIG = 3,
  TABRANK_E_MISSING_COLUMN = 4,
  TABRANK_E_DUPLICATE_HEADER = 5,
  TABRANK_E_UNPARSABLE_CELL = 6,
  TABRANK_E_UNKNOWN_COLUMN = 7,
  TABRANK_E_TARGET_NOT_BINARY = 8,
  TABRANK_E_EMPTY_TABLE = 9,
  TABRANK_E_EMPTY_COUNTS = 10,
  TABRANK_E_NUMERIC_ATTRIBUTE = 11,
  TABRANK_E_MISSING_CELLS = 12,
  TABRANK_E_TOO_FEW_INSTANCES = 13,
  TABRANK_E_LENGTH_MISMATCH = 14,
  TABRANK_E_SINGLE_CLASS_LABELS = 15,
  TABRANK_E_SINGLE_CLASS_TRAINING = 16,
  TABRANK_E_SCHEMA_MISMATCH = 17,
  TABRANK_E_UNKNOWN_CLASS = 18,
  TABRANK_E_INVALID_SPEC = 19,
  TABRANK_E_INVALID_MODEL = 20,
  TABRANK_E_INTERNAL = 21
} tabrank_status;

typedef struct tabrank_table tabrank_table;
typedef struct tabrank_model tabrank_model;

TABRANK_API const char* tabrank_version(void);

/* Message of the most recent failure on the calling thread ("" if none). */
TABRANK_API const char* tabrank_last_error(void);
TABRANK_API const char* tabrank_status_name(tabrank_status status);

/* Process exit code for a status: 0 ok, 2 config, 3 data, 4 model, 1 internal. */
TABRANK_API int tabrank_exit_code(tabrank_status status);

/* Releases strings returned through char** out-parameters. */
TABRANK_API void tabrank_string_free(char* text);

/* ---- tables ------------------------------------------------------------ */

/* options_json may be NULL or {"missing_tokens": [...], "require_target": bool}. */
TABRANK_API tabrank_status tabrank_table_load(const char* csv_path, const char* schema_path,
                                              const char* options_json, tabrank_table** out);
TABRANK_API void tabrank_table_free(tabrank_table* table);
TABRANK_API size_t tabrank_table_rows(const tabrank_table* table);
TABRANK_API size_t tabrank_table_cols(const tabrank_table* table);
TABRANK_API size_t tabrank_table_missing_cells(const tabrank_table* table);

/* Drops feature columns missing more than max_missing_rate, then applies the
 * row policy ("drop_rows" or "impute"). log_json (optional) receives
 * {"dropped_columns": [{"name", "missing_rate"}], "rows_before", "rows_after"}. */
TABRANK_API tabrank_status tabrank_table_preprocess(const tabrank_table* table, double max_missing_rate,
                                                    const char* policy, tabrank_table** out, char** log_json);

/* ---- ranking and evaluation -------------------------------------------- */

/* Cross-validated information-gain ranking. provenance_json is NULL or a flat
 * object copied into the artifacts. Either output pointer may be NULL. */
TABRANK_API tabrank_status tabrank_rank(const tabrank_table* table, size_t k, uint64_t seed, size_t bins,
                                        const char* provenance_json, char** json_out, char** markdown_out);

/* request_json: {"k", "seed", "positive", "threshold", "repeats",
 *                "models": [{"algorithm", "hyperparameters": {...}}],
 *                "provenance": {...}} */
TABRANK_API tabrank_status tabrank_evaluate(const tabrank_table* table, const char* request_json,
                                            char** json_out, char** markdown_out);

/* ---- synthetic data ---------------------------------------------------- */

/* spec_json: {"rows", "positive_rate", "seed", "strengths": [...] | "preset": "survey",
 *             "missing": {"name": rate}} */
TABRANK_API tabrank_status tabrank_synth(const char* spec_json, const char* csv_path, const char* schema_path);

/* ---- models ------------------------------------------------------------ */

/* spec_json: {"algorithm", "hyperparameters": {...}, "seed"}. When normalize is
 * nonzero a min-max map is fitted on the table and stored in the model. */
TABRANK_API tabrank_status tabrank_model_train(const tabrank_table* table, const char* spec_json,
                                               const char* positive, int normalize, tabrank_model** out);
TABRANK_API tabrank_status tabrank_model_to_json(const tabrank_model* model, char** json_out);
TABRANK_API tabrank_status tabrank_model_from_json(const char* json, tabrank_model** out);
TABRANK_API void tabrank_model_free(tabrank_model* model);
TABRANK_API const char* tabrank_model_positive_class(const tabrank_model* model);
TABRANK_API const char* tabrank_model_negative_class(const tabrank_model* model);

/* Writes one positive-class score per table row. Fails with
 * TABRANK_E_INVALID_ARGUMENT when capacity < rows. */
TABRANK_API tabrank_status tabrank_model_score(const tabrank_model* model, const tabrank_table* table,
                                               double* scores, size_t capacity, size_t* n_written);

#ifdef __cplusplus
}
#endif

#endif  /* TABRANK_C_API_H_ */
