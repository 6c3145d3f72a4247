/*
 * Copyright 2026 The rrf Authors.
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

/*
 * C interface to the rrf library: regularized tree ensembles for feature
 * selection.
 *
 * Objects are opaque handles created by rrf_*_load / rrf_train and released
 * with the matching rrf_*_free. Every fallible call returns an rrf_status;
 * on failure rrf_last_error() describes the problem (the message is
 * thread-local and valid until the next failing call on the same thread).
 * Strings returned through char** out-parameters are owned by the caller
 * and must be released with rrf_string_free.
 *
 * Configurations are passed as JSON objects; unknown keys are rejected and
 * missing keys take the documented defaults.
 */
#ifndef RRF_RRF_H_
#define RRF_RRF_H_

#include <stddef.h>

#if defined(RRF_BUILDING_LIBRARY)
#define RRF_API __attribute__((visibility("default")))
#else
#define RRF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rrf_dataset rrf_dataset;
typedef struct rrf_model rrf_model;

typedef enum rrf_status {
  RRF_OK = 0,
  RRF_ERR_INVALID_ARGUMENT = 1, /* bad configuration value or null pointer */
  RRF_ERR_DATA = 2,             /* malformed or unusable input data */
  RRF_ERR_UNSUPPORTED = 3,      /* input outside the operation's domain */
  RRF_ERR_DOMAIN = 4,           /* undefined mathematical quantity */
  RRF_ERR_IO = 5,
  RRF_ERR_INTERNAL = 6          /* invariant violation */
} rrf_status;

RRF_API const char* rrf_version(void);
RRF_API const char* rrf_last_error(void);
RRF_API void rrf_string_free(char* s);

/* Hex SHA-256 of a file's bytes. */
RRF_API rrf_status rrf_file_sha256(const char* path, char** out_hex);
RRF_API rrf_status rrf_sha256(const void* data, size_t size, char** out_hex);

/* ---- datasets ---------------------------------------------------------- */

/* target: header name or 0-based column index (negative counts from the end).
 * missing_token: cell text marking a missing value; NULL means "?". */
RRF_API rrf_status rrf_dataset_load_csv(const char* path, const char* target, const char* missing_token,
                                        rrf_dataset** out);
/* Replaces missing cells in place: column median for numeric features, an
 * explicit extra level for categorical ones. */
RRF_API rrf_status rrf_dataset_impute(rrf_dataset* dataset);
RRF_API void rrf_dataset_free(rrf_dataset* dataset);
RRF_API size_t rrf_dataset_num_rows(const rrf_dataset* dataset);
RRF_API size_t rrf_dataset_num_features(const rrf_dataset* dataset);
RRF_API size_t rrf_dataset_num_classes(const rrf_dataset* dataset);
/* {"features":[{"name","kind","levels"?}], "target", "classes"} */
RRF_API rrf_status rrf_dataset_schema_json(const rrf_dataset* dataset, char** out_json);

/* ---- selection and models ---------------------------------------------- */

/* Runs a regularized ensemble and reports its feature set.
 * config keys: method ("rrf" | "rboost", default "rrf"), lambda (0.5),
 * n_trees (100), seed (1), n_candidates (0 = ceil(sqrt(M))),
 * min_node_size (2), max_depth (0 = unlimited).
 * Output: an "rrf-selection" JSON document. */
RRF_API rrf_status rrf_select(const rrf_dataset* dataset, const char* config_json, char** out_json);

/* Trains an ensemble. config keys: as rrf_select plus method "rf" (plain
 * random forest, default n_trees 200), features (array of feature names the
 * trees may use) and threads (rf only). */
RRF_API rrf_status rrf_train(const rrf_dataset* dataset, const char* config_json, rrf_model** out);
RRF_API rrf_status rrf_model_to_json(const rrf_model* model, char** out_json);
RRF_API rrf_status rrf_model_from_json(const char* json, rrf_model** out);
RRF_API void rrf_model_free(rrf_model* model);
RRF_API size_t rrf_model_num_features(const rrf_model* model);
RRF_API size_t rrf_model_num_classes(const rrf_model* model);

/* Predicts one row of feature values (categorical cells hold level indices,
 * NaN marks a missing cell). class_fractions receives n_classes vote shares
 * and may be NULL. */
RRF_API rrf_status rrf_model_predict_row(const rrf_model* model, const double* values, size_t n_values,
                                         int* predicted, double* class_fractions, size_t n_classes);

/* Predicts every row of a CSV whose header lists the model's features in
 * order (the model's target column may also be present and is ignored).
 * Output CSV: header "prediction,vote_<class>...", one line per row. */
RRF_API rrf_status rrf_model_predict_csv(const rrf_model* model, const char* path, const char* missing_token,
                                         char** out_csv);

/* ---- evaluation -------------------------------------------------------- */

/* Repeated stratified k-fold comparison of feature-selection conditions.
 * config keys: folds (2), repeats (10), seed (1), threads (1),
 * conditions (["all", "rrf", "rboost"] subset, default ["all","rrf"]),
 * lambda (0.5), selector_trees (100), classifier ("rf" | "tree"),
 * classifier_trees (200).
 * Output: an "rrf-comparison" JSON document and, if out_table is not NULL,
 * a plain-text table. Per-condition wall times sit under "timing". */
RRF_API rrf_status rrf_eval(const rrf_dataset* dataset, const char* config_json, char** out_json,
                            char** out_table);

/* Accuracy versus number of randomly added features on a half/half split.
 * config keys: seed (1), classifier ("rf" | "tree"), classifier_trees (200).
 * Output: an "rrf-curve" JSON document. */
RRF_API rrf_status rrf_accuracy_curve(const rrf_dataset* dataset, const char* config_json, char** out_json);

/* Reference selectors on categorical data. mode: "md", "mdtree" or "mb".
 * max_steps bounds md/mdtree (0 = number of features).
 * Output: an "rrf-oracle" JSON document. */
RRF_API rrf_status rrf_oracle(const rrf_dataset* dataset, const char* mode, size_t max_steps, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* RRF_RRF_H_ */
