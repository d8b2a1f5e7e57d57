// Copyright 2026 The enerprof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENERPROF_ENERPROF_H_
#define ENERPROF_ENERPROF_H_

#include <stddef.h>
#include <stdint.h>

#if defined(ENERPROF_BUILDING_LIBRARY)
#define EP_API __attribute__((visibility("default")))
#else
#define EP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; details are in ep_last_error(). */
typedef enum ep_status {
  EP_OK = 0,
  EP_INVALID_ARGUMENT = 1,
  EP_IO = 2,
  EP_PARSE = 3,
  EP_VERSION = 4,
  EP_DUPLICATE = 5,
  EP_NOT_FOUND = 6,
  EP_INSUFFICIENT_DATA = 7,
  EP_OUT_OF_MEMORY = 8,
  EP_WORKLOAD_FAILURE = 9,
  EP_SAMPLER = 10,
  EP_LOCKED = 11,
  EP_FIT_DIVERGENCE = 12,
  EP_MISMATCH = 13,
  EP_STATE = 14,
  EP_INTERNAL = 99
} ep_status;

typedef enum ep_format {
  EP_FORMAT_TEXT = 0,
  EP_FORMAT_CSV = 1,
  EP_FORMAT_JSON_LINES = 2
} ep_format;

EP_API const char* ep_version(void);
EP_API const char* ep_status_name(ep_status status);
/* Message of the last failure on the calling thread; never NULL. */
EP_API const char* ep_last_error(void);
/* Frees strings returned through char** out parameters. */
EP_API void ep_string_free(char* s);

/* ------------------------------------------------------------ tables */

typedef struct ep_table ep_table;
typedef struct ep_report ep_report;

EP_API const char* ep_table_name(const ep_table* table);
EP_API size_t ep_table_columns(const ep_table* table);
EP_API size_t ep_table_rows(const ep_table* table);
EP_API const char* ep_table_column(const ep_table* table, size_t column);
/* Lossless text of one cell; "" for missing values or out-of-range indices. */
EP_API const char* ep_table_cell(const ep_table* table, size_t row, size_t column);
EP_API ep_status ep_table_render(const ep_table* table, ep_format format, char** out);
EP_API void ep_table_free(ep_table* table);

EP_API size_t ep_report_tables(const ep_report* report);
/* Owned by the report. */
EP_API const ep_table* ep_report_table(const ep_report* report, size_t index);
EP_API const char* ep_report_series(const ep_report* report);
/* Writes <dir>/<table>.csv for every table and <dir>/series.json. */
EP_API ep_status ep_report_write(const ep_report* report, const char* dir);
EP_API void ep_report_free(ep_report* report);

/* ------------------------------------------------------- calculations */

typedef struct ep_sample {
  int64_t t_ns;
  double power_w;
  /* -1 when absent. */
  int32_t util_pct;
  int32_t mem_used_mib;
  int32_t temp_c;
} ep_sample;

EP_API ep_status ep_integrate_energy(const ep_sample* samples, size_t count, int64_t t0_ns,
                                     int64_t t1_ns, double* joules);
EP_API ep_status ep_pearson(const double* xs, const double* ys, size_t count, double* out);
EP_API ep_status ep_spearman(const double* xs, const double* ys, size_t count, double* out);
EP_API ep_status ep_geometric_stats(const double* values, size_t count, double* mean,
                                    double* std_factor);
EP_API ep_status ep_naive_estimate(double flops, double peak_flops, double tdp_w,
                                   double* joules);
EP_API ep_status ep_tdp_headroom(double avg_power_w, double tdp_w, double* ratio,
                                 int* anomalous);

typedef struct ep_score_params {
  double weight;
  double norm_j;
  double min_accuracy;
} ep_score_params;

EP_API void ep_score_params_init(ep_score_params* params);
/* *kept is 0 when the model falls below min_accuracy; *score is then NaN. */
EP_API ep_status ep_ratio_score(double accuracy, double energy_j, const ep_score_params* params,
                                double* score, int* kept);
EP_API ep_status ep_manhattan_score(double accuracy, double energy_j,
                                    const ep_score_params* params, int balanced, double* score);

typedef struct ep_frontier {
  double c1;
  double c2;
  double c3;
  double residual_norm;
  double energy_min;
  double energy_max;
  size_t points;
} ep_frontier;

EP_API ep_status ep_fit_frontier(const double* energies, const double* accuracies, size_t count,
                                 ep_frontier* fit);
EP_API ep_status ep_frontier_accuracy(const ep_frontier* fit, double energy_j, double* accuracy);
EP_API ep_status ep_extrapolate_energy(const ep_frontier* fit, double target_accuracy,
                                       double* energy_j);

/* ---------------------------------------------------------- telemetry */

typedef struct ep_samples ep_samples;

EP_API ep_status ep_parse_sensor_log(const char* text, ep_samples** out, size_t* malformed);
EP_API size_t ep_samples_count(const ep_samples* samples);
EP_API ep_status ep_samples_get(const ep_samples* samples, size_t index, ep_sample* out);
EP_API ep_status ep_samples_serialize(const ep_samples* samples, char** out);
EP_API void ep_samples_free(ep_samples* samples);

typedef enum ep_sampler_source {
  EP_SAMPLER_LIVE = 0,
  EP_SAMPLER_REPLAY = 1,
  EP_SAMPLER_SYNTHETIC = 2
} ep_sampler_source;

typedef struct ep_sampler_config {
  double rate_hz;
  ep_sampler_source source;
  /* Command, replay file or profile; NULL selects the default command. */
  const char* spec;
} ep_sampler_config;

typedef struct ep_sampler ep_sampler;

EP_API void ep_sampler_config_init(ep_sampler_config* config);
EP_API ep_status ep_sampler_start(const ep_sampler_config* config, ep_sampler** out);
/* Ends sampling; the sampler must still be freed. */
EP_API ep_status ep_sampler_stop(ep_sampler* sampler, ep_samples** out, size_t* gaps);
EP_API void ep_sampler_free(ep_sampler* sampler);

/* ------------------------------------------------------ store, dataset */

typedef struct ep_store ep_store;
typedef struct ep_dataset ep_dataset;

EP_API ep_status ep_store_open(const char* path, int create, ep_store** out);
EP_API size_t ep_store_run_count(const ep_store* store);
EP_API const char* ep_store_run_id(const ep_store* store, size_t index);
EP_API void ep_store_free(ep_store* store);

/* Re-derives metrics from the stored samples; NULL run_id replays every run.
   EP_MISMATCH when any run differs from its stored metrics. */
EP_API ep_status ep_store_replay(const char* store_path, const char* run_id, ep_table** out);

EP_API ep_status ep_dataset_load(const char* store_path, const char* metadata_path,
                                 ep_dataset** out);
EP_API ep_status ep_dataset_load_bundle(const char* bundle_path, ep_dataset** out);
EP_API size_t ep_dataset_models(const ep_dataset* dataset);
EP_API size_t ep_dataset_setups(const ep_dataset* dataset);
EP_API size_t ep_dataset_metric_entries(const ep_dataset* dataset);
EP_API void ep_dataset_free(ep_dataset* dataset);

/* ---------------------------------------------------------- commands */

typedef struct ep_measure_options {
  const char* model_id;
  const char* workload; /* shell command or "sim:..." */
  const char* gpu_label;
  const char* runtime_label;
  double tdp_w;
  double peak_flops; /* 0 when unknown */
  int64_t start_batch;
  int64_t max_batch; /* 0 for no limit */
  int64_t min_reps;
  double min_runtime_s;
  int64_t warmup_min_reps;
  double warmup_min_runtime_s;
  ep_sampler_config sampler;
  const char* out;
  double idle_baseline_w; /* negative when not recorded */
  const char* state_dir;  /* NULL for the default */
} ep_measure_options;

EP_API void ep_measure_options_init(ep_measure_options* options);
EP_API ep_status ep_measure(const ep_measure_options* options, ep_table** out);

typedef struct ep_analyze_options {
  int pareto;
  int fit;
  int naive_vs_measured;
  int yearly;
  int correlations;
  int input_size;
  const char* paired_baseline; /* setup ids; both or neither */
  const char* paired_optimized;
  const char* setups;   /* comma-separated; NULL for all */
  const char* datasets; /* comma-separated; NULL for the default */
  double fit_target;
  const char* points_path; /* energy/accuracy CSV analysed as group "points" */
} ep_analyze_options;

EP_API void ep_analyze_options_init(ep_analyze_options* options);
/* dataset may be NULL when only points_path is analysed. */
EP_API ep_status ep_analyze(const ep_dataset* dataset, const ep_analyze_options* options,
                            ep_report** out);

typedef struct ep_score_options {
  const char* metric; /* "ratio" or "manhattan" */
  int balanced;
  double weight;
  double min_accuracy;
  double fixed_norm_j; /* 0 selects the largest energy after filtering */
  const char* setups;
  const char* datasets;
  size_t top_n;
  size_t grid;
} ep_score_options;

EP_API void ep_score_options_init(ep_score_options* options);
EP_API ep_status ep_score(const ep_dataset* dataset, const ep_score_options* options,
                          ep_report** out);

typedef struct ep_export_options {
  const char* setups;
  const char* models;
  const char* datasets;
  const char* out_path; /* also written here when set */
} ep_export_options;

EP_API void ep_export_options_init(ep_export_options* options);
/* bundle may be NULL when only out_path is wanted. */
EP_API ep_status ep_export(const ep_dataset* dataset, const ep_export_options* options,
                           char** bundle);

/* Any path may be NULL. *errors counts rows of severity "error". */
EP_API ep_status ep_validate(const char* store_path, const char* metadata_path,
                             const char* bundle_path, ep_table** out, size_t* errors);

#ifdef __cplusplus
}
#endif

#endif /* ENERPROF_ENERPROF_H_ */
