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

#include "enerprof/enerprof.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "enerprof/analysis.hpp"
#include "enerprof/commands.hpp"
#include "enerprof/datastore.hpp"
#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"
#include "enerprof/frontier.hpp"
#include "enerprof/scoring.hpp"
#include "enerprof/stats.hpp"
#include "enerprof/table.hpp"
#include "enerprof/telemetry.hpp"

struct ep_table {
  enerprof::Table table;
  std::vector<std::vector<std::string>> cells;

  explicit ep_table(enerprof::Table t) : table(std::move(t)) {
    for (const auto& row : table.rows) {
      auto& out = cells.emplace_back();
      for (const auto& c : row) out.push_back(enerprof::cell_text(c));
    }
  }
};

struct ep_report {
  std::vector<std::unique_ptr<ep_table>> tables;
  std::string series;
};

struct ep_samples {
  std::vector<enerprof::PowerSample> samples;
};

struct ep_sampler {
  std::unique_ptr<enerprof::Sampler> sampler;
};

struct ep_store {
  enerprof::ResultsStore store;
  std::vector<std::string> ids;
};

struct ep_dataset {
  enerprof::Dataset dataset;
};

namespace {

using enerprof::ErrorCode;
using enerprof::fail;

thread_local std::string g_last_error;

template <typename F>
ep_status guarded(F&& body) {
  try {
    body();
    return EP_OK;
  } catch (const enerprof::Error& e) {
    g_last_error = e.what();
    return static_cast<ep_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EP_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EP_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return EP_INTERNAL;
  }
}

void require(bool condition, const char* what) {
  if (!condition) fail(ErrorCode::kInvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

std::vector<std::string> list_or_empty(const char* list) {
  return list ? enerprof::split_list(list) : std::vector<std::string>{};
}

enerprof::PowerSample from_c(const ep_sample& s) {
  enerprof::PowerSample out;
  out.t = s.t_ns;
  out.power = s.power_w;
  if (s.util_pct >= 0) out.util = s.util_pct;
  if (s.mem_used_mib >= 0) out.mem_used = s.mem_used_mib;
  if (s.temp_c >= 0) out.temp = s.temp_c;
  return out;
}

ep_sample to_c(const enerprof::PowerSample& s) {
  return {s.t, s.power, s.util.value_or(-1), s.mem_used.value_or(-1), s.temp.value_or(-1)};
}

enerprof::ScoreParams from_c(const ep_score_params* p) {
  return {p->weight, p->norm_j, p->min_accuracy};
}

enerprof::FrontierFit from_c(const ep_frontier& f) {
  enerprof::FrontierFit fit;
  fit.c1 = f.c1;
  fit.c2 = f.c2;
  fit.c3 = f.c3;
  fit.residual_norm = f.residual_norm;
  fit.energy_min = f.energy_min;
  fit.energy_max = f.energy_max;
  fit.points = f.points;
  return fit;
}

enerprof::SamplerConfig from_c(const ep_sampler_config& c) {
  enerprof::SamplerConfig out;
  out.rate = c.rate_hz;
  switch (c.source) {
    case EP_SAMPLER_LIVE: out.source = enerprof::SamplerSource::kLiveCommand; break;
    case EP_SAMPLER_REPLAY: out.source = enerprof::SamplerSource::kReplayFile; break;
    case EP_SAMPLER_SYNTHETIC: out.source = enerprof::SamplerSource::kSynthetic; break;
    default: fail(ErrorCode::kInvalidArgument, "unknown sampler source");
  }
  if (c.spec) out.source_spec = c.spec;
  return out;
}

ep_report* make_report(enerprof::Report report) {
  auto out = std::make_unique<ep_report>();
  for (auto& t : report.tables) out->tables.push_back(std::make_unique<ep_table>(std::move(t)));
  out->series = std::move(report.series_json);
  return out.release();
}

}  // namespace

extern "C" {

const char* ep_version(void) { return "0.1.0"; }

const char* ep_status_name(ep_status status) {
  switch (status) {
    case EP_OK: return "ok";
    case EP_INVALID_ARGUMENT: return "invalid argument";
    case EP_IO: return "i/o error";
    case EP_PARSE: return "parse error";
    case EP_VERSION: return "version mismatch";
    case EP_DUPLICATE: return "duplicate";
    case EP_NOT_FOUND: return "not found";
    case EP_INSUFFICIENT_DATA: return "insufficient data";
    case EP_OUT_OF_MEMORY: return "out of memory";
    case EP_WORKLOAD_FAILURE: return "workload failure";
    case EP_SAMPLER: return "sampler failure";
    case EP_LOCKED: return "locked";
    case EP_FIT_DIVERGENCE: return "fit divergence";
    case EP_MISMATCH: return "mismatch";
    case EP_STATE: return "invalid state";
    case EP_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ep_last_error(void) { return g_last_error.c_str(); }

void ep_string_free(char* s) { std::free(s); }

// tables

const char* ep_table_name(const ep_table* t) { return t ? t->table.name.c_str() : ""; }
size_t ep_table_columns(const ep_table* t) { return t ? t->table.columns.size() : 0; }
size_t ep_table_rows(const ep_table* t) { return t ? t->cells.size() : 0; }

const char* ep_table_column(const ep_table* t, size_t column) {
  if (!t || column >= t->table.columns.size()) return "";
  return t->table.columns[column].c_str();
}

const char* ep_table_cell(const ep_table* t, size_t row, size_t column) {
  if (!t || row >= t->cells.size() || column >= t->cells[row].size()) return "";
  return t->cells[row][column].c_str();
}

ep_status ep_table_render(const ep_table* t, ep_format format, char** out) {
  return guarded([&] {
    require(t && out, "table and output are required");
    enerprof::TableFormat f;
    switch (format) {
      case EP_FORMAT_TEXT: f = enerprof::TableFormat::kText; break;
      case EP_FORMAT_CSV: f = enerprof::TableFormat::kCsv; break;
      case EP_FORMAT_JSON_LINES: f = enerprof::TableFormat::kJsonLines; break;
      default: fail(ErrorCode::kInvalidArgument, "unknown table format");
    }
    *out = dup_string(enerprof::render(t->table, f));
  });
}

void ep_table_free(ep_table* t) { delete t; }

size_t ep_report_tables(const ep_report* r) { return r ? r->tables.size() : 0; }

const ep_table* ep_report_table(const ep_report* r, size_t index) {
  return r && index < r->tables.size() ? r->tables[index].get() : nullptr;
}

const char* ep_report_series(const ep_report* r) { return r ? r->series.c_str() : ""; }

ep_status ep_report_write(const ep_report* r, const char* dir) {
  return guarded([&] {
    require(r && dir, "report and directory are required");
    enerprof::Report report;
    for (const auto& t : r->tables) report.tables.push_back(t->table);
    report.series_json = r->series;
    enerprof::write_report(report, dir);
  });
}

void ep_report_free(ep_report* r) { delete r; }

// calculations

ep_status ep_integrate_energy(const ep_sample* samples, size_t count, int64_t t0_ns,
                              int64_t t1_ns, double* joules) {
  return guarded([&] {
    require(joules && (samples || count == 0), "samples and output are required");
    std::vector<enerprof::PowerSample> v;
    v.reserve(count);
    for (size_t i = 0; i < count; ++i) v.push_back(from_c(samples[i]));
    *joules = enerprof::integrate_energy(v, t0_ns, t1_ns);
  });
}

ep_status ep_pearson(const double* xs, const double* ys, size_t count, double* out) {
  return guarded([&] {
    require(xs && ys && out, "inputs and output are required");
    *out = enerprof::pearson({xs, count}, {ys, count});
  });
}

ep_status ep_spearman(const double* xs, const double* ys, size_t count, double* out) {
  return guarded([&] {
    require(xs && ys && out, "inputs and output are required");
    *out = enerprof::spearman({xs, count}, {ys, count});
  });
}

ep_status ep_geometric_stats(const double* values, size_t count, double* mean,
                             double* std_factor) {
  return guarded([&] {
    require(values && mean && std_factor, "inputs and outputs are required");
    const auto g = enerprof::geometric_stats({values, count});
    *mean = g.mean;
    *std_factor = g.std;
  });
}

ep_status ep_naive_estimate(double flops, double peak_flops, double tdp_w, double* joules) {
  return guarded([&] {
    require(joules, "output is required");
    enerprof::InferenceSetup setup{"gpu", "runtime", tdp_w, peak_flops};
    *joules = enerprof::naive_estimate(flops, setup);
  });
}

ep_status ep_tdp_headroom(double avg_power_w, double tdp_w, double* ratio, int* anomalous) {
  return guarded([&] {
    require(ratio && anomalous, "outputs are required");
    enerprof::EnergyMetrics m;
    m.avg_power = avg_power_w;
    const auto h = enerprof::tdp_headroom(m, enerprof::InferenceSetup{"gpu", "runtime", tdp_w, {}});
    *ratio = h.ratio;
    *anomalous = h.anomalous ? 1 : 0;
  });
}

void ep_score_params_init(ep_score_params* p) {
  if (!p) return;
  const enerprof::ScoreParams d;
  p->weight = d.weight;
  p->norm_j = d.norm;
  p->min_accuracy = d.min_accuracy;
}

ep_status ep_ratio_score(double accuracy, double energy_j, const ep_score_params* params,
                         double* score, int* kept) {
  return guarded([&] {
    require(params && score && kept, "parameters and outputs are required");
    const auto s = enerprof::ratio_score(accuracy, energy_j, from_c(params));
    *kept = s ? 1 : 0;
    *score = s ? *s : std::numeric_limits<double>::quiet_NaN();
  });
}

ep_status ep_manhattan_score(double accuracy, double energy_j, const ep_score_params* params,
                             int balanced, double* score) {
  return guarded([&] {
    require(params && score, "parameters and output are required");
    *score = enerprof::manhattan_score(
        accuracy, energy_j, from_c(params),
        balanced ? enerprof::ManhattanScale::kBalanced : enerprof::ManhattanScale::kLiteral);
  });
}

ep_status ep_fit_frontier(const double* energies, const double* accuracies, size_t count,
                          ep_frontier* fit) {
  return guarded([&] {
    require(energies && accuracies && fit, "inputs and output are required");
    std::vector<enerprof::EnergyAccuracyPoint> pts;
    for (size_t i = 0; i < count; ++i) pts.push_back({energies[i], accuracies[i], {}});
    const auto f = enerprof::fit_frontier(pts);
    *fit = {f.c1, f.c2, f.c3, f.residual_norm, f.energy_min, f.energy_max, f.points};
  });
}

ep_status ep_frontier_accuracy(const ep_frontier* fit, double energy_j, double* accuracy) {
  return guarded([&] {
    require(fit && accuracy, "fit and output are required");
    *accuracy = from_c(*fit).accuracy_at(energy_j);
  });
}

ep_status ep_extrapolate_energy(const ep_frontier* fit, double target_accuracy,
                                double* energy_j) {
  return guarded([&] {
    require(fit && energy_j, "fit and output are required");
    *energy_j = enerprof::extrapolate_energy(from_c(*fit), target_accuracy);
  });
}

// telemetry

ep_status ep_parse_sensor_log(const char* text, ep_samples** out, size_t* malformed) {
  return guarded([&] {
    require(text && out, "text and output are required");
    auto parsed = enerprof::parse_sensor_log(text);
    if (malformed) *malformed = parsed.malformed;
    *out = new ep_samples{std::move(parsed.samples)};
  });
}

size_t ep_samples_count(const ep_samples* s) { return s ? s->samples.size() : 0; }

ep_status ep_samples_get(const ep_samples* s, size_t index, ep_sample* out) {
  return guarded([&] {
    require(s && out, "samples and output are required");
    if (index >= s->samples.size()) fail(ErrorCode::kNotFound, "sample index out of range");
    *out = to_c(s->samples[index]);
  });
}

ep_status ep_samples_serialize(const ep_samples* s, char** out) {
  return guarded([&] {
    require(s && out, "samples and output are required");
    *out = dup_string(enerprof::serialize_sensor_log(s->samples));
  });
}

void ep_samples_free(ep_samples* s) { delete s; }

void ep_sampler_config_init(ep_sampler_config* c) {
  if (!c) return;
  c->rate_hz = enerprof::kDefaultSampleRate;
  c->source = EP_SAMPLER_LIVE;
  c->spec = nullptr;
}

ep_status ep_sampler_start(const ep_sampler_config* config, ep_sampler** out) {
  return guarded([&] {
    require(config && out, "config and output are required");
    auto sampler = enerprof::start_sampler(from_c(*config));
    *out = new ep_sampler{std::move(sampler)};
  });
}

ep_status ep_sampler_stop(ep_sampler* s, ep_samples** out, size_t* gaps) {
  return guarded([&] {
    require(s && out, "sampler and output are required");
    auto capture = s->sampler->stop();
    if (gaps) *gaps = capture.gaps.size();
    *out = new ep_samples{std::move(capture.samples)};
  });
}

void ep_sampler_free(ep_sampler* s) { delete s; }

// store and dataset

ep_status ep_store_open(const char* path, int create, ep_store** out) {
  return guarded([&] {
    require(path && out, "path and output are required");
    auto store = enerprof::ResultsStore::open(path, create != 0);
    std::vector<std::string> ids;
    for (const auto& r : store.runs()) ids.push_back(r.id);
    *out = new ep_store{std::move(store), std::move(ids)};
  });
}

size_t ep_store_run_count(const ep_store* s) { return s ? s->ids.size() : 0; }

const char* ep_store_run_id(const ep_store* s, size_t index) {
  return s && index < s->ids.size() ? s->ids[index].c_str() : "";
}

void ep_store_free(ep_store* s) { delete s; }

ep_status ep_store_replay(const char* store_path, const char* run_id, ep_table** out) {
  return guarded([&] {
    require(store_path && out, "store and output are required");
    *out = new ep_table(enerprof::replay(store_path, run_id ? run_id : ""));
  });
}

ep_status ep_dataset_load(const char* store_path, const char* metadata_path, ep_dataset** out) {
  return guarded([&] {
    require(store_path && metadata_path && out, "store, metadata and output are required");
    *out = new ep_dataset{enerprof::load_dataset(store_path, metadata_path)};
  });
}

ep_status ep_dataset_load_bundle(const char* bundle_path, ep_dataset** out) {
  return guarded([&] {
    require(bundle_path && out, "bundle and output are required");
    *out = new ep_dataset{enerprof::load_bundle(enerprof::read_text_file(bundle_path))};
  });
}

size_t ep_dataset_models(const ep_dataset* d) { return d ? d->dataset.models.size() : 0; }
size_t ep_dataset_setups(const ep_dataset* d) { return d ? d->dataset.setups.size() : 0; }
size_t ep_dataset_metric_entries(const ep_dataset* d) { return d ? d->dataset.metrics.size() : 0; }
void ep_dataset_free(ep_dataset* d) { delete d; }

// commands

void ep_measure_options_init(ep_measure_options* o) {
  if (!o) return;
  const enerprof::SweepConfig sweep;
  *o = ep_measure_options{};
  o->start_batch = sweep.start_batch;
  o->min_reps = sweep.min_reps;
  o->min_runtime_s = sweep.min_runtime;
  o->warmup_min_reps = sweep.warmup_min_reps;
  o->warmup_min_runtime_s = sweep.warmup_min_runtime;
  ep_sampler_config_init(&o->sampler);
  o->idle_baseline_w = -1.0;
}

ep_status ep_measure(const ep_measure_options* o, ep_table** out) {
  return guarded([&] {
    require(o && out, "options and output are required");
    enerprof::MeasureRequest r;
    r.model_id = o->model_id ? o->model_id : "";
    r.workload = o->workload ? o->workload : "";
    r.setup.gpu_label = o->gpu_label ? o->gpu_label : "";
    r.setup.runtime_label = o->runtime_label ? o->runtime_label : "";
    r.setup.tdp = o->tdp_w;
    if (o->peak_flops > 0.0) r.setup.peak_compute = o->peak_flops;
    r.sweep.start_batch = o->start_batch;
    if (o->max_batch > 0) r.sweep.max_batch = o->max_batch;
    r.sweep.min_reps = o->min_reps;
    r.sweep.min_runtime = o->min_runtime_s;
    r.sweep.warmup_min_reps = o->warmup_min_reps;
    r.sweep.warmup_min_runtime = o->warmup_min_runtime_s;
    r.sampler = from_c(o->sampler);
    if (r.sampler.source == enerprof::SamplerSource::kLiveCommand && r.sampler.source_spec.empty()) {
      r.sampler.source_spec = std::string(enerprof::kDefaultLiveCommand);
    }
    r.out = o->out ? o->out : "";
    if (o->idle_baseline_w >= 0.0) r.idle_baseline = o->idle_baseline_w;
    if (o->state_dir) r.state_dir = o->state_dir;
    *out = new ep_table(enerprof::measure(r));
  });
}

void ep_analyze_options_init(ep_analyze_options* o) {
  if (!o) return;
  *o = ep_analyze_options{};
  o->fit_target = 100.0;
}

ep_status ep_analyze(const ep_dataset* d, const ep_analyze_options* o, ep_report** out) {
  return guarded([&] {
    require(o && out, "options and output are required");
    require((o->paired_baseline == nullptr) == (o->paired_optimized == nullptr),
            "paired analysis needs both a baseline and an optimized setup");
    enerprof::AnalyzeRequest r;
    r.pareto = o->pareto != 0;
    r.fit = o->fit != 0;
    r.naive_vs_measured = o->naive_vs_measured != 0;
    r.yearly = o->yearly != 0;
    r.correlations = o->correlations != 0;
    r.input_size = o->input_size != 0;
    if (o->paired_baseline) r.paired = std::make_pair(o->paired_baseline, o->paired_optimized);
    r.setups = list_or_empty(o->setups);
    r.datasets = list_or_empty(o->datasets);
    r.fit_target = o->fit_target;
    if (o->points_path) r.points = enerprof::read_points(enerprof::read_text_file(o->points_path));
    *out = make_report(enerprof::analyze(d ? &d->dataset : nullptr, r));
  });
}

void ep_score_options_init(ep_score_options* o) {
  if (!o) return;
  const enerprof::ScoreRequest d;
  *o = ep_score_options{};
  o->metric = "manhattan";
  o->weight = d.weight;
  o->min_accuracy = d.min_accuracy;
}

ep_status ep_score(const ep_dataset* d, const ep_score_options* o, ep_report** out) {
  return guarded([&] {
    require(d && o && out, "dataset, options and output are required");
    enerprof::ScoreRequest r;
    const auto metric = enerprof::parse_score_metric(o->metric ? o->metric : "manhattan");
    if (!metric) fail(ErrorCode::kInvalidArgument, "metric must be ratio or manhattan");
    r.metric = *metric;
    r.scale = o->balanced ? enerprof::ManhattanScale::kBalanced : enerprof::ManhattanScale::kLiteral;
    r.weight = o->weight;
    r.min_accuracy = o->min_accuracy;
    if (o->fixed_norm_j != 0.0) r.fixed_norm = o->fixed_norm_j;
    r.setups = list_or_empty(o->setups);
    r.datasets = list_or_empty(o->datasets);
    r.top_n = o->top_n;
    r.grid = o->grid;
    *out = make_report(enerprof::score(d->dataset, r));
  });
}

void ep_export_options_init(ep_export_options* o) {
  if (o) *o = ep_export_options{};
}

ep_status ep_export(const ep_dataset* d, const ep_export_options* o, char** bundle) {
  return guarded([&] {
    require(d && o, "dataset and options are required");
    require(bundle || o->out_path, "an output is required");
    enerprof::BundleFilters filters;
    filters.setups = list_or_empty(o->setups);
    filters.models = list_or_empty(o->models);
    filters.datasets = list_or_empty(o->datasets);
    const auto text = enerprof::export_bundle(d->dataset, filters);
    if (o->out_path) enerprof::write_text_file(o->out_path, text);
    if (bundle) *bundle = dup_string(text);
  });
}

ep_status ep_validate(const char* store_path, const char* metadata_path, const char* bundle_path,
                      ep_table** out, size_t* errors) {
  return guarded([&] {
    require(out, "output is required");
    auto path = [](const char* p) -> std::optional<std::filesystem::path> {
      if (!p) return std::nullopt;
      return std::filesystem::path(p);
    };
    auto table = enerprof::validate_inputs(path(store_path), path(metadata_path), path(bundle_path));
    size_t n = 0;
    for (const auto& row : table.rows) {
      if (enerprof::cell_text(row[2]) == "error") ++n;
    }
    if (errors) *errors = n;
    *out = new ep_table(std::move(table));
  });
}

}  // extern "C"
