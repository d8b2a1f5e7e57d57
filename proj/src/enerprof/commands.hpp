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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "enerprof/datastore.hpp"
#include "enerprof/harness.hpp"
#include "enerprof/scoring.hpp"
#include "enerprof/table.hpp"
#include "enerprof/telemetry.hpp"

// Subcommand drivers shared by the C API and the command line tool.
namespace enerprof {

struct MeasureRequest {
  std::string model_id;
  std::string workload;  // shell command or "sim:..."
  InferenceSetup setup;
  SweepConfig sweep;
  SamplerConfig sampler;
  std::filesystem::path out;
  std::optional<double> idle_baseline;
  std::filesystem::path state_dir;  // empty: default_state_dir()
};

// Sweeps under the GPU lock and appends every measured batch size to the
// store. One row per saved run.
Table measure(const MeasureRequest& request);

// Re-derives metrics from sidecar samples and compares them with the stored
// values field by field. An empty id replays every run. Throws kMismatch
// when any run differs.
Table replay(const std::filesystem::path& store, const std::string& run_id);

// Accuracy of a model on the selected datasets (their mean), or on the
// default dataset when none are selected. nullopt when one is missing.
std::optional<double> model_accuracy(const ModelRecord& model,
                                     const std::vector<std::string>& datasets,
                                     const std::vector<std::string>& available);

// "imagenet" when present, else the first dataset id.
std::optional<std::string> default_dataset(const std::vector<std::string>& available);

struct AnalyzeRequest {
  bool pareto = false;
  bool fit = false;
  bool naive_vs_measured = false;
  bool yearly = false;
  bool correlations = false;
  bool input_size = false;
  std::optional<std::pair<std::string, std::string>> paired;  // baseline, optimized
  std::vector<std::string> setups;    // empty: all
  std::vector<std::string> datasets;  // empty: default dataset
  double fit_target = 100.0;          // accuracy to extrapolate to
  // Raw energy/accuracy points analysed as one extra group named "points".
  std::vector<EnergyAccuracyPoint> points;
};

struct Report {
  std::vector<Table> tables;
  std::string series_json;  // plot-ready series, one key per analysis
};

// `dataset` may be null when only `points` are analysed.
Report analyze(const Dataset* dataset, const AnalyzeRequest& request);

// <dir>/<table name>.csv for every table plus <dir>/series.json.
void write_report(const Report& report, const std::filesystem::path& dir);

// CSV with "energy" and "accuracy" columns and an optional "id" column.
std::vector<EnergyAccuracyPoint> read_points(std::string_view text);

struct ScoreRequest {
  ScoreMetric metric = ScoreMetric::kManhattan;
  ManhattanScale scale = ManhattanScale::kLiteral;
  double weight = 0.5;
  double min_accuracy = 0.0;
  std::optional<double> fixed_norm;  // nullopt: largest energy after filtering
  std::vector<std::string> setups;
  std::vector<std::string> datasets;
  std::size_t top_n = 0;
  std::size_t grid = 0;  // resolution; 0 skips the grid
};

// Ranking per setup, and a long-form score grid when requested.
Report score(const Dataset& dataset, const ScoreRequest& request);

// Checks every stored run, the metadata table and the bundle, whichever are
// given. One row per violation.
Table validate_inputs(const std::optional<std::filesystem::path>& store,
                      const std::optional<std::filesystem::path>& metadata,
                      const std::optional<std::filesystem::path>& bundle);

// Store plus metadata file.
Dataset load_dataset(const std::filesystem::path& store, const std::filesystem::path& metadata);

// Splits "a,b,c", dropping empty items.
std::vector<std::string> split_list(std::string_view list);

}  // namespace enerprof
