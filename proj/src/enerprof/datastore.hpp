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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "enerprof/types.hpp"

namespace enerprof {

inline constexpr std::string_view kResultsFormat = "enerprof-results";
inline constexpr std::string_view kBundleFormat = "enerprof-bundle";
inline constexpr std::string_view kSchemaVersion = "v1";

// Store-level view of a run; marks and samples live in sidecar files.
struct RunSummary {
  std::string id;
  std::string model_id;
  std::string setup_id;
  std::int64_t batch_size = 0;
  TimestampNs issued_at = 0;
  std::size_t mark_count = 0;
  std::size_t sample_count = 0;
  std::string marks_path;    // relative to the store's directory
  std::string samples_path;  // telemetry log format
  EnergyMetrics metrics;
  std::set<QualityFlag> quality_flags;
  std::optional<double> idle_baseline;
};

// Line-delimited JSON results store with a per-run sidecar directory
// "<store>.d". The first line is a header naming the schema version; setup
// descriptors and runs are appended as records.
class ResultsStore {
 public:
  // Throws kNotFound when missing (unless create), kVersion for a header
  // that is unreadable or names another version, kParse for bad records.
  static ResultsStore open(const std::filesystem::path& path, bool create = false);

  // Derives metrics when the run has none. Throws kDuplicate when the
  // (model, setup, batch size) key or its id already exists and
  // kMismatch when the setup id is known with different descriptors.
  std::string save_run(const RunMeasurement& run);

  RunMeasurement load_run(std::string_view id) const;

  const std::vector<RunSummary>& runs() const { return runs_; }
  const std::map<std::string, InferenceSetup>& setups() const { return setups_; }
  const RunSummary* find(std::string_view id) const;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path sidecar_dir() const;

  static std::string make_run_id(const std::string& model_id, const InferenceSetup& setup,
                                 std::int64_t batch_size);

 private:
  void append_line(const std::string& line);

  std::filesystem::path path_;
  std::map<std::string, InferenceSetup> setups_;
  std::vector<RunSummary> runs_;
};

struct MetadataRowError {
  std::size_t line = 0;
  std::string message;
};

struct MetadataTable {
  std::vector<ModelRecord> records;
  std::vector<std::string> datasets;  // accuracy columns, header order
  std::vector<MetadataRowError> errors;
};

// Comma- or tab-separated with a header row. Mandatory columns: model_id,
// family, year, params, flops, activations, input_size. "url" and
// "flops_convention" are optional; any other column is an accuracy dataset.
// Invalid rows are reported and skipped; a missing mandatory column throws
// kParse.
MetadataTable ingest_metadata(std::string_view text);

// Models, setups and the best-batch metrics of every (model, setup) pair.
struct Dataset {
  std::vector<InferenceSetup> setups;  // sorted by id
  std::vector<ModelRecord> models;     // sorted by model id
  std::vector<std::string> datasets;   // sorted
  std::map<std::pair<std::string, std::string>, EnergyMetrics> metrics;  // (model, setup id)

  const InferenceSetup* find_setup(std::string_view id) const;
  const ModelRecord* find_model(std::string_view id) const;
  // Best-batch metrics of every model measured on the setup.
  std::map<std::string, EnergyMetrics> metrics_for(std::string_view setup_id) const;
};

Dataset build_dataset(const ResultsStore& store, const MetadataTable& metadata);

struct BundleFilters {
  std::vector<std::string> setups;    // empty keeps all
  std::vector<std::string> models;    // empty keeps all
  std::vector<std::string> datasets;  // empty keeps all
};

// Deterministic JSON document:
//   {format, version, datasets[], setups[], models[], metrics[]}
// Only models that have metadata and at least one metric entry are kept.
// Throws kInsufficientData when that leaves nothing.
std::string export_bundle(const Dataset& dataset, const BundleFilters& filters = {});

// Throws kVersion for another format or version, kParse for bad content.
Dataset load_bundle(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a temporary file and rename.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace enerprof
