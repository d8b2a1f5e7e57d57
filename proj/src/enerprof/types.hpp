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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace enerprof {

// Wall-clock nanoseconds since the Unix epoch.
using TimestampNs = std::int64_t;

inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;

struct PowerSample {
  TimestampNs t = 0;
  double power = 0.0;  // W
  std::optional<int> util;      // %
  std::optional<int> mem_used;  // MiB
  std::optional<int> temp;      // degrees C

  bool operator==(const PowerSample&) const = default;
};

struct InferenceSetup {
  std::string gpu_label;
  std::string runtime_label;
  double tdp = 0.0;                    // W
  std::optional<double> peak_compute;  // FLOP/s

  // "<gpu_label>/<runtime_label>", the key used by stores and bundles.
  std::string id() const { return gpu_label + "/" + runtime_label; }

  bool operator==(const InferenceSetup&) const = default;
};

enum class ModelFamily { kMlp, kCnn, kTransformer, kHybrid, kOther };

std::string_view to_string(ModelFamily family);
// Case-insensitive; unknown or empty names map to kOther.
ModelFamily parse_family(std::string_view name);

struct ModelRecord {
  std::string model_id;
  ModelFamily family = ModelFamily::kOther;
  std::optional<int> pub_year;
  double params = 0.0;
  // Stored verbatim as ingested; see flops_convention.
  double flops = 0.0;
  std::optional<double> activations;
  std::int64_t input_size = 0;  // pixels per side
  std::map<std::string, double> accuracies;  // dataset id -> percent
  std::string flops_convention = "unspecified";
  std::string url;

  bool operator==(const ModelRecord&) const = default;
};

struct EnergyMetrics {
  double energy_per_image = 0.0;  // J
  double throughput = 0.0;        // images/s
  double latency = 0.0;           // s per batch
  double avg_power = 0.0;         // W
  std::int64_t batch_size = 0;
  std::int64_t images_processed = 0;
  double wall_time = 0.0;  // s

  bool operator==(const EnergyMetrics&) const = default;
};

enum class QualityFlag { kSamplerGap, kTdpAnomaly };

std::string_view to_string(QualityFlag flag);
std::optional<QualityFlag> parse_quality_flag(std::string_view name);

struct RunMeasurement {
  std::string model_id;
  InferenceSetup setup;
  std::int64_t batch_size = 0;
  // When the first measured batch was issued; opens the sample window.
  TimestampNs issued_at = 0;
  std::vector<TimestampNs> batch_marks;
  std::vector<PowerSample> samples;
  std::optional<EnergyMetrics> metrics;
  std::set<QualityFlag> quality_flags;
  // Annotation only; never subtracted from metrics.
  std::optional<double> idle_baseline;

  bool operator==(const RunMeasurement&) const = default;
};

// One model as a point in the energy/accuracy plane.
struct EnergyAccuracyPoint {
  double energy = 0.0;    // J per image
  double accuracy = 0.0;  // percent
  std::string id;

  bool operator==(const EnergyAccuracyPoint&) const = default;
};

struct ScoreParams {
  double weight = 0.5;       // W in [0, 1]
  double norm = 1.0;         // N in joules, > 0
  double min_accuracy = 0.0;  // percent
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate(const PowerSample& sample);
ValidationReport validate(const InferenceSetup& setup);
ValidationReport validate(const ModelRecord& record);
ValidationReport validate(const EnergyMetrics& metrics);
ValidationReport validate(const ScoreParams& params);
// Includes a re-derivation check of metrics against samples and marks.
ValidationReport validate(const RunMeasurement& run);

}  // namespace enerprof
