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
#include <span>
#include <string>
#include <vector>

#include "enerprof/stats.hpp"
#include "enerprof/types.hpp"

namespace enerprof {

// Points no other point dominates (lower-or-equal energy and
// higher-or-equal accuracy, one strictly), sorted by energy.
std::vector<EnergyAccuracyPoint> pareto_front(std::span<const EnergyAccuracyPoint> points);

// Convex hull in (log10 energy, accuracy) space: counter-clockwise extreme
// points starting from the lowest energy, without collinear or duplicate
// vertices. Energies must be positive.
std::vector<EnergyAccuracyPoint> convex_hull(std::span<const EnergyAccuracyPoint> points);

struct DatedPoint {
  EnergyAccuracyPoint point;
  int year = 0;
};

struct YearlyHull {
  int year = 0;
  std::size_t model_count = 0;  // models published up to and including year
  std::vector<EnergyAccuracyPoint> hull;
};

// One cumulative hull per distinct publication year, ascending.
std::vector<YearlyHull> yearly_hulls(std::span<const DatedPoint> points);

// FLOPs / peak FLOP/s * TDP. Throws kInvalidArgument without peak_compute.
double naive_estimate(double flops, const InferenceSetup& setup);

struct Underestimation {
  std::vector<double> factors;  // measured / estimated
  GeometricStats summary;
};

Underestimation underestimation_factors(std::span<const double> measured,
                                        std::span<const double> estimated);

struct PairedImprovement {
  std::string model_id;
  double throughput_ratio = 0.0;  // optimized / baseline throughput
  double energy_ratio = 0.0;      // baseline / optimized energy per image
};

struct PairedSummary {
  std::vector<PairedImprovement> pairs;  // sorted by model id
  GeometricStats energy;
  GeometricStats throughput;
  // Pearson of ln(throughput ratio) against ln(energy ratio); absent when
  // either has no spread or fewer than two models are shared.
  std::optional<double> log_correlation;
};

// Keys are model ids. Throws kInsufficientData when no model is shared.
PairedSummary paired_improvement(const std::map<std::string, EnergyMetrics>& baseline,
                                 const std::map<std::string, EnergyMetrics>& optimized);

struct SizedEntry {
  std::string model_id;
  std::int64_t input_size = 0;
  double accuracy = 0.0;
  double energy = 0.0;
};

struct InputSizeGroup {
  std::string group;
  std::vector<SizedEntry> entries;  // ascending input size
  std::vector<double> accuracy_deltas;  // minus the smallest size's accuracy
  std::vector<double> energy_ratios;    // over the smallest size's energy
  // Least-squares energy against pixel count (input_size^2); absent when
  // all entries share one size.
  std::optional<LinearFit> energy_per_pixel;
};

struct InputSizeScaling {
  std::vector<InputSizeGroup> groups;
  std::vector<std::string> skipped;  // groups with a single entry
};

InputSizeScaling input_size_scaling(const std::map<std::string, std::vector<SizedEntry>>& groups);

// Groups a model with its resolution variants: a trailing "_<size>",
// "-<size>" or "@<size>" equal to the model's input size is dropped.
std::string input_size_group_key(const std::string& model_id, std::int64_t input_size);

struct SetupCorrelation {
  std::string setup_a;
  std::string setup_b;
  std::size_t shared_models = 0;
  double pearson = 0.0;
  double spearman = 0.0;
};

// setup id -> (model id -> energy per image). Every unordered pair of
// setups, in key order. Throws kInvalidArgument for fewer than two setups and
// kInsufficientData when a pair shares fewer than two models.
std::vector<SetupCorrelation> cross_setup_correlation(
    const std::map<std::string, std::map<std::string, double>>& energy_by_setup);

}  // namespace enerprof
