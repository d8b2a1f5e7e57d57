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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enerprof/types.hpp"

namespace enerprof {

enum class ScoreMetric { kRatio, kManhattan };

std::optional<ScoreMetric> parse_score_metric(std::string_view name);
std::string_view to_string(ScoreMetric metric);

// kLiteral:  100 - (W * E/N + (1 - W) * (100 - A))
// kBalanced: 100 - (W * 100 * E/N + (1 - W) * (100 - A))
enum class ManhattanScale { kLiteral, kBalanced };

// Accuracy per joule (%/J), or nullopt when accuracy < min_accuracy.
// Throws kInvalidArgument for nonpositive energy.
std::optional<double> ratio_score(double accuracy, double energy_per_image,
                                  const ScoreParams& params);

// Weighted Manhattan distance to (100 %, 0 J) subtracted from 100. Throws
// kInvalidArgument for N <= 0, W outside [0, 1] or negative energy.
double manhattan_score(double accuracy, double energy_per_image, const ScoreParams& params,
                       ManhattanScale scale = ManhattanScale::kLiteral);

struct ScoreCandidate {
  std::string model_id;
  double accuracy = 0.0;
  double energy = 0.0;
};

struct ScoredModel {
  std::string model_id;
  double accuracy = 0.0;
  double energy = 0.0;
  double score = 0.0;
};

struct RankOptions {
  ScoreMetric metric = ScoreMetric::kManhattan;
  ManhattanScale scale = ManhattanScale::kLiteral;
  ScoreParams params;
  std::size_t top_n = 0;  // 0 keeps every model
};

// Largest energy among candidates meeting min_accuracy.
std::optional<double> auto_norm(std::span<const ScoreCandidate> candidates, double min_accuracy);

// Drops candidates below min_accuracy, then sorts by descending score with
// ties in model id order. Throws kInsufficientData when nothing survives.
std::vector<ScoredModel> rank(std::span<const ScoreCandidate> candidates,
                              const RankOptions& options);

struct ScoreGrid {
  std::vector<double> energies;    // log-spaced, ascending
  std::vector<double> accuracies;  // linear, ascending
  // values[a][e]; NaN where the ratio score filters the cell out.
  std::vector<std::vector<double>> values;
};

double score_value(double accuracy, double energy, const RankOptions& options);

// resolution x resolution grid; energy_range must be positive and ordered.
ScoreGrid score_grid(const RankOptions& options, double energy_lo, double energy_hi,
                     double accuracy_lo, double accuracy_hi, std::size_t resolution);

}  // namespace enerprof
