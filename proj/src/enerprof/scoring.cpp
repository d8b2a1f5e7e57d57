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

#include "enerprof/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enerprof/error.hpp"

namespace enerprof {

std::optional<ScoreMetric> parse_score_metric(std::string_view name) {
  if (name == "ratio") return ScoreMetric::kRatio;
  if (name == "manhattan") return ScoreMetric::kManhattan;
  return std::nullopt;
}

std::string_view to_string(ScoreMetric metric) {
  return metric == ScoreMetric::kRatio ? "ratio" : "manhattan";
}

std::optional<double> ratio_score(double accuracy, double energy_per_image,
                                  const ScoreParams& params) {
  if (!(energy_per_image > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "ratio score needs positive energy");
  }
  if (accuracy < params.min_accuracy) return std::nullopt;
  return accuracy / energy_per_image;
}

double manhattan_score(double accuracy, double energy_per_image, const ScoreParams& params,
                       ManhattanScale scale) {
  if (!(params.norm > 0.0)) fail(ErrorCode::kInvalidArgument, "normalization must be positive");
  if (!(params.weight >= 0.0 && params.weight <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "weight must lie in [0, 1]");
  }
  if (!(energy_per_image >= 0.0)) fail(ErrorCode::kInvalidArgument, "energy must be nonnegative");
  double energy_term = energy_per_image / params.norm;
  if (scale == ManhattanScale::kBalanced) energy_term *= 100.0;
  // 100 - (w * energy_term + (1 - w) * (100 - accuracy)), rearranged.
  const double w = params.weight;
  return w * (100.0 - energy_term) + (1.0 - w) * accuracy;
}

std::optional<double> auto_norm(std::span<const ScoreCandidate> candidates, double min_accuracy) {
  std::optional<double> norm;
  for (const auto& c : candidates) {
    if (c.accuracy < min_accuracy) continue;
    if (!norm || c.energy > *norm) norm = c.energy;
  }
  return norm;
}

double score_value(double accuracy, double energy, const RankOptions& options) {
  if (options.metric == ScoreMetric::kRatio) {
    auto s = ratio_score(accuracy, energy, options.params);
    return s ? *s : std::numeric_limits<double>::quiet_NaN();
  }
  return manhattan_score(accuracy, energy, options.params, options.scale);
}

std::vector<ScoredModel> rank(std::span<const ScoreCandidate> candidates,
                              const RankOptions& options) {
  std::vector<ScoredModel> out;
  for (const auto& c : candidates) {
    if (c.accuracy < options.params.min_accuracy) continue;
    out.push_back({c.model_id, c.accuracy, c.energy, score_value(c.accuracy, c.energy, options)});
  }
  if (out.empty()) fail(ErrorCode::kInsufficientData, "every model is filtered out");
  std::sort(out.begin(), out.end(), [](const ScoredModel& a, const ScoredModel& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.model_id < b.model_id;
  });
  if (options.top_n > 0 && out.size() > options.top_n) out.resize(options.top_n);
  return out;
}

ScoreGrid score_grid(const RankOptions& options, double energy_lo, double energy_hi,
                     double accuracy_lo, double accuracy_hi, std::size_t resolution) {
  if (!(energy_lo > 0.0 && energy_hi >= energy_lo)) {
    fail(ErrorCode::kInvalidArgument, "energy range must be positive and ordered");
  }
  if (!(accuracy_hi >= accuracy_lo)) fail(ErrorCode::kInvalidArgument, "accuracy range not ordered");
  if (resolution < 2) fail(ErrorCode::kInvalidArgument, "grid resolution must be at least 2");
  ScoreGrid g;
  const double l0 = std::log10(energy_lo);
  const double l1 = std::log10(energy_hi);
  const double steps = static_cast<double>(resolution - 1);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double f = static_cast<double>(i) / steps;
    g.energies.push_back(i + 1 == resolution ? energy_hi : std::pow(10.0, l0 + f * (l1 - l0)));
    g.accuracies.push_back(i + 1 == resolution ? accuracy_hi
                                               : accuracy_lo + f * (accuracy_hi - accuracy_lo));
  }
  g.energies.front() = energy_lo;
  g.values.assign(resolution, std::vector<double>(resolution));
  for (std::size_t a = 0; a < resolution; ++a) {
    for (std::size_t e = 0; e < resolution; ++e) {
      g.values[a][e] = score_value(g.accuracies[a], g.energies[e], options);
    }
  }
  return g;
}

}  // namespace enerprof
