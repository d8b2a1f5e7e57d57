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

#include "enerprof/energy.hpp"

#include <algorithm>
#include <vector>

#include "enerprof/error.hpp"

namespace enerprof {
namespace {

double seconds(TimestampNs dt) {
  return static_cast<double>(dt) / static_cast<double>(kNanosPerSecond);
}

// Power at t by linear interpolation, holding end values outside the span.
double power_at(std::span<const PowerSample> s, TimestampNs t) {
  auto it = std::lower_bound(s.begin(), s.end(), t,
                             [](const PowerSample& p, TimestampNs v) { return p.t < v; });
  if (it == s.begin()) return s.front().power;
  if (it == s.end()) return s.back().power;
  if (it->t == t) return it->power;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double f = static_cast<double>(t - lo.t) / static_cast<double>(hi.t - lo.t);
  return lo.power + f * (hi.power - lo.power);
}

}  // namespace

std::span<const PowerSample> window(std::span<const PowerSample> samples,
                                    TimestampNs t0, TimestampNs t1) {
  auto first = std::lower_bound(
      samples.begin(), samples.end(), t0,
      [](const PowerSample& p, TimestampNs v) { return p.t < v; });
  auto last = std::upper_bound(
      first, samples.end(), t1,
      [](TimestampNs v, const PowerSample& p) { return v < p.t; });
  return {first, last};
}

double integrate_energy(std::span<const PowerSample> samples, TimestampNs t0,
                        TimestampNs t1) {
  if (!(t0 < t1)) fail(ErrorCode::kInvalidArgument, "window start must precede end");
  const auto inside = window(samples, t0, t1);
  std::size_t usable = inside.size();
  if (inside.begin() != samples.begin()) ++usable;
  if (inside.end() != samples.end()) ++usable;
  if (usable < 2) {
    fail(ErrorCode::kInsufficientData, "insufficient samples in window");
  }

  TimestampNs prev_t = t0;
  double prev_p = power_at(samples, t0);
  double joules = 0.0;
  for (const auto& s : inside) {
    if (s.t == t0) continue;
    joules += 0.5 * (prev_p + s.power) * seconds(s.t - prev_t);
    prev_t = s.t;
    prev_p = s.power;
  }
  if (prev_t != t1) {
    joules += 0.5 * (prev_p + power_at(samples, t1)) * seconds(t1 - prev_t);
  }
  return joules;
}

EnergyMetrics metrics_from_totals(double joules, std::int64_t batch_count,
                                  std::int64_t batch_size, double wall_time) {
  if (batch_count <= 0 || batch_size <= 0) fail(ErrorCode::kInsufficientData, "empty run");
  if (!(wall_time > 0.0)) fail(ErrorCode::kInvalidArgument, "wall time must be positive");
  EnergyMetrics m;
  m.batch_size = batch_size;
  m.images_processed = batch_count * batch_size;
  m.wall_time = wall_time;
  const double images = static_cast<double>(m.images_processed);
  m.energy_per_image = joules / images;
  m.throughput = images / wall_time;
  m.latency = wall_time / static_cast<double>(batch_count);
  m.avg_power = joules / wall_time;
  return m;
}

EnergyMetrics derive_metrics(const RunMeasurement& run) {
  if (run.batch_marks.empty()) fail(ErrorCode::kInsufficientData, "empty run");
  const TimestampNs t0 = run.issued_at;
  const TimestampNs t1 = run.batch_marks.back();
  const auto inside = window(run.samples, t0, t1);
  const double joules = integrate_energy(inside, t0, t1);
  return metrics_from_totals(joules, static_cast<std::int64_t>(run.batch_marks.size()),
                             run.batch_size, seconds(t1 - t0));
}

TdpHeadroom tdp_headroom(const EnergyMetrics& metrics, const InferenceSetup& setup) {
  if (!(setup.tdp > 0.0)) fail(ErrorCode::kInvalidArgument, "tdp must be positive");
  TdpHeadroom h;
  h.ratio = metrics.avg_power / setup.tdp;
  h.anomalous = h.ratio > kTdpAnomalyRatio;
  return h;
}

const EnergyMetrics& best_batch(std::span<const EnergyMetrics> candidates) {
  if (candidates.empty()) fail(ErrorCode::kInsufficientData, "no runs to choose from");
  const EnergyMetrics* best = &candidates.front();
  for (const auto& c : candidates.subspan(1)) {
    if (c.energy_per_image < best->energy_per_image ||
        (c.energy_per_image == best->energy_per_image &&
         c.batch_size < best->batch_size)) {
      best = &c;
    }
  }
  return *best;
}

std::pair<std::int64_t, EnergyMetrics> best_batch(
    std::span<const RunMeasurement> runs) {
  std::vector<EnergyMetrics> metrics;
  metrics.reserve(runs.size());
  for (const auto& r : runs) {
    metrics.push_back(r.metrics ? *r.metrics : derive_metrics(r));
  }
  const auto& best = best_batch(std::span<const EnergyMetrics>(metrics));
  return {best.batch_size, best};
}

}  // namespace enerprof
