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
#include <span>
#include <utility>

#include "enerprof/types.hpp"

namespace enerprof {

// Average power above this multiple of TDP marks a run as anomalous.
inline constexpr double kTdpAnomalyRatio = 1.02;

// Trapezoidal integral of power (J) over [t0, t1]. Boundary values are
// linearly interpolated from the neighbouring samples; when a boundary lies
// outside the sampled span the nearest sample value is held.
// Throws kInsufficientData unless at least two samples lie inside or
// directly bracket the window.
double integrate_energy(std::span<const PowerSample> samples, TimestampNs t0,
                        TimestampNs t1);

EnergyMetrics metrics_from_totals(double joules, std::int64_t batch_count,
                                  std::int64_t batch_size, double wall_time);

// Integrates only the samples inside [issued_at, last batch mark].
EnergyMetrics derive_metrics(const RunMeasurement& run);

// Samples of `samples` with t in [t0, t1].
std::span<const PowerSample> window(std::span<const PowerSample> samples,
                                    TimestampNs t0, TimestampNs t1);

struct TdpHeadroom {
  double ratio = 0.0;
  bool anomalous = false;
};

TdpHeadroom tdp_headroom(const EnergyMetrics& metrics,
                         const InferenceSetup& setup);

// Lowest energy per image; ties go to the smaller batch size.
const EnergyMetrics& best_batch(std::span<const EnergyMetrics> candidates);
std::pair<std::int64_t, EnergyMetrics> best_batch(
    std::span<const RunMeasurement> runs);

}  // namespace enerprof
