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
#include <span>

#include "enerprof/types.hpp"

namespace enerprof {

// Nested-logarithmic trend A(E) = c1 * ln(ln E + c2) + c3, E in joules and
// A in percent. ln E + c2 stays positive over [energy_min, energy_max].
struct FrontierFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double residual_norm = 0.0;  // sqrt of the sum of squared residuals
  double energy_min = 0.0;
  double energy_max = 0.0;
  std::size_t points = 0;
  int iterations = 0;

  double accuracy_at(double energy) const;
};

inline constexpr std::size_t kMinFrontierPoints = 4;

// Levenberg-Marquardt least squares from several starts; the best valid
// solution wins. Throws kInvalidArgument for fewer than four points or
// nonpositive energies and kFitDivergence when no start converges.
FrontierFit fit_frontier(std::span<const EnergyAccuracyPoint> front);

// Energy at which the fitted curve reaches target_accuracy:
// E = exp(exp((target - c3) / c1) - c2). Throws kInvalidArgument when the
// curve is flat and kInsufficientData when the result over- or underflows.
double extrapolate_energy(const FrontierFit& fit, double target_accuracy);

}  // namespace enerprof
