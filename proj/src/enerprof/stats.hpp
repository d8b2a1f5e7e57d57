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

#include <span>
#include <vector>

namespace enerprof {

// Product-moment correlation. Throws kInvalidArgument on length mismatch or
// fewer than two points, kInsufficientData on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of average ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

struct GeometricStats {
  double mean = 1.0;  // exp(mean(ln x))
  double std = 1.0;   // exp(population std of ln x)
};

// Throws kInvalidArgument for empty input or nonpositive values.
GeometricStats geometric_stats(std::span<const double> values);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

}  // namespace enerprof
