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

#include "enerprof/frontier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "enerprof/error.hpp"
#include "enerprof/stats.hpp"

namespace enerprof {
namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

// Gaussian elimination with partial pivoting; false when singular.
bool solve3(Mat3 a, Vec3 b, Vec3& x) {
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (a[pivot][col] == 0.0 || !std::isfinite(a[pivot][col])) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 3; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 3; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

struct Problem {
  std::vector<double> log_energy;
  std::vector<double> accuracy;
  double min_log_energy = 0.0;

  bool in_domain(double c2) const { return min_log_energy + c2 > 0.0; }

  double cost(const Vec3& p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < log_energy.size(); ++i) {
      const double r = p[0] * std::log(log_energy[i] + p[1]) + p[2] - accuracy[i];
      s += r * r;
    }
    return s;
  }
};

struct Outcome {
  Vec3 params{};
  double cost = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

Outcome levenberg_marquardt(const Problem& prob, Vec3 p) {
  double cost = prob.cost(p);
  double lambda = 1e-3;
  int it = 0;
  const std::size_t n = prob.log_energy.size();
  for (; it < 5000; ++it) {
    Mat3 h{};
    Vec3 g{};
    for (std::size_t i = 0; i < n; ++i) {
      const double z = prob.log_energy[i] + p[1];
      const double lz = std::log(z);
      const Vec3 j{lz, p[0] / z, 1.0};
      const double r = p[0] * lz + p[2] - prob.accuracy[i];
      for (int a = 0; a < 3; ++a) {
        g[a] += j[a] * r;
        for (int b = 0; b < 3; ++b) h[a][b] += j[a] * j[b];
      }
    }
    bool improved = false;
    while (lambda < 1e20) {
      Mat3 damped = h;
      for (int a = 0; a < 3; ++a) damped[a][a] += lambda * std::max(h[a][a], 1e-300);
      Vec3 step{};
      const Vec3 rhs{-g[0], -g[1], -g[2]};
      if (solve3(damped, rhs, step)) {
        const Vec3 candidate{p[0] + step[0], p[1] + step[1], p[2] + step[2]};
        if (prob.in_domain(candidate[1])) {
          const double c = prob.cost(candidate);
          if (std::isfinite(c) && c <= cost) {
            const bool negligible =
                cost - c <= 1e-15 * cost &&
                std::abs(step[0]) <= 1e-12 * (1.0 + std::abs(p[0])) &&
                std::abs(step[1]) <= 1e-12 * (1.0 + std::abs(p[1])) &&
                std::abs(step[2]) <= 1e-12 * (1.0 + std::abs(p[2]));
            p = candidate;
            cost = c;
            lambda = std::max(lambda / 10.0, 1e-12);
            improved = !negligible;
            if (negligible) return {p, cost, it + 1};
            break;
          }
        }
      }
      lambda *= 10.0;
    }
    if (!improved || cost == 0.0) break;
  }
  return {p, cost, it};
}

}  // namespace

double FrontierFit::accuracy_at(double energy) const {
  return c1 * std::log(std::log(energy) + c2) + c3;
}

FrontierFit fit_frontier(std::span<const EnergyAccuracyPoint> front) {
  if (front.size() < kMinFrontierPoints) {
    fail(ErrorCode::kInvalidArgument, "frontier fit needs at least " +
                                          std::to_string(kMinFrontierPoints) + " points, got " +
                                          std::to_string(front.size()));
  }
  Problem prob;
  double e_min = std::numeric_limits<double>::infinity();
  double e_max = 0.0;
  for (const auto& p : front) {
    if (!(p.energy > 0.0) || !std::isfinite(p.energy)) {
      fail(ErrorCode::kInvalidArgument, "frontier energies must be positive");
    }
    prob.log_energy.push_back(std::log(p.energy));
    prob.accuracy.push_back(p.accuracy);
    e_min = std::min(e_min, p.energy);
    e_max = std::max(e_max, p.energy);
  }
  prob.min_log_energy = *std::min_element(prob.log_energy.begin(), prob.log_energy.end());

  // c2 starts a fixed distance above the domain floor -min(ln E); c1 and c3
  // come from the linear problem at that c2.
  const double offsets[] = {1.1, 0.3, 3.0, 10.0, 30.0};
  Outcome best;
  std::ostringstream diagnostics;
  for (double offset : offsets) {
    const double c2 = -prob.min_log_energy + offset;
    std::vector<double> x;
    for (double u : prob.log_energy) x.push_back(std::log(u + c2));
    LinearFit lin;
    try {
      lin = linear_fit(x, prob.accuracy);
    } catch (const Error&) {
      fail(ErrorCode::kInvalidArgument, "frontier energies must not all be equal");
    }
    auto out = levenberg_marquardt(prob, {lin.slope, c2, lin.intercept});
    diagnostics << " start c2=" << c2 << " -> cost " << out.cost << " after "
                << out.iterations << " iterations;";
    if (std::isfinite(out.cost) && out.cost < best.cost) best = out;
  }
  if (!std::isfinite(best.cost)) {
    fail(ErrorCode::kFitDivergence, "frontier fit diverged:" + diagnostics.str());
  }
  FrontierFit fit;
  fit.c1 = best.params[0];
  fit.c2 = best.params[1];
  fit.c3 = best.params[2];
  fit.residual_norm = std::sqrt(best.cost);
  fit.energy_min = e_min;
  fit.energy_max = e_max;
  fit.points = front.size();
  fit.iterations = best.iterations;
  return fit;
}

double extrapolate_energy(const FrontierFit& fit, double target_accuracy) {
  if (fit.c1 == 0.0 || !std::isfinite(fit.c1)) {
    fail(ErrorCode::kInvalidArgument, "fit is flat; accuracy does not determine energy");
  }
  const double inner = std::exp((target_accuracy - fit.c3) / fit.c1);
  const double energy = std::exp(inner - fit.c2);
  if (!std::isfinite(inner) || !std::isfinite(energy)) {
    fail(ErrorCode::kInsufficientData, "extrapolated energy overflows");
  }
  if (energy <= 0.0) fail(ErrorCode::kInsufficientData, "extrapolated energy underflows");
  return energy;
}

}  // namespace enerprof
