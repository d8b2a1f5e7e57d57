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

#include "enerprof/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "enerprof/error.hpp"

namespace enerprof {
namespace {

struct HullPoint {
  double x = 0.0;
  double y = 0.0;
  const EnergyAccuracyPoint* src = nullptr;
};

double cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool energy_then_accuracy(const EnergyAccuracyPoint& a, const EnergyAccuracyPoint& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
  return a.id < b.id;
}

}  // namespace

std::vector<EnergyAccuracyPoint> pareto_front(std::span<const EnergyAccuracyPoint> points) {
  std::vector<EnergyAccuracyPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), energy_then_accuracy);
  std::vector<EnergyAccuracyPoint> front;
  double best_before = -std::numeric_limits<double>::infinity();
  std::size_t i = 0;
  while (i < sorted.size()) {
    // Among equal energies only the highest accuracy can survive, and only
    // if it beats everything cheaper.
    std::size_t j = i;
    const double top = sorted[i].accuracy;
    while (j < sorted.size() && sorted[j].energy == sorted[i].energy) {
      if (sorted[j].accuracy == top && top > best_before) front.push_back(sorted[j]);
      ++j;
    }
    best_before = std::max(best_before, top);
    i = j;
  }
  return front;
}

std::vector<EnergyAccuracyPoint> convex_hull(std::span<const EnergyAccuracyPoint> points) {
  std::vector<HullPoint> pts;
  pts.reserve(points.size());
  for (const auto& p : points) {
    if (!(p.energy > 0.0)) fail(ErrorCode::kInvalidArgument, "hull energies must be positive");
    pts.push_back({std::log10(p.energy), p.accuracy, &p});
  }
  std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.src->id < b.src->id;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const HullPoint& a, const HullPoint& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) {
    std::vector<EnergyAccuracyPoint> out;
    for (const auto& p : pts) out.push_back(*p.src);
    return out;
  }
  // Andrew's monotone chain; cross <= 0 pops collinear points too.
  std::vector<HullPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  std::vector<EnergyAccuracyPoint> out;
  out.reserve(hull.size());
  for (const auto& h : hull) out.push_back(*h.src);
  return out;
}

std::vector<YearlyHull> yearly_hulls(std::span<const DatedPoint> points) {
  std::set<int> years;
  for (const auto& p : points) years.insert(p.year);
  std::vector<YearlyHull> out;
  for (int year : years) {
    std::vector<EnergyAccuracyPoint> upto;
    for (const auto& p : points) {
      if (p.year <= year) upto.push_back(p.point);
    }
    YearlyHull h;
    h.year = year;
    h.model_count = upto.size();
    h.hull = convex_hull(upto);
    out.push_back(std::move(h));
  }
  return out;
}

double naive_estimate(double flops, const InferenceSetup& setup) {
  if (!setup.peak_compute) {
    fail(ErrorCode::kInvalidArgument, "setup " + setup.id() + " has no peak compute");
  }
  return flops / *setup.peak_compute * setup.tdp;
}

Underestimation underestimation_factors(std::span<const double> measured,
                                        std::span<const double> estimated) {
  if (measured.size() != estimated.size()) fail(ErrorCode::kInvalidArgument, "length mismatch");
  Underestimation u;
  for (std::size_t i = 0; i < measured.size(); ++i) {
    if (!(measured[i] > 0.0) || !(estimated[i] > 0.0)) {
      fail(ErrorCode::kInvalidArgument, "underestimation factors need positive energies");
    }
    u.factors.push_back(measured[i] / estimated[i]);
  }
  u.summary = geometric_stats(u.factors);
  return u;
}

PairedSummary paired_improvement(const std::map<std::string, EnergyMetrics>& baseline,
                                 const std::map<std::string, EnergyMetrics>& optimized) {
  PairedSummary s;
  for (const auto& [id, base] : baseline) {
    auto it = optimized.find(id);
    if (it == optimized.end()) continue;
    const auto& opt = it->second;
    PairedImprovement p;
    p.model_id = id;
    p.throughput_ratio = opt.throughput / base.throughput;
    p.energy_ratio = base.energy_per_image / opt.energy_per_image;
    if (!(p.throughput_ratio > 0.0 && std::isfinite(p.throughput_ratio)) ||
        !(p.energy_ratio > 0.0 && std::isfinite(p.energy_ratio))) {
      fail(ErrorCode::kInvalidArgument, "model " + id + " has nonpositive metrics");
    }
    s.pairs.push_back(p);
  }
  if (s.pairs.empty()) fail(ErrorCode::kInsufficientData, "no models shared between setups");
  std::vector<double> er, tr, ler, ltr;
  for (const auto& p : s.pairs) {
    er.push_back(p.energy_ratio);
    tr.push_back(p.throughput_ratio);
    ler.push_back(std::log(p.energy_ratio));
    ltr.push_back(std::log(p.throughput_ratio));
  }
  s.energy = geometric_stats(er);
  s.throughput = geometric_stats(tr);
  if (s.pairs.size() >= 2) {
    try {
      s.log_correlation = pearson(ltr, ler);
    } catch (const Error&) {
      s.log_correlation.reset();
    }
  }
  return s;
}

InputSizeScaling input_size_scaling(const std::map<std::string, std::vector<SizedEntry>>& groups) {
  InputSizeScaling out;
  for (const auto& [name, entries] : groups) {
    if (entries.size() < 2) {
      out.skipped.push_back(name);
      continue;
    }
    InputSizeGroup g;
    g.group = name;
    g.entries = entries;
    std::stable_sort(g.entries.begin(), g.entries.end(),
                     [](const SizedEntry& a, const SizedEntry& b) {
                       return a.input_size < b.input_size;
                     });
    const auto& base = g.entries.front();
    if (!(base.energy > 0.0)) {
      fail(ErrorCode::kInvalidArgument, "group " + name + " has nonpositive energy");
    }
    std::vector<double> pixels, energies;
    for (const auto& e : g.entries) {
      g.accuracy_deltas.push_back(e.accuracy - base.accuracy);
      g.energy_ratios.push_back(e.energy / base.energy);
      pixels.push_back(static_cast<double>(e.input_size) * static_cast<double>(e.input_size));
      energies.push_back(e.energy);
    }
    try {
      g.energy_per_pixel = linear_fit(pixels, energies);
    } catch (const Error&) {
      g.energy_per_pixel.reset();
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

std::string input_size_group_key(const std::string& model_id, std::int64_t input_size) {
  const std::string size = std::to_string(input_size);
  if (model_id.size() > size.size() + 1 && model_id.ends_with(size)) {
    const char sep = model_id[model_id.size() - size.size() - 1];
    if (sep == '_' || sep == '-' || sep == '@') {
      return model_id.substr(0, model_id.size() - size.size() - 1);
    }
  }
  return model_id;
}

std::vector<SetupCorrelation> cross_setup_correlation(
    const std::map<std::string, std::map<std::string, double>>& energy_by_setup) {
  if (energy_by_setup.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "cross-setup correlation needs at least two setups");
  }
  std::vector<SetupCorrelation> out;
  for (auto a = energy_by_setup.begin(); a != energy_by_setup.end(); ++a) {
    for (auto b = std::next(a); b != energy_by_setup.end(); ++b) {
      std::vector<double> xs, ys;
      for (const auto& [model, energy] : a->second) {
        auto it = b->second.find(model);
        if (it == b->second.end()) continue;
        xs.push_back(energy);
        ys.push_back(it->second);
      }
      if (xs.size() < 2) {
        fail(ErrorCode::kInsufficientData, "setups " + a->first + " and " + b->first +
                                               " share fewer than two models");
      }
      SetupCorrelation c;
      c.setup_a = a->first;
      c.setup_b = b->first;
      c.shared_models = xs.size();
      c.pearson = pearson(xs, ys);
      c.spearman = spearman(xs, ys);
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace enerprof
