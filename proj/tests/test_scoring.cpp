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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "enerprof/error.hpp"
#include "enerprof/scoring.hpp"
#include "json.hpp"

using namespace enerprof;

namespace {

std::vector<ScoreCandidate> random_candidates(std::mt19937_64& rng, std::size_t n) {
  std::vector<ScoreCandidate> c;
  for (std::size_t i = 0; i < n; ++i) {
    c.push_back({"m" + std::to_string(rng() % 100000), static_cast<double>(rng() % 10000) / 100.0,
                 std::pow(10.0, static_cast<double>(rng() % 5000) / 1000.0 - 4.0)});
  }
  return c;
}

std::vector<std::string> ids(const std::vector<ScoredModel>& ranked) {
  std::vector<std::string> out;
  for (const auto& m : ranked) out.push_back(m.model_id);
  return out;
}

}  // namespace

TEST_CASE("manhattan at W=0 is the accuracy") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> acc(0.0, 100.0), e(0.0, 50.0), n(1e-3, 100.0);
  for (int i = 0; i < 10000; ++i) {
    const double a = acc(rng);
    CHECK(manhattan_score(a, e(rng), {0.0, n(rng), 0.0}) == a);
    CHECK(manhattan_score(a, e(rng), {0.0, n(rng), 0.0}, ManhattanScale::kBalanced) == a);
  }
}

TEST_CASE("manhattan literal and balanced values") {
  CHECK(manhattan_score(80.0, 0.5, {0.5, 1.0, 0.0}) == doctest::Approx(100.0 - (0.25 + 10.0)));
  CHECK(manhattan_score(80.0, 0.5, {0.5, 1.0, 0.0}, ManhattanScale::kBalanced) ==
        doctest::Approx(100.0 - (25.0 + 10.0)));
  CHECK(manhattan_score(100.0, 0.0, {0.7, 2.0, 0.0}) == 100.0);
  CHECK_THROWS_AS(manhattan_score(80.0, 1.0, {0.5, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(manhattan_score(80.0, 1.0, {1.5, 1.0, 0.0}), Error);
  CHECK_THROWS_AS(manhattan_score(80.0, -1.0, {0.5, 1.0, 0.0}), Error);
}

TEST_CASE("manhattan is monotone in energy and accuracy") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const ScoreParams p{u(rng), 0.01 + 10 * u(rng), 0.0};
    const double a = 100 * u(rng), e = 10 * u(rng), da = 5 * u(rng), de = u(rng);
    for (auto scale : {ManhattanScale::kLiteral, ManhattanScale::kBalanced}) {
      CHECK(manhattan_score(a, e + de, p, scale) <= manhattan_score(a, e, p, scale));
      CHECK(manhattan_score(std::min(100.0, a + da), e, p, scale) >= manhattan_score(a, e, p, scale));
    }
  }
}

TEST_CASE("ratio score filters below the threshold") {
  CHECK(ratio_score(80.0, 0.5, {0.5, 1.0, 0.0}) == 160.0);
  CHECK_FALSE(ratio_score(79.9, 0.5, {0.5, 1.0, 80.0}));
  CHECK(ratio_score(80.0, 0.5, {0.5, 1.0, 80.0}) == 160.0);
  CHECK_THROWS_AS(ratio_score(80.0, 0.0, {}), Error);
}

TEST_CASE("rankings at W=0 and W=1 equal accuracy-only and energy-only orderings") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    auto c = random_candidates(rng, 2 + rng() % 40);
    RankOptions opt;
    opt.params.norm = *auto_norm(c, 0.0);
    opt.scale = trial % 2 ? ManhattanScale::kBalanced : ManhattanScale::kLiteral;

    auto by_acc = c;
    std::sort(by_acc.begin(), by_acc.end(), [](const auto& a, const auto& b) {
      return a.accuracy != b.accuracy ? a.accuracy > b.accuracy : a.model_id < b.model_id;
    });
    auto by_energy = c;
    std::sort(by_energy.begin(), by_energy.end(), [](const auto& a, const auto& b) {
      return a.energy != b.energy ? a.energy < b.energy : a.model_id < b.model_id;
    });
    std::vector<std::string> acc_ids, energy_ids;
    for (const auto& x : by_acc) acc_ids.push_back(x.model_id);
    for (const auto& x : by_energy) energy_ids.push_back(x.model_id);

    opt.params.weight = 0.0;
    CHECK(ids(rank(c, opt)) == acc_ids);
    opt.params.weight = 1.0;
    CHECK(ids(rank(c, opt)) == energy_ids);
  }
}

TEST_CASE("ratio ranking ignores a common energy scale and drops filtered models") {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 1000; ++trial) {
    auto c = random_candidates(rng, 2 + rng() % 40);
    RankOptions opt;
    opt.metric = ScoreMetric::kRatio;
    opt.params.min_accuracy = static_cast<double>(rng() % 60);
    if (!auto_norm(c, opt.params.min_accuracy)) {
      CHECK_THROWS_AS(rank(c, opt), Error);
      continue;
    }
    const auto ranked = rank(c, opt);
    for (const auto& m : ranked) CHECK(m.accuracy >= opt.params.min_accuracy);
    std::size_t kept = 0;
    for (const auto& x : c) kept += x.accuracy >= opt.params.min_accuracy;
    CHECK(ranked.size() == kept);
    auto scaled = c;
    for (auto& x : scaled) x.energy *= 4.0;
    CHECK(ids(rank(scaled, opt)) == ids(ranked));
  }
}

TEST_CASE("auto norm and top n") {
  std::vector<ScoreCandidate> c = {{"a", 90, 2.0}, {"b", 70, 5.0}, {"c", 85, 1.0}};
  CHECK(auto_norm(c, 0.0) == 5.0);
  CHECK(auto_norm(c, 80.0) == 2.0);
  CHECK_FALSE(auto_norm(c, 95.0));
  RankOptions opt;
  opt.top_n = 2;
  opt.params.norm = 5.0;
  CHECK(rank(c, opt).size() == 2);
}

TEST_CASE("score grid is log-spaced in energy with exact endpoints") {
  RankOptions opt;
  opt.params.norm = 1.0;
  const auto g = score_grid(opt, 1e-3, 10.0, 50.0, 100.0, 5);
  CHECK(g.energies.front() == 1e-3);
  CHECK(g.energies.back() == 10.0);
  CHECK(g.energies[2] == doctest::Approx(0.1));
  CHECK(g.accuracies == std::vector<double>{50.0, 62.5, 75.0, 87.5, 100.0});
  CHECK(g.values[4][0] == manhattan_score(100.0, 1e-3, opt.params));
  opt.metric = ScoreMetric::kRatio;
  opt.params.min_accuracy = 70.0;
  const auto r = score_grid(opt, 1e-3, 10.0, 50.0, 100.0, 5);
  CHECK(std::isnan(r.values[0][0]));
  CHECK(r.values[2][0] == 75.0 / 1e-3);
  CHECK_THROWS_AS(score_grid(opt, 0.0, 1.0, 0.0, 1.0, 5), Error);
}

TEST_CASE("shared score vectors") {
  std::ifstream in(std::string(ENERPROF_SHARE_DIR) + "/score_vectors.json");
  REQUIRE(in);
  const auto doc = nlohmann::json::parse(in);
  const double tol = doc.at("tolerance").get<double>();
  std::size_t n = 0;
  for (const auto& v : doc.at("vectors")) {
    const ScoreParams p{v.at("weight").get<double>(), v.at("norm").get<double>(),
                        v.at("min_accuracy").get<double>()};
    const double a = v.at("accuracy").get<double>(), e = v.at("energy").get<double>();
    CHECK(std::abs(manhattan_score(a, e, p) - v.at("manhattan").get<double>()) <= tol);
    CHECK(std::abs(manhattan_score(a, e, p, ManhattanScale::kBalanced) -
                   v.at("manhattan_balanced").get<double>()) <= tol);
    if (v.contains("ratio")) {
      const auto r = ratio_score(a, e, p);
      if (v.at("ratio").is_null()) {
        CHECK_FALSE(r);
      } else {
        REQUIRE(r);
        CHECK(std::abs(*r - v.at("ratio").get<double>()) <= tol * std::max(1.0, std::abs(*r)));
      }
    }
    ++n;
  }
  CHECK(n > 100);
}
