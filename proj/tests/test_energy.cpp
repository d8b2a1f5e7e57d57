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

#include <cmath>
#include <random>

#include "doctest.h"
#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"
#include "support.hpp"

using namespace enerprof;
using enerprof::testing::kEpoch;
using enerprof::testing::sample_grid;

namespace {

constexpr TimestampNs kSecond = kNanosPerSecond;

// Midpoint Riemann sum of the continuous profile over [0, seconds].
template <typename F>
double riemann(F power, double seconds, double rate) {
  const auto n = static_cast<std::int64_t>(seconds * rate + 0.5);
  const double h = seconds / static_cast<double>(n);
  double sum = 0.0;
  for (std::int64_t i = 0; i < n; ++i) sum += power((static_cast<double>(i) + 0.5) * h);
  return sum * h;
}

}  // namespace

TEST_CASE("constant power integrates exactly") {
  const auto s = sample_grid(kEpoch, 10.0, 100.0, [](double) { return 200.0; });
  CHECK(integrate_energy(s, kEpoch, kEpoch + 10 * kSecond) == doctest::Approx(2000.0).epsilon(1e-12));
}

TEST_CASE("linear ramps integrate exactly, including interpolated boundaries") {
  const auto s = sample_grid(kEpoch, 10.0, 100.0, [](double t) { return 10.0 * t; });
  CHECK(integrate_energy(s, kEpoch, kEpoch + 10 * kSecond) == doctest::Approx(500.0).epsilon(1e-9));
  // [2.345, 7.891] s: 5 * (t1^2 - t0^2)
  const double expect = 5.0 * (7.891 * 7.891 - 2.345 * 2.345);
  CHECK(integrate_energy(s, kEpoch + 2'345'000'000, kEpoch + 7'891'000'000) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("boundaries outside the samples hold the nearest value") {
  std::vector<PowerSample> s = {{kEpoch + kSecond, 100.0, {}, {}, {}},
                                {kEpoch + 2 * kSecond, 200.0, {}, {}, {}}};
  // 1 s at 100 held, 1 s trapezoid 150, 1 s at 200 held
  CHECK(integrate_energy(s, kEpoch, kEpoch + 3 * kSecond) == doctest::Approx(450.0));
}

TEST_CASE("integration is additive over adjacent windows") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> p(50.0, 300.0);
  std::vector<PowerSample> s;
  TimestampNs t = kEpoch;
  for (int i = 0; i < 500; ++i) {
    t += 1'000'000 + static_cast<TimestampNs>(rng() % 20'000'000);
    s.push_back({t, p(rng), {}, {}, {}});
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TimestampNs> cuts = {s.front().t + static_cast<TimestampNs>(rng() % (t - kEpoch)),
                                     s.front().t + static_cast<TimestampNs>(rng() % (t - kEpoch)),
                                     s.front().t + static_cast<TimestampNs>(rng() % (t - kEpoch))};
    std::sort(cuts.begin(), cuts.end());
    if (cuts[0] == cuts[1] || cuts[1] == cuts[2]) continue;
    const double a = integrate_energy(s, cuts[0], cuts[1]);
    const double b = integrate_energy(s, cuts[1], cuts[2]);
    const double whole = integrate_energy(s, cuts[0], cuts[2]);
    CHECK(a >= 0.0);
    CHECK(a + b == doctest::Approx(whole).epsilon(1e-12));
  }
}

TEST_CASE("random smooth profiles match a 10x-density Riemann oracle within 1%") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double base = 100.0 + 200.0 * u(rng);
    double amp[4], freq[4], phase[4];
    for (int k = 0; k < 4; ++k) {
      amp[k] = 20.0 * u(rng);
      freq[k] = 0.05 + 5.0 * u(rng);
      phase[k] = 6.28 * u(rng);
    }
    auto power = [&](double t) {
      double v = base;
      for (int k = 0; k < 4; ++k) v += amp[k] * std::sin(6.283185307179586 * freq[k] * t + phase[k]);
      return v;
    };
    const double seconds = 2.0 + 10.0 * u(rng);
    const auto s = sample_grid(kEpoch, seconds, 100.0, power);
    const double got = integrate_energy(s, kEpoch, s.back().t);
    const double oracle = riemann(power, static_cast<double>(s.back().t - kEpoch) / 1e9, 1000.0);
    CHECK(std::abs(got - oracle) / oracle < 0.01);
  }
}

TEST_CASE("integration errors") {
  const auto s = sample_grid(kEpoch, 1.0, 100.0, [](double) { return 1.0; });
  CHECK_THROWS_AS(integrate_energy(s, kEpoch + 5, kEpoch + 5), Error);
  std::vector<PowerSample> one = {s.front()};
  try {
    integrate_energy(one, kEpoch, kEpoch + kSecond);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientData);
  }
}

TEST_CASE("derive_metrics uses only the measured window") {
  RunMeasurement run;
  run.model_id = "m";
  run.setup = enerprof::testing::test_setup();
  run.batch_size = 8;
  run.issued_at = kEpoch + 2 * kSecond;
  for (int i = 1; i <= 10; ++i) run.batch_marks.push_back(run.issued_at + i * kSecond);
  // 1000 W outside the window, 100 W inside
  run.samples = sample_grid(kEpoch, 14.0, 100.0, [](double t) {
    return (t >= 2.0 && t <= 12.0) ? 100.0 : 1000.0;
  });
  const auto m = derive_metrics(run);
  CHECK(m.wall_time == doctest::Approx(10.0));
  CHECK(m.images_processed == 80);
  CHECK(m.energy_per_image == doctest::Approx(1000.0 / 80.0));
  CHECK(m.throughput == doctest::Approx(8.0));
  CHECK(m.latency == doctest::Approx(1.0));
  CHECK(m.avg_power == doctest::Approx(100.0));
  CHECK(m.batch_size == 8);
}

TEST_CASE("avg power identity holds for random totals") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const auto m = metrics_from_totals(1.0 + 1e4 * u(rng), 1 + static_cast<std::int64_t>(rng() % 1000),
                                       1 + static_cast<std::int64_t>(rng() % 512), 0.1 + 100.0 * u(rng));
    CHECK(std::abs(m.throughput * m.energy_per_image - m.avg_power) <= 1e-6 * m.avg_power);
  }
}

TEST_CASE("tdp headroom flags averages above 1.02 x TDP") {
  EnergyMetrics m;
  m.avg_power = 400.0 * 1.02;
  CHECK_FALSE(tdp_headroom(m, enerprof::testing::test_setup(400.0)).anomalous);
  m.avg_power = 400.0 * 1.0201;
  const auto h = tdp_headroom(m, enerprof::testing::test_setup(400.0));
  CHECK(h.anomalous);
  CHECK(h.ratio == doctest::Approx(1.0201));
}

TEST_CASE("best batch picks the lowest energy, ties to the smaller batch") {
  std::vector<EnergyMetrics> c(3);
  c[0].batch_size = 1;
  c[0].energy_per_image = 2.0;
  c[1].batch_size = 4;
  c[1].energy_per_image = 1.0;
  c[2].batch_size = 2;
  c[2].energy_per_image = 1.0;
  CHECK(best_batch(c).batch_size == 2);
  CHECK_THROWS_AS(best_batch(std::span<const EnergyMetrics>()), Error);
}
