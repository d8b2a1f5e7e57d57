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
#include <fstream>
#include <random>
#include <thread>

#include "doctest.h"
#include "enerprof/error.hpp"
#include "enerprof/telemetry.hpp"
#include "support.hpp"

using namespace enerprof;
using enerprof::testing::kEpoch;

namespace {

Clock fixed_clock(TimestampNs t) {
  return [t] { return t; };
}

}  // namespace

TEST_CASE("timestamps parse as UTC with 1-9 fractional digits") {
  CHECK(parse_timestamp("2024/01/01 00:00:00.000") == kEpoch);
  CHECK(parse_timestamp("2024/01/01 00:00:00") == kEpoch);
  CHECK(parse_timestamp("2024/01/01 00:00:01.5") == kEpoch + 1'500'000'000);
  CHECK(parse_timestamp("2024/01/01 00:00:00.000000001") == kEpoch + 1);
  CHECK(parse_timestamp("2024/02/29 12:30:45.250") ==
        kEpoch + (59LL * 86400 + 12 * 3600 + 30 * 60 + 45) * kNanosPerSecond + 250'000'000);
  CHECK_FALSE(parse_timestamp("2023/02/29 00:00:00.000"));
  CHECK_FALSE(parse_timestamp("2024/13/01 00:00:00.000"));
  CHECK_FALSE(parse_timestamp("2024/01/01 24:00:00.000"));
  CHECK_FALSE(parse_timestamp("2024-01-01 00:00:00.000"));
  CHECK_FALSE(parse_timestamp("2024/01/01 00:00:00.0000000001"));
}

TEST_CASE("timestamps format with milliseconds when exact") {
  CHECK(format_timestamp(kEpoch + 1'234'000'000) == "2024/01/01 00:00:01.234");
  CHECK(format_timestamp(kEpoch + 1'234'000'001) == "2024/01/01 00:00:01.234000001");
}

TEST_CASE("sensor lines in the vendor csv layout") {
  auto s = parse_sensor_line("2024/01/01 00:00:00.010, 213.45 W, 97 %, 12000 MiB, 61");
  REQUIRE(s);
  CHECK(s->t == kEpoch + 10'000'000);
  CHECK(s->power == 213.45);
  CHECK(s->util == 97);
  CHECK(s->mem_used == 12000);
  CHECK(s->temp == 61);

  auto bare = parse_sensor_line("2024/01/01 00:00:00.010, 80.5");
  REQUIRE(bare);
  CHECK(bare->power == 80.5);
  CHECK_FALSE(bare->util);

  auto na = parse_sensor_line("2024/01/01 00:00:00.010, 80.5 W, [N/A], 100 MiB, 40");
  REQUIRE(na);
  CHECK_FALSE(na->util);
  CHECK(na->mem_used == 100);

  CHECK_FALSE(parse_sensor_line("2024/01/01 00:00:00.010, [N/A], 97 %"));
  CHECK_FALSE(parse_sensor_line("2024/01/01 00:00:00.010, abc W"));
  CHECK_FALSE(parse_sensor_line("2024/01/01 00:00:00.010, 10 W, 9x %"));
  CHECK_FALSE(parse_sensor_line("garbage"));
}

TEST_CASE("formatted lines match the vendor layout") {
  PowerSample s{kEpoch + 10'000'000, 213.45, 97, 12000, 61};
  CHECK(format_sensor_line(s) == "2024/01/01 00:00:00.010, 213.45 W, 97 %, 12000 MiB, 61");
  PowerSample bare{kEpoch, 80.0, {}, {}, {}};
  CHECK(format_sensor_line(bare) == "2024/01/01 00:00:00.000, 80 W");
  PowerSample mid{kEpoch, 80.0, {}, {}, 55};
  CHECK(format_sensor_line(mid) == "2024/01/01 00:00:00.000, 80 W, [N/A], [N/A], 55");
}

TEST_CASE("logs skip headers and blanks, count malformed lines and sort") {
  const std::string text =
      "timestamp, power.draw [W], utilization.gpu [%], memory.used [MiB], temperature.gpu\n"
      "2024/01/01 00:00:00.020, 3 W\n"
      "\n"
      "2024/01/01 00:00:00.000, 1 W\n"
      "nonsense line\n"
      "2024/01/01 00:00:00.010, 2 W\r\n";
  const auto parsed = parse_sensor_log(text);
  REQUIRE(parsed.samples.size() == 3);
  CHECK(parsed.malformed == 1);
  CHECK(parsed.samples[0].power == 1.0);
  CHECK(parsed.samples[2].power == 3.0);
  CHECK_THROWS_AS(parse_sensor_log("only junk\n"), Error);
}

TEST_CASE("serialize then parse is the identity on random sample lists") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> power(0.0, 700.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PowerSample> samples;
    TimestampNs t = kEpoch + static_cast<TimestampNs>(rng() % 1'000'000'000'000ULL);
    const auto n = 1 + rng() % 50;
    for (std::size_t i = 0; i < n; ++i) {
      const TimestampNs prev = t;
      t += 1 + static_cast<TimestampNs>(rng() % 50'000'000);
      if (rng() % 2 && t - t % 1'000'000 > prev) t -= t % 1'000'000;
      PowerSample s{t, power(rng), {}, {}, {}};
      if (rng() % 2) s.power = std::round(s.power * 100.0) / 100.0;
      if (rng() % 3) s.util = static_cast<int>(rng() % 101);
      if (rng() % 3) s.mem_used = static_cast<int>(rng() % 80000);
      if (rng() % 3) s.temp = static_cast<int>(rng() % 100);
      samples.push_back(s);
    }
    const auto parsed = parse_sensor_log(serialize_sensor_log(samples));
    CHECK(parsed.malformed == 0);
    CHECK(parsed.samples == samples);
  }
}

TEST_CASE("synthetic profiles") {
  const auto segs = SyntheticProfile::parse("10:200,5:150");
  CHECK(segs.duration() == 15.0);
  CHECK(segs.power_at(0.0) == 200.0);
  CHECK(segs.power_at(9.999) == 200.0);
  CHECK(segs.power_at(12.0) == 150.0);
  CHECK(segs.power_at(99.0) == 150.0);
  const auto ramp = SyntheticProfile::parse("ramp:0:100:10");
  CHECK(ramp.power_at(5.0) == doctest::Approx(50.0));
  CHECK(ramp.power_at(20.0) == 100.0);
  CHECK_THROWS_AS(SyntheticProfile::parse("10:-5"), Error);
  CHECK_THROWS_AS(SyntheticProfile::parse("ramp:1:2"), Error);
  CHECK_THROWS_AS(SyntheticProfile::parse(""), Error);
}

TEST_CASE("constant synthetic profile emits exactly its power, sorted, at the rate") {
  auto sampler = start_sampler({100.0, SamplerSource::kSynthetic, "10:200"}, fixed_clock(kEpoch));
  const auto capture = sampler->stop();
  REQUIRE(capture.samples.size() == 1001);
  CHECK(capture.samples.front().t == kEpoch);
  CHECK(capture.samples.back().t == kEpoch + 10 * kNanosPerSecond);
  CHECK(capture.gaps.empty());
  for (const auto& s : capture.samples) CHECK(s.power == 200.0);
  CHECK(std::is_sorted(capture.samples.begin(), capture.samples.end(),
                       [](const PowerSample& a, const PowerSample& b) { return a.t < b.t; }));
}

TEST_CASE("synthetic output is sorted for random profiles") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::string spec;
    const int segments = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < segments; ++i) {
      if (i) spec += ',';
      spec += std::to_string(1 + rng() % 3) + ":" + std::to_string(rng() % 400);
    }
    TimestampNs now = kEpoch;
    auto sampler = start_sampler({10.0 + static_cast<double>(rng() % 200), SamplerSource::kSynthetic, spec},
                                 [&now] { return now; });
    now += static_cast<TimestampNs>(rng() % 20) * kNanosPerSecond;
    const auto capture = sampler->stop();
    CHECK(std::is_sorted(capture.samples.begin(), capture.samples.end(),
                         [](const PowerSample& a, const PowerSample& b) { return a.t < b.t; }));
    CHECK(capture.samples.back().t >= now);
  }
}

TEST_CASE("stopping a sampler twice is an error") {
  auto sampler = start_sampler({100.0, SamplerSource::kSynthetic, "1:50"}, fixed_clock(kEpoch));
  sampler->stop();
  try {
    sampler->stop();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kState);
  }
}

TEST_CASE("gaps are intervals longer than five periods") {
  std::vector<PowerSample> s;
  for (TimestampNs t : {0LL, 10LL, 20LL, 80LL, 90LL}) s.push_back({kEpoch + t * 1'000'000, 1.0, {}, {}, {}});
  const auto gaps = find_gaps(s, 100.0);
  REQUIRE(gaps.size() == 1);
  CHECK(gaps[0].from == kEpoch + 20'000'000);
  CHECK(gaps[0].to == kEpoch + 80'000'000);
  s[3].t = kEpoch + 70'000'000;
  CHECK(find_gaps(s, 100.0).empty());
}

TEST_CASE("replay sampler reads the whole file, missing files fail") {
  enerprof::testing::TempDir dir;
  const auto path = dir / "power.log";
  {
    std::ofstream out(path);
    out << "2024/01/01 00:00:00.000, 100 W\n2024/01/01 00:00:00.010, 110 W\nbad\n";
  }
  auto sampler = start_sampler({100.0, SamplerSource::kReplayFile, path.string()});
  const auto capture = sampler->stop();
  CHECK(capture.samples.size() == 2);
  CHECK(capture.malformed == 1);
  try {
    start_sampler({100.0, SamplerSource::kReplayFile, (dir / "missing.log").string()});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
}

TEST_CASE("live sampler parses the telemetry command's stream") {
  const std::string cmd =
      "sh -c 'while true; do date -u \"+%Y/%m/%d %H:%M:%S.%3N, 123.5 W, 50 %, 1000 MiB, 40\"; "
      "sleep 0.0{period_ms}; done'";
  auto sampler = start_sampler({100.0, SamplerSource::kLiveCommand, cmd});
  REQUIRE(sampler->wait_ready(std::chrono::seconds(5)));
  std::this_thread::sleep_for(std::chrono::milliseconds(100));
  const auto capture = sampler->stop();
  CHECK(capture.samples.size() >= 2);
  for (const auto& s : capture.samples) {
    CHECK(s.power == 123.5);
    CHECK(s.util == 50);
    CHECK(std::llabs(s.t - system_now()) < 60 * kNanosPerSecond);
  }
}

TEST_CASE("live sampler reports a failing command") {
  auto sampler = start_sampler({100.0, SamplerSource::kLiveCommand, "sh -c 'exit 3'"});
  CHECK_FALSE(sampler->wait_ready(std::chrono::seconds(5)));
  try {
    sampler->stop();
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSampler);
  }
  CHECK_THROWS_AS(start_sampler({100.0, SamplerSource::kLiveCommand, "no-such-telemetry-tool-xyz"}),
                  Error);
}

TEST_CASE("invalid sampler configs") {
  CHECK_THROWS_AS(start_sampler({0.0, SamplerSource::kSynthetic, "1:1"}), Error);
  CHECK(parse_sampler_source("live") == SamplerSource::kLiveCommand);
  CHECK(parse_sampler_source("replay") == SamplerSource::kReplayFile);
  CHECK(parse_sampler_source("synthetic") == SamplerSource::kSynthetic);
  CHECK_FALSE(parse_sampler_source("nvml"));
}
