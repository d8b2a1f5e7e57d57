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

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "enerprof/types.hpp"

namespace enerprof {

inline constexpr double kDefaultSampleRate = 100.0;  // Hz
// Intervals longer than this many expected periods are reported as gaps.
inline constexpr double kGapFactor = 5.0;

// "YYYY/MM/DD HH:MM:SS[.fraction]" in UTC, 1-9 fractional digits.
std::optional<TimestampNs> parse_timestamp(std::string_view text);
// Millisecond precision when exact, nanosecond precision otherwise.
std::string format_timestamp(TimestampNs t);

// One line of the sensor log:
//   YYYY/MM/DD HH:MM:SS.mmm, <float> W, <int> %, <int> MiB, <int>
// Trailing fields are optional; unit suffixes may be omitted and "[N/A]"
// reads as absent. Columns past the fifth are ignored.
std::optional<PowerSample> parse_sensor_line(std::string_view line);
std::string format_sensor_line(const PowerSample& sample);

struct ParsedLog {
  std::vector<PowerSample> samples;
  std::size_t malformed = 0;
};

// Throws kParse ("no samples") when no line is well formed.
ParsedLog parse_sensor_log(std::string_view text);
std::string serialize_sensor_log(std::span<const PowerSample> samples);

// Piecewise-constant segments, or a linear ramp. Past the end the final
// power is held.
class SyntheticProfile {
 public:
  struct Segment {
    double duration = 0.0;  // s
    double power = 0.0;     // W
  };
  struct Ramp {
    double start_power = 0.0;
    double end_power = 0.0;
    double duration = 0.0;
  };

  static SyntheticProfile constant(double power, double duration);
  static SyntheticProfile segments(std::vector<Segment> segments);
  static SyntheticProfile ramp(double start_power, double end_power, double duration);
  // "10:200,5:150" (seconds:watts pairs) or "ramp:<start W>:<end W>:<seconds>".
  static SyntheticProfile parse(std::string_view spec);

  double power_at(double seconds) const;
  double duration() const;

 private:
  std::variant<std::vector<Segment>, Ramp> shape_;
};

enum class SamplerSource { kLiveCommand, kReplayFile, kSynthetic };

std::optional<SamplerSource> parse_sampler_source(std::string_view name);

// Placeholder in live commands replaced by the sampling period in ms.
inline constexpr std::string_view kPeriodPlaceholder = "{period_ms}";
inline constexpr std::string_view kDefaultLiveCommand =
    "nvidia-smi --query-gpu=timestamp,power.draw,utilization.gpu,memory.used,"
    "temperature.gpu --format=csv,noheader -lms {period_ms}";

struct SamplerConfig {
  double rate = kDefaultSampleRate;
  SamplerSource source = SamplerSource::kSynthetic;
  // Command line, replay file path, or synthetic profile spec.
  std::string source_spec;
};

struct SampleGap {
  TimestampNs from = 0;
  TimestampNs to = 0;
};

std::vector<SampleGap> find_gaps(std::span<const PowerSample> samples, double rate);

struct SampleCapture {
  std::vector<PowerSample> samples;
  std::vector<SampleGap> gaps;
  std::size_t malformed = 0;
};

using Clock = std::function<TimestampNs()>;
TimestampNs system_now();

class Sampler {
 public:
  virtual ~Sampler() = default;

  // Blocks until the first sample is available (live sources) or the
  // timeout passes. Returns false on timeout.
  virtual bool wait_ready(std::chrono::milliseconds timeout) { (void)timeout; return true; }

  // Samples sorted by t plus the gap report. Throws kState on a second call
  // and kSampler when the source failed while running.
  SampleCapture stop();

  double rate() const { return rate_; }

 protected:
  explicit Sampler(double rate) : rate_(rate) {}
  virtual std::vector<PowerSample> collect(std::size_t& malformed) = 0;

 private:
  double rate_;
  bool stopped_ = false;
};

// Throws kIo when the source cannot be reached (missing replay file,
// command that cannot be spawned) and kInvalidArgument for bad configs.
std::unique_ptr<Sampler> start_sampler(const SamplerConfig& config,
                                       Clock clock = system_now);

}  // namespace enerprof
