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

#include "enerprof/telemetry.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "enerprof/error.hpp"
#include "enerprof/process.hpp"

namespace enerprof {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_digits(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view strip_unit(std::string_view field, std::string_view unit) {
  field = trim(field);
  if (field.size() >= unit.size() &&
      field.substr(field.size() - unit.size()) == unit) {
    field = trim(field.substr(0, field.size() - unit.size()));
  }
  return field;
}

bool parse_double_field(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

// Absent when the field is missing or "[N/A]"; false when garbage.
bool parse_optional_int(std::string_view field, std::string_view unit,
                        std::optional<int>& out) {
  field = strip_unit(field, unit);
  if (field.empty() || field == "[N/A]" || field == "N/A") {
    out.reset();
    return true;
  }
  bool negative = false;
  if (field.front() == '-') {
    negative = true;
    field.remove_prefix(1);
  }
  int v = 0;
  if (!parse_digits(field, v)) return false;
  out = negative ? -v : v;
  return true;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, ptr);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open replay file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void sort_by_time(std::vector<PowerSample>& samples) {
  std::stable_sort(samples.begin(), samples.end(),
                   [](const PowerSample& a, const PowerSample& b) { return a.t < b.t; });
}

std::int64_t period_ns(double rate) {
  return std::llround(static_cast<double>(kNanosPerSecond) / rate);
}

class ReplaySampler final : public Sampler {
 public:
  ReplaySampler(double rate, const std::string& path) : Sampler(rate) {
    parsed_ = parse_sensor_log(read_file(path));
  }

 protected:
  std::vector<PowerSample> collect(std::size_t& malformed) override {
    malformed = parsed_.malformed;
    return std::move(parsed_.samples);
  }

 private:
  ParsedLog parsed_;
};

class SyntheticSampler final : public Sampler {
 public:
  SyntheticSampler(double rate, SyntheticProfile profile, Clock clock)
      : Sampler(rate), profile_(std::move(profile)), clock_(std::move(clock)),
        start_(clock_()) {}

 protected:
  // Emits the grid start + i/rate covering the profile and the time the
  // sampler was running, whichever is longer.
  std::vector<PowerSample> collect(std::size_t& malformed) override {
    malformed = 0;
    const double profile_ns = profile_.duration() * static_cast<double>(kNanosPerSecond);
    const double span_ns =
        std::max(profile_ns, static_cast<double>(clock_() - start_));
    const double step = static_cast<double>(kNanosPerSecond) / rate();
    const auto count = static_cast<std::size_t>(std::floor(span_ns / step + 1e-9)) + 1;
    std::vector<PowerSample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto offset = std::llround(static_cast<double>(i) * step);
      PowerSample s;
      s.t = start_ + offset;
      s.power = profile_.power_at(static_cast<double>(offset) /
                                  static_cast<double>(kNanosPerSecond));
      out.push_back(s);
    }
    return out;
  }

 private:
  SyntheticProfile profile_;
  Clock clock_;
  TimestampNs start_;
};

class LiveSampler final : public Sampler {
 public:
  LiveSampler(double rate, const std::string& command_template) : Sampler(rate) {
    std::string command = command_template;
    const auto period_ms = std::to_string(std::max<std::int64_t>(1, period_ns(rate) / 1'000'000));
    for (auto pos = command.find(kPeriodPlaceholder); pos != std::string::npos;
         pos = command.find(kPeriodPlaceholder, pos + period_ms.size())) {
      command.replace(pos, kPeriodPlaceholder.size(), period_ms);
    }
    // Vendor tools print local time; pin it to UTC to share the host clock.
    child_ = ChildProcess::spawn(split_command(command), {"TZ=UTC0"},
                                 /*discard_stderr=*/true);
    reader_ = std::thread([this] { read_loop(); });
  }

  ~LiveSampler() override { shutdown(); }

  bool wait_ready(std::chrono::milliseconds timeout) override {
    std::unique_lock lock(mu_);
    return cv_.wait_for(lock, timeout, [this] { return !samples_.empty() || ended_; }) &&
           !samples_.empty();
  }

 protected:
  std::vector<PowerSample> collect(std::size_t& malformed) override {
    shutdown();
    std::lock_guard lock(mu_);
    if (failed_) fail(ErrorCode::kSampler, "telemetry command failed: " + failure_);
    if (samples_.empty()) fail(ErrorCode::kSampler, "telemetry command produced no samples");
    malformed = malformed_;
    return std::move(samples_);
  }

 private:
  // Only touches the child's output side; the pid is managed by shutdown().
  void read_loop() {
    std::string line;
    while (!stopping_) {
      const auto status = child_.read_line(line, std::chrono::milliseconds(50));
      if (status == ChildProcess::ReadStatus::kTimeout) continue;
      if (status == ChildProcess::ReadStatus::kEof) break;
      if (trim(line).empty()) continue;
      auto sample = parse_sensor_line(line);
      std::lock_guard lock(mu_);
      if (sample) {
        samples_.push_back(*sample);
      } else {
        ++malformed_;
      }
      cv_.notify_all();
    }
    std::lock_guard lock(mu_);
    exited_early_ = !stopping_;
    ended_ = true;
    cv_.notify_all();
  }

  void shutdown() {
    if (!reader_.joinable()) return;
    stopping_ = true;
    child_.terminate();
    reader_.join();
    const int status = child_.wait();
    std::lock_guard lock(mu_);
    if (exited_early_ && status != 0) {
      failed_ = true;
      failure_ = "exited with status " + std::to_string(status);
    }
  }

  ChildProcess child_;
  std::thread reader_;
  std::atomic<bool> stopping_{false};
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<PowerSample> samples_;
  std::size_t malformed_ = 0;
  bool ended_ = false;
  bool exited_early_ = false;
  bool failed_ = false;
  std::string failure_;
};

}  // namespace

std::optional<TimestampNs> parse_timestamp(std::string_view text) {
  text = trim(text);
  // YYYY/MM/DD HH:MM:SS
  if (text.size() < 19 || text[4] != '/' || text[7] != '/' || text[10] != ' ' ||
      text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, s;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), mo) ||
      !parse_digits(text.substr(8, 2), d) || !parse_digits(text.substr(11, 2), h) ||
      !parse_digits(text.substr(14, 2), mi) || !parse_digits(text.substr(17, 2), s)) {
    return std::nullopt;
  }
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  std::int64_t fraction_ns = 0;
  auto rest = text.substr(19);
  if (!rest.empty()) {
    if (rest.front() != '.' || rest.size() < 2 || rest.size() > 10) return std::nullopt;
    rest.remove_prefix(1);
    int digits = 0;
    if (!parse_digits(rest, digits)) return std::nullopt;
    fraction_ns = digits;
    for (std::size_t i = rest.size(); i < 9; ++i) fraction_ns *= 10;
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  const std::int64_t day_count = sys_days(ymd).time_since_epoch().count();
  const std::int64_t secs = day_count * 86400 + h * 3600 + mi * 60 + s;
  return secs * kNanosPerSecond + fraction_ns;
}

std::string format_timestamp(TimestampNs t) {
  using namespace std::chrono;
  const std::int64_t day_ns = 86400 * kNanosPerSecond;
  std::int64_t days_since = t / day_ns;
  std::int64_t in_day = t % day_ns;
  if (in_day < 0) {
    in_day += day_ns;
    --days_since;
  }
  const year_month_day ymd{sys_days{days{days_since}}};
  const std::int64_t secs = in_day / kNanosPerSecond;
  const std::int64_t frac = in_day % kNanosPerSecond;
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%04d/%02u/%02u %02lld:%02lld:%02lld",
                              static_cast<int>(ymd.year()),
                              static_cast<unsigned>(ymd.month()),
                              static_cast<unsigned>(ymd.day()),
                              static_cast<long long>(secs / 3600),
                              static_cast<long long>(secs / 60 % 60),
                              static_cast<long long>(secs % 60));
  std::string out(buf, static_cast<std::size_t>(n));
  if (frac % 1'000'000 == 0) {
    std::snprintf(buf, sizeof buf, ".%03lld", static_cast<long long>(frac / 1'000'000));
  } else {
    std::snprintf(buf, sizeof buf, ".%09lld", static_cast<long long>(frac));
  }
  return out + buf;
}

std::optional<PowerSample> parse_sensor_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() < 2) return std::nullopt;

  PowerSample s;
  auto t = parse_timestamp(fields[0]);
  if (!t || *t <= 0) return std::nullopt;
  s.t = *t;
  if (!parse_double_field(strip_unit(fields[1], "W"), s.power) || s.power < 0.0) {
    return std::nullopt;
  }
  if (fields.size() > 2 && !parse_optional_int(fields[2], "%", s.util)) return std::nullopt;
  if (fields.size() > 3 && !parse_optional_int(fields[3], "MiB", s.mem_used)) {
    return std::nullopt;
  }
  if (fields.size() > 4 && !parse_optional_int(fields[4], "", s.temp)) return std::nullopt;
  return s;
}

std::string format_sensor_line(const PowerSample& sample) {
  std::string out = format_timestamp(sample.t);
  out += ", ";
  append_double(out, sample.power);
  out += " W";
  // Later columns are positional, so absent middle fields print as [N/A].
  const std::optional<int>* optional_fields[] = {&sample.util, &sample.mem_used,
                                                 &sample.temp};
  const char* units[] = {" %", " MiB", ""};
  int last = -1;
  for (int i = 0; i < 3; ++i) {
    if (optional_fields[i]->has_value()) last = i;
  }
  for (int i = 0; i <= last; ++i) {
    out += ", ";
    if (optional_fields[i]->has_value()) {
      out += std::to_string(**optional_fields[i]);
      out += units[i];
    } else {
      out += "[N/A]";
    }
  }
  return out;
}

ParsedLog parse_sensor_log(std::string_view text) {
  ParsedLog log;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    const auto line = trim(text.substr(start, nl - start));
    start = nl + 1;
    if (line.empty() || line.starts_with("timestamp")) continue;
    if (auto s = parse_sensor_line(line)) {
      log.samples.push_back(*s);
    } else {
      ++log.malformed;
    }
  }
  if (log.samples.empty()) fail(ErrorCode::kParse, "no samples");
  sort_by_time(log.samples);
  return log;
}

std::string serialize_sensor_log(std::span<const PowerSample> samples) {
  std::string out;
  for (const auto& s : samples) {
    out += format_sensor_line(s);
    out += '\n';
  }
  return out;
}

SyntheticProfile SyntheticProfile::constant(double power, double duration) {
  return segments({{duration, power}});
}

SyntheticProfile SyntheticProfile::segments(std::vector<Segment> segments) {
  if (segments.empty()) fail(ErrorCode::kInvalidArgument, "profile has no segments");
  for (const auto& seg : segments) {
    if (!(seg.duration > 0.0)) fail(ErrorCode::kInvalidArgument, "segment duration must be positive");
    if (!(seg.power >= 0.0)) fail(ErrorCode::kInvalidArgument, "segment power must be nonnegative");
  }
  SyntheticProfile p;
  p.shape_ = std::move(segments);
  return p;
}

SyntheticProfile SyntheticProfile::ramp(double start_power, double end_power,
                                        double duration) {
  if (!(duration > 0.0)) fail(ErrorCode::kInvalidArgument, "ramp duration must be positive");
  if (!(start_power >= 0.0 && end_power >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "ramp power must be nonnegative");
  }
  SyntheticProfile p;
  p.shape_ = Ramp{start_power, end_power, duration};
  return p;
}

SyntheticProfile SyntheticProfile::parse(std::string_view spec) {
  auto number = [&](std::string_view s) {
    double v = 0.0;
    if (!parse_double_field(trim(s), v)) {
      fail(ErrorCode::kInvalidArgument, "bad number '" + std::string(s) +
                                            "' in profile '" + std::string(spec) + "'");
    }
    return v;
  };
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
      auto pos = s.find(sep, start);
      parts.push_back(s.substr(start, pos - start));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return parts;
  };
  if (spec.starts_with("ramp:")) {
    auto parts = split(spec.substr(5), ':');
    if (parts.size() != 3) {
      fail(ErrorCode::kInvalidArgument, "ramp profile needs start:end:duration");
    }
    return ramp(number(parts[0]), number(parts[1]), number(parts[2]));
  }
  std::vector<Segment> segs;
  for (auto part : split(spec, ',')) {
    auto kv = split(part, ':');
    if (kv.size() != 2) {
      fail(ErrorCode::kInvalidArgument, "profile segment '" + std::string(part) +
                                            "' is not seconds:watts");
    }
    segs.push_back({number(kv[0]), number(kv[1])});
  }
  return segments(std::move(segs));
}

double SyntheticProfile::power_at(double seconds) const {
  if (const auto* r = std::get_if<Ramp>(&shape_)) {
    if (seconds <= 0.0) return r->start_power;
    if (seconds >= r->duration) return r->end_power;
    return r->start_power + (r->end_power - r->start_power) * (seconds / r->duration);
  }
  const auto& segs = std::get<std::vector<Segment>>(shape_);
  double end = 0.0;
  for (const auto& seg : segs) {
    end += seg.duration;
    if (seconds < end) return seg.power;
  }
  return segs.back().power;
}

double SyntheticProfile::duration() const {
  if (const auto* r = std::get_if<Ramp>(&shape_)) return r->duration;
  double total = 0.0;
  for (const auto& seg : std::get<std::vector<Segment>>(shape_)) total += seg.duration;
  return total;
}

std::optional<SamplerSource> parse_sampler_source(std::string_view name) {
  if (name == "live" || name == "live-command") return SamplerSource::kLiveCommand;
  if (name == "replay" || name == "replay-file") return SamplerSource::kReplayFile;
  if (name == "synthetic") return SamplerSource::kSynthetic;
  return std::nullopt;
}

std::vector<SampleGap> find_gaps(std::span<const PowerSample> samples, double rate) {
  std::vector<SampleGap> gaps;
  const double limit = kGapFactor * static_cast<double>(kNanosPerSecond) / rate;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (static_cast<double>(samples[i].t - samples[i - 1].t) > limit) {
      gaps.push_back({samples[i - 1].t, samples[i].t});
    }
  }
  return gaps;
}

TimestampNs system_now() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

SampleCapture Sampler::stop() {
  if (stopped_) fail(ErrorCode::kState, "already stopped");
  stopped_ = true;
  SampleCapture capture;
  capture.samples = collect(capture.malformed);
  sort_by_time(capture.samples);
  capture.gaps = find_gaps(capture.samples, rate_);
  return capture;
}

std::unique_ptr<Sampler> start_sampler(const SamplerConfig& config, Clock clock) {
  if (!(config.rate > 0.0) || !std::isfinite(config.rate)) {
    fail(ErrorCode::kInvalidArgument, "sample rate must be positive");
  }
  switch (config.source) {
    case SamplerSource::kReplayFile:
      return std::make_unique<ReplaySampler>(config.rate, config.source_spec);
    case SamplerSource::kSynthetic:
      return std::make_unique<SyntheticSampler>(
          config.rate, SyntheticProfile::parse(config.source_spec), std::move(clock));
    case SamplerSource::kLiveCommand:
      return std::make_unique<LiveSampler>(
          config.rate, config.source_spec.empty() ? std::string(kDefaultLiveCommand)
                                                  : config.source_spec);
  }
  fail(ErrorCode::kInvalidArgument, "unknown sampler source");
}

}  // namespace enerprof
