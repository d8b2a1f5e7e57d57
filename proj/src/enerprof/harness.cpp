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

#include "enerprof/harness.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"

namespace enerprof {
namespace {

std::int64_t to_ns(double seconds) {
  return std::llround(seconds * static_cast<double>(kNanosPerSecond));
}

bool parse_int64(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

[[noreturn]] void raise_for(const WorkloadEvent& event, std::int64_t batch_size) {
  if (event.kind == EventKind::kOom) {
    fail(ErrorCode::kOutOfMemory,
         "out-of-memory at batch size " + std::to_string(batch_size));
  }
  if (event.kind == EventKind::kFatal) {
    fail(ErrorCode::kWorkloadFailure, "workload failure at batch size " +
                                          std::to_string(batch_size) + ": " +
                                          event.message);
  }
  fail(ErrorCode::kWorkloadFailure, "unexpected workload message '" +
                                        format_workload_event(event) + "'");
}

}  // namespace

ValidationReport validate(const SweepConfig& c) {
  ValidationReport r;
  if (c.start_batch < 1) r.violations.push_back("start batch must be >= 1");
  if (c.max_batch && *c.max_batch < c.start_batch) {
    r.violations.push_back("max batch below start batch");
  }
  if (c.min_reps < 1) r.violations.push_back("min reps must be >= 1");
  if (!(c.min_runtime > 0.0)) r.violations.push_back("min runtime must be positive");
  if (c.warmup_min_reps < 0) r.violations.push_back("warm-up reps negative");
  if (!(c.warmup_min_runtime >= 0.0)) r.violations.push_back("warm-up runtime negative");
  return r;
}

std::optional<WorkloadEvent> parse_workload_event(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
  WorkloadEvent e;
  if (line == "READY") {
    e.kind = EventKind::kReady;
  } else if (line == "OOM") {
    e.kind = EventKind::kOom;
  } else if (line == "DONE") {
    e.kind = EventKind::kDone;
  } else if (line == "FATAL" || line.starts_with("FATAL ")) {
    e.kind = EventKind::kFatal;
    if (line.size() > 6) e.message = std::string(line.substr(6));
  } else if (line.starts_with("BATCH_END ")) {
    std::int64_t t = 0;
    if (!parse_int64(line.substr(10), t) || t <= 0) return std::nullopt;
    e.kind = EventKind::kBatchEnd;
    e.t = t;
  } else {
    return std::nullopt;
  }
  return e;
}

std::string format_workload_event(const WorkloadEvent& event) {
  switch (event.kind) {
    case EventKind::kReady: return "READY";
    case EventKind::kBatchEnd: return "BATCH_END " + std::to_string(event.t.value_or(0));
    case EventKind::kOom: return "OOM";
    case EventKind::kFatal:
      return event.message.empty() ? "FATAL" : "FATAL " + event.message;
    case EventKind::kDone: return "DONE";
  }
  return "";
}

ProcessWorkload::ProcessWorkload(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

WorkloadEvent ProcessWorkload::next_event() {
  std::string line;
  for (;;) {
    switch (child_.read_line(line, timeout_)) {
      case ChildProcess::ReadStatus::kEof:
        return {EventKind::kFatal, std::nullopt, "workload exited"};
      case ChildProcess::ReadStatus::kTimeout:
        return {EventKind::kFatal, std::nullopt, "workload timed out"};
      case ChildProcess::ReadStatus::kLine:
        if (auto e = parse_workload_event(line)) return *e;
        break;
    }
  }
}

void ProcessWorkload::launch(std::int64_t batch_size) {
  child_ = ChildProcess::spawn_shell(command_);
  const auto ready = next_event();
  if (ready.kind != EventKind::kReady) raise_for(ready, batch_size);
  if (!child_.write_line("CONFIG " + std::to_string(batch_size))) {
    raise_for({EventKind::kFatal, std::nullopt, "workload closed its input"}, batch_size);
  }
}

WorkloadEvent ProcessWorkload::execute() {
  if (!child_.write_line("EXEC")) {
    return {EventKind::kFatal, std::nullopt, "workload closed its input"};
  }
  for (;;) {
    auto e = next_event();
    if (e.kind == EventKind::kBatchEnd || e.kind == EventKind::kOom ||
        e.kind == EventKind::kFatal) {
      return e;
    }
  }
}

void ProcessWorkload::finish() {
  if (!child_.running()) return;
  if (child_.write_line("STOP")) {
    std::string line;
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(10);
    while (std::chrono::steady_clock::now() < deadline &&
           child_.read_line(line, std::chrono::seconds(10)) ==
               ChildProcess::ReadStatus::kLine) {
      auto e = parse_workload_event(line);
      if (e && e->kind == EventKind::kDone) break;
    }
  }
  child_ = ChildProcess();
}

SimulationSpec SimulationSpec::parse(std::string_view spec) {
  if (spec.starts_with(kSimulatedWorkloadPrefix)) spec.remove_prefix(kSimulatedWorkloadPrefix.size());
  SimulationSpec s;
  std::size_t start = 0;
  while (start <= spec.size()) {
    auto end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    const auto item = spec.substr(start, end - start);
    start = end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      fail(ErrorCode::kInvalidArgument, "simulation option '" + std::string(item) + "' needs a value");
    }
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    double number = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
    if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(number)) {
      fail(ErrorCode::kInvalidArgument, "bad value in simulation option '" + std::string(item) + "'");
    }
    if (key == "base_ms") {
      s.base = number / 1e3;
    } else if (key == "per_image_ms") {
      s.per_image = number / 1e3;
    } else if (key == "startup_ms") {
      s.startup = number / 1e3;
    } else if (key == "rate") {
      if (!(number > 0.0)) fail(ErrorCode::kInvalidArgument, "simulation rate must be positive");
      s.base = 1.0 / number;
      s.per_image = 0.0;
    } else if (key == "oom_at") {
      s.oom_at = static_cast<std::int64_t>(number);
    } else if (key == "oom_after_execs") {
      s.oom_after_execs = static_cast<std::int64_t>(number);
    } else if (key == "fatal_at") {
      s.fatal_at = static_cast<std::int64_t>(number);
    } else if (key == "epoch_ns") {
      std::int64_t epoch = 0;
      if (!parse_int64(value, epoch)) fail(ErrorCode::kInvalidArgument, "bad epoch_ns");
      s.epoch = epoch;
    } else {
      fail(ErrorCode::kInvalidArgument, "unknown simulation option '" + std::string(key) + "'");
    }
  }
  if (!(s.base >= 0.0 && s.per_image >= 0.0 && s.startup >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "simulation durations must be nonnegative");
  }
  return s;
}

TimestampNs SimulationSpec::batch_duration(std::int64_t batch_size) const {
  return std::max<TimestampNs>(1, to_ns(base + per_image * static_cast<double>(batch_size)));
}

TimestampNs SimulationSpec::startup_duration() const { return to_ns(startup); }

SimulatedWorkload::SimulatedWorkload(SimulationSpec spec)
    : spec_(std::move(spec)), now_(spec_.epoch) {}

void SimulatedWorkload::launch(std::int64_t batch_size) {
  now_ += spec_.startup_duration();
  batch_size_ = batch_size;
  execs_ = 0;
}

WorkloadEvent SimulatedWorkload::execute() {
  if (spec_.fatal_at && batch_size_ >= *spec_.fatal_at) {
    return {EventKind::kFatal, std::nullopt, "simulated failure"};
  }
  if (spec_.oom_at && batch_size_ >= *spec_.oom_at && execs_ >= spec_.oom_after_execs) {
    return {EventKind::kOom, std::nullopt, ""};
  }
  ++execs_;
  now_ += spec_.batch_duration(batch_size_);
  return {EventKind::kBatchEnd, now_, ""};
}

std::unique_ptr<Workload> make_workload(const std::string& spec) {
  if (spec.starts_with(kSimulatedWorkloadPrefix)) {
    return std::make_unique<SimulatedWorkload>(SimulationSpec::parse(spec));
  }
  return std::make_unique<ProcessWorkload>(spec);
}

void run_warmup(Workload& workload, std::int64_t batch_size, const SweepConfig& stop) {
  const TimestampNs started = workload.now();
  const std::int64_t min_ns = to_ns(stop.warmup_min_runtime);
  std::int64_t reps = 0;
  TimestampNs last = started;
  while (reps < stop.warmup_min_reps || last - started < min_ns) {
    const auto e = workload.execute();
    if (e.kind != EventKind::kBatchEnd) raise_for(e, batch_size);
    ++reps;
    last = *e.t;
  }
}

RunMeasurement run_measured(Workload& workload, const std::string& model_id,
                            const InferenceSetup& setup, std::int64_t batch_size,
                            const SweepConfig& stop, const SamplerConfig& sampler_config) {
  auto sampler = start_sampler(sampler_config, [&workload] { return workload.now(); });
  if (!sampler->wait_ready(std::chrono::seconds(10))) {
    sampler->stop();
    fail(ErrorCode::kSampler, "telemetry produced no samples before the measured run");
  }

  RunMeasurement run;
  run.model_id = model_id;
  run.setup = setup;
  run.batch_size = batch_size;
  run.issued_at = workload.now();
  const std::int64_t min_ns = to_ns(stop.min_runtime);
  for (;;) {
    const auto e = workload.execute();
    if (e.kind != EventKind::kBatchEnd) raise_for(e, batch_size);
    if (!run.batch_marks.empty() && *e.t <= run.batch_marks.back()) {
      fail(ErrorCode::kWorkloadFailure, "BATCH_END timestamps not increasing");
    }
    if (run.batch_marks.empty() && *e.t <= run.issued_at) {
      fail(ErrorCode::kWorkloadFailure, "BATCH_END precedes the EXEC that produced it");
    }
    run.batch_marks.push_back(*e.t);
    const auto reps = static_cast<std::int64_t>(run.batch_marks.size());
    if (reps > stop.min_reps && *e.t - run.issued_at > min_ns) break;
  }

  auto capture = sampler->stop();
  const auto inside = window(capture.samples, run.issued_at, run.batch_marks.back());
  run.samples.assign(inside.begin(), inside.end());
  if (!find_gaps(run.samples, sampler->rate()).empty()) {
    run.quality_flags.insert(QualityFlag::kSamplerGap);
  }
  run.metrics = derive_metrics(run);
  if (tdp_headroom(*run.metrics, setup).anomalous) {
    run.quality_flags.insert(QualityFlag::kTdpAnomaly);
  }
  return run;
}

SweepResult run_sweep(Workload& workload, const std::string& model_id,
                      const InferenceSetup& setup, const SweepConfig& config,
                      const SamplerConfig& sampler,
                      const std::function<void(const RunMeasurement&)>& on_run) {
  if (auto r = validate(config); !r.ok()) {
    fail(ErrorCode::kInvalidArgument, "invalid sweep config: " + r.violations.front());
  }
  SweepResult result;
  for (std::int64_t batch = config.start_batch;
       !config.max_batch || batch <= *config.max_batch; batch *= 2) {
    try {
      workload.launch(batch);
      run_warmup(workload, batch, config);
      auto run = run_measured(workload, model_id, setup, batch, config, sampler);
      workload.finish();
      if (on_run) on_run(run);
      result.largest_feasible = batch;
      result.runs.push_back(std::move(run));
    } catch (const Error& e) {
      workload.finish();
      if (e.code() != ErrorCode::kOutOfMemory) throw;
      result.first_infeasible = batch;
      break;
    }
    if (batch > std::numeric_limits<std::int64_t>::max() / 2) break;
  }
  if (result.runs.empty()) {
    fail(ErrorCode::kOutOfMemory, "model does not fit (out-of-memory at batch size " +
                                      std::to_string(config.start_batch) + ")");
  }
  return result;
}

std::filesystem::path default_state_dir() {
  if (const char* dir = std::getenv("ENERPROF_STATE_DIR"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_STATE_HOME"); xdg && *xdg) {
    return std::filesystem::path(xdg) / "enerprof";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return std::filesystem::path(home) / ".local" / "state" / "enerprof";
  }
  return std::filesystem::temp_directory_path() / "enerprof";
}

GpuLock::GpuLock(const std::filesystem::path& state_dir, const std::string& gpu_label) {
  if (gpu_label.empty() || gpu_label.find('/') != std::string::npos) {
    fail(ErrorCode::kInvalidArgument, "gpu label '" + gpu_label + "' is not usable as a lock name");
  }
  std::error_code ec;
  std::filesystem::create_directories(state_dir, ec);
  path_ = state_dir / (gpu_label + ".lock");
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) fail(ErrorCode::kIo, "cannot open lock file " + path_.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    fail(ErrorCode::kLocked, "another sweep holds " + path_.string());
  }
  const auto pid = std::to_string(::getpid()) + "\n";
  if (::ftruncate(fd_, 0) == 0) {
    [[maybe_unused]] auto n = ::write(fd_, pid.data(), pid.size());
  }
}

GpuLock::~GpuLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace enerprof
