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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enerprof/process.hpp"
#include "enerprof/telemetry.hpp"
#include "enerprof/types.hpp"

namespace enerprof {

struct SweepConfig {
  std::int64_t start_batch = 1;
  std::optional<std::int64_t> max_batch;
  // Measured runs continue until reps > min_reps AND elapsed > min_runtime.
  std::int64_t min_reps = 13;
  double min_runtime = 10.0;  // s
  // Warm-up continues until reps >= warmup_min_reps AND elapsed >= warmup_min_runtime.
  std::int64_t warmup_min_reps = 3;
  double warmup_min_runtime = 2.0;  // s
};

ValidationReport validate(const SweepConfig& config);

// Workload protocol, one message per line.
//   child -> harness: READY | BATCH_END <t_ns> | OOM | FATAL <message> | DONE
//   harness -> child: CONFIG <batch_size> | EXEC | STOP
enum class EventKind { kReady, kBatchEnd, kOom, kFatal, kDone };

struct WorkloadEvent {
  EventKind kind = EventKind::kReady;
  std::optional<TimestampNs> t;  // set for kBatchEnd
  std::string message;           // set for kFatal

  bool operator==(const WorkloadEvent&) const = default;
};

std::optional<WorkloadEvent> parse_workload_event(std::string_view line);
std::string format_workload_event(const WorkloadEvent& event);

// One inference process driven synchronously, one batch per execute().
class Workload {
 public:
  virtual ~Workload() = default;

  // Starts a fresh instance, waits for READY and sends CONFIG.
  virtual void launch(std::int64_t batch_size) = 0;
  // Issues one EXEC and returns BATCH_END, OOM or FATAL.
  virtual WorkloadEvent execute() = 0;
  // STOP, then waits for DONE and process exit. Safe to call after a failure.
  virtual void finish() = 0;
  // The clock against which BATCH_END timestamps are reported.
  virtual TimestampNs now() const = 0;
};

// A child process speaking the workload protocol on stdin/stdout. Lines that
// are not protocol messages are ignored.
class ProcessWorkload final : public Workload {
 public:
  explicit ProcessWorkload(std::string command,
                           std::chrono::milliseconds timeout = std::chrono::minutes(10));

  void launch(std::int64_t batch_size) override;
  WorkloadEvent execute() override;
  void finish() override;
  TimestampNs now() const override { return system_now(); }

 private:
  WorkloadEvent next_event();

  std::string command_;
  std::chrono::milliseconds timeout_;
  ChildProcess child_;
};

// Deterministic in-process workload on a virtual clock. A batch of size b
// takes base + per_image * b seconds; launching takes `startup` seconds.
struct SimulationSpec {
  TimestampNs epoch = 1'704'067'200'000'000'000;  // 2024-01-01 00:00:00 UTC
  double startup = 1.0;
  double base = 0.01;
  double per_image = 0.0;
  std::optional<std::int64_t> oom_at;    // batch sizes >= this run out of memory
  std::int64_t oom_after_execs = 0;      // ... after this many successful EXECs
  std::optional<std::int64_t> fatal_at;  // batch sizes >= this fail fatally

  // "sim:base_ms=10,per_image_ms=0.5,startup_ms=1000,oom_at=64,..."
  static SimulationSpec parse(std::string_view spec);
  TimestampNs batch_duration(std::int64_t batch_size) const;
  TimestampNs startup_duration() const;
};

inline constexpr std::string_view kSimulatedWorkloadPrefix = "sim:";

class SimulatedWorkload final : public Workload {
 public:
  explicit SimulatedWorkload(SimulationSpec spec);

  void launch(std::int64_t batch_size) override;
  WorkloadEvent execute() override;
  void finish() override {}
  TimestampNs now() const override { return now_; }

 private:
  SimulationSpec spec_;
  TimestampNs now_;
  std::int64_t batch_size_ = 0;
  std::int64_t execs_ = 0;
};

// "sim:..." specs build a SimulatedWorkload, anything else is a shell command.
std::unique_ptr<Workload> make_workload(const std::string& spec);

// Throws kOutOfMemory on OOM and kWorkloadFailure on FATAL.
void run_warmup(Workload& workload, std::int64_t batch_size, const SweepConfig& stop);

// Measured run. Samples outside [issued_at, last BATCH_END] are dropped;
// metrics and quality flags are filled in.
RunMeasurement run_measured(Workload& workload, const std::string& model_id,
                            const InferenceSetup& setup, std::int64_t batch_size,
                            const SweepConfig& stop, const SamplerConfig& sampler);

struct SweepResult {
  std::vector<RunMeasurement> runs;
  std::int64_t largest_feasible = 0;
  std::optional<std::int64_t> first_infeasible;
};

// Doubling sweep from start_batch until OOM or max_batch. `on_run` sees each
// measurement as soon as it completes. Throws kOutOfMemory ("model does not
// fit") when no batch size is feasible and kWorkloadFailure on FATAL.
SweepResult run_sweep(Workload& workload, const std::string& model_id,
                      const InferenceSetup& setup, const SweepConfig& config,
                      const SamplerConfig& sampler,
                      const std::function<void(const RunMeasurement&)>& on_run = {});

// ENERPROF_STATE_DIR, else $XDG_STATE_HOME/enerprof, else ~/.local/state/enerprof.
std::filesystem::path default_state_dir();

// Exclusive advisory lock on <state_dir>/<gpu_label>.lock for one sweep.
class GpuLock {
 public:
  GpuLock(const std::filesystem::path& state_dir, const std::string& gpu_label);
  GpuLock(const GpuLock&) = delete;
  GpuLock& operator=(const GpuLock&) = delete;
  ~GpuLock();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

}  // namespace enerprof
