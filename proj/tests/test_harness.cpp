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

#include <random>

#include "doctest.h"
#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"
#include "enerprof/harness.hpp"
#include "enerprof/process.hpp"
#include "support.hpp"

using namespace enerprof;
using enerprof::testing::kEpoch;

namespace {

const SamplerConfig kFlat{100.0, SamplerSource::kSynthetic, "1:150"};

// First n with n > min_reps and n * d > min_runtime, by brute force.
std::int64_t oracle_stop(TimestampNs d, std::int64_t min_reps, TimestampNs min_runtime) {
  for (std::int64_t n = 1;; ++n) {
    if (n > min_reps && n * d > min_runtime) return n;
  }
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kState;
}

}  // namespace

TEST_CASE("workload protocol messages") {
  CHECK(parse_workload_event("READY")->kind == EventKind::kReady);
  CHECK(parse_workload_event("DONE")->kind == EventKind::kDone);
  CHECK(parse_workload_event("OOM")->kind == EventKind::kOom);
  const auto end = parse_workload_event("BATCH_END 1704067200000000123");
  REQUIRE(end);
  CHECK(end->t == kEpoch + 123);
  const auto fatal = parse_workload_event("FATAL cuda error: device lost");
  REQUIRE(fatal);
  CHECK(fatal->message == "cuda error: device lost");
  CHECK_FALSE(parse_workload_event("BATCH_END"));
  CHECK_FALSE(parse_workload_event("BATCH_END 12x"));
  CHECK_FALSE(parse_workload_event("ready"));
  CHECK_FALSE(parse_workload_event("loading model"));
  for (const auto& e : {WorkloadEvent{EventKind::kReady, {}, ""},
                        WorkloadEvent{EventKind::kBatchEnd, kEpoch, ""},
                        WorkloadEvent{EventKind::kFatal, {}, "boom"}}) {
    CHECK(parse_workload_event(format_workload_event(e)) == e);
  }
}

TEST_CASE("simulation specs") {
  const auto s = SimulationSpec::parse("sim:base_ms=10,per_image_ms=0.5,startup_ms=0,oom_at=64");
  CHECK(s.batch_duration(4) == 12'000'000);
  CHECK(s.startup_duration() == 0);
  CHECK(s.oom_at == 64);
  CHECK(SimulationSpec::parse("sim:rate=2").batch_duration(1) == 500'000'000);
  CHECK_THROWS_AS(SimulationSpec::parse("sim:base_ms=-1"), Error);
  CHECK_THROWS_AS(SimulationSpec::parse("sim:warp=9"), Error);
}

TEST_CASE("sweep config validation") {
  CHECK(validate(SweepConfig{}).ok());
  SweepConfig c;
  c.start_batch = 0;
  CHECK_FALSE(validate(c).ok());
  c = {};
  c.max_batch = 0;
  CHECK_FALSE(validate(c).ok());
  c = {};
  c.min_runtime = -1.0;
  CHECK_FALSE(validate(c).ok());
}

TEST_CASE("measured runs stop at the first batch meeting both thresholds") {
  for (double rate : {0.5, 2.0, 100.0}) {
    CAPTURE(rate);
    SimulatedWorkload w(SimulationSpec::parse("sim:rate=" + std::to_string(rate)));
    w.launch(1);
    const auto run = run_measured(w, "m", enerprof::testing::test_setup(), 1, SweepConfig{}, kFlat);
    const TimestampNs d = static_cast<TimestampNs>(1e9 / rate);
    CHECK(static_cast<std::int64_t>(run.batch_marks.size()) == oracle_stop(d, 13, 10 * kNanosPerSecond));
  }
}

TEST_CASE("stop rule is the conjunction across random rates and thresholds") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto d = static_cast<TimestampNs>(1'000'000 + rng() % 3'000'000'000ULL);
    SweepConfig cfg;
    cfg.min_reps = static_cast<std::int64_t>(rng() % 30);
    cfg.min_runtime = static_cast<double>(rng() % 20000) / 1000.0;
    SimulationSpec spec;
    spec.base = static_cast<double>(d) / 1e9;
    SimulatedWorkload w(spec);
    w.launch(1);
    const auto run = run_measured(w, "m", enerprof::testing::test_setup(), 1, cfg, kFlat);
    const auto n = static_cast<std::int64_t>(run.batch_marks.size());
    const auto min_ns = static_cast<TimestampNs>(std::llround(cfg.min_runtime * 1e9));
    const auto elapsed = [&](std::int64_t k) { return run.batch_marks[k - 1] - run.issued_at; };
    CHECK(n > cfg.min_reps);
    CHECK(elapsed(n) > min_ns);
    if (n > 1) CHECK_FALSE((n - 1 > cfg.min_reps && elapsed(n - 1) > min_ns));
  }
}

TEST_CASE("measured run keeps only in-window samples and consistent marks") {
  SimulatedWorkload w(SimulationSpec::parse("sim:base_ms=20,per_image_ms=5"));
  w.launch(4);
  run_warmup(w, 4, SweepConfig{});
  const auto run = run_measured(w, "m", enerprof::testing::test_setup(), 4, SweepConfig{}, kFlat);
  REQUIRE(run.metrics);
  CHECK(run.metrics->images_processed == static_cast<std::int64_t>(run.batch_marks.size()) * 4);
  CHECK(run.samples.front().t >= run.issued_at);
  CHECK(run.samples.back().t <= run.batch_marks.back());
  CHECK(validate(run).ok());
  CHECK(run.metrics->avg_power == doctest::Approx(150.0));
}

TEST_CASE("warm-up runs until both its thresholds are met") {
  SimulatedWorkload w(SimulationSpec::parse("sim:base_ms=100,startup_ms=0"));
  w.launch(1);
  run_warmup(w, 1, SweepConfig{});
  CHECK(w.now() - kEpoch == 20 * 100'000'000LL);
  SimulatedWorkload slow(SimulationSpec::parse("sim:base_ms=5000,startup_ms=0"));
  slow.launch(1);
  run_warmup(slow, 1, SweepConfig{});
  CHECK(slow.now() - kEpoch == 3 * 5'000'000'000LL);
}

TEST_CASE("doubling sweep stops at the first out-of-memory batch") {
  SimulatedWorkload w(SimulationSpec::parse("sim:base_ms=50,per_image_ms=1,oom_at=8"));
  std::vector<std::int64_t> seen;
  const auto result = run_sweep(w, "m", enerprof::testing::test_setup(), SweepConfig{}, kFlat,
                                [&](const RunMeasurement& r) { seen.push_back(r.batch_size); });
  std::vector<std::int64_t> sizes;
  for (const auto& r : result.runs) sizes.push_back(r.batch_size);
  CHECK(sizes == std::vector<std::int64_t>{1, 2, 4});
  CHECK(seen == sizes);
  CHECK(result.largest_feasible == 4);
  CHECK(result.first_infeasible == 8);
}

TEST_CASE("out of memory during the measured run also ends the sweep") {
  SweepConfig cfg;
  SimulatedWorkload w(SimulationSpec::parse("sim:base_ms=100,oom_at=4,oom_after_execs=25"));
  const auto result = run_sweep(w, "m", enerprof::testing::test_setup(), cfg, kFlat);
  CHECK(result.runs.size() == 2);
  CHECK(result.first_infeasible == 4);
}

TEST_CASE("sweep honours start and max batch") {
  SweepConfig cfg;
  cfg.start_batch = 2;
  cfg.max_batch = 16;
  SimulatedWorkload w(SimulationSpec::parse("sim:base_ms=100"));
  const auto result = run_sweep(w, "m", enerprof::testing::test_setup(), cfg, kFlat);
  std::vector<std::int64_t> sizes;
  for (const auto& r : result.runs) sizes.push_back(r.batch_size);
  CHECK(sizes == std::vector<std::int64_t>{2, 4, 8, 16});
  CHECK_FALSE(result.first_infeasible);
}

TEST_CASE("sweep failures") {
  SimulatedWorkload none(SimulationSpec::parse("sim:oom_at=1"));
  CHECK(code_of([&] { run_sweep(none, "m", enerprof::testing::test_setup(), SweepConfig{}, kFlat); }) ==
        ErrorCode::kOutOfMemory);
  SimulatedWorkload fatal(SimulationSpec::parse("sim:base_ms=100,fatal_at=2"));
  CHECK(code_of([&] { run_sweep(fatal, "m", enerprof::testing::test_setup(), SweepConfig{}, kFlat); }) ==
        ErrorCode::kWorkloadFailure);
}

TEST_CASE("best batch of random run sets equals the exhaustive argmin") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<EnergyMetrics> runs(1 + rng() % 10);
    std::int64_t b = 1;
    for (auto& m : runs) {
      m.batch_size = b;
      b *= 2;
      m.energy_per_image = static_cast<double>(1 + rng() % 20) / 10.0;
    }
    std::shuffle(runs.begin(), runs.end(), rng);
    std::size_t best = 0;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      bool beats_all = true;
      for (std::size_t j = 0; j < runs.size(); ++j) {
        if (runs[j].energy_per_image < runs[i].energy_per_image ||
            (runs[j].energy_per_image == runs[i].energy_per_image &&
             runs[j].batch_size < runs[i].batch_size)) {
          beats_all = false;
        }
      }
      if (beats_all) best = i;
    }
    CHECK(best_batch(runs).batch_size == runs[best].batch_size);
  }
}

TEST_CASE("command lines split with quotes and escapes") {
  CHECK(split_command("a  b\tc") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_command("sh -c 'echo \"hi there\"'") ==
        std::vector<std::string>{"sh", "-c", "echo \"hi there\""});
  CHECK(split_command("x \"y z\" w\\ v") == std::vector<std::string>{"x", "y z", "w v"});
  CHECK(split_command("").empty());
}

TEST_CASE("child processes") {
  auto child = ChildProcess::spawn({"cat"});
  CHECK(child.write_line("hello"));
  std::string line;
  REQUIRE(child.read_line(line, std::chrono::seconds(5)) == ChildProcess::ReadStatus::kLine);
  CHECK(line == "hello");
  child.close_stdin();
  CHECK(child.read_line(line, std::chrono::seconds(5)) == ChildProcess::ReadStatus::kEof);
  CHECK(child.wait() == 0);
  auto sh = ChildProcess::spawn_shell("exit 7");
  CHECK(sh.wait() == 7);
  CHECK(code_of([] { ChildProcess::spawn({"/nonexistent/binary"}); }) == ErrorCode::kIo);
}

TEST_CASE("process workloads speak the protocol through a real child") {
  const std::string tool = ENERPROF_SIMWORKLOAD;
  SweepConfig cfg;
  cfg.min_reps = 3;
  cfg.min_runtime = 0.05;
  cfg.warmup_min_reps = 2;
  cfg.warmup_min_runtime = 0.01;
  ProcessWorkload w(tool + " --base-ms 2 --per-image-ms 1 --oom-at 4 --chatter",
                    std::chrono::seconds(20));
  const auto result = run_sweep(w, "m", enerprof::testing::test_setup(), cfg, kFlat);
  REQUIRE(result.runs.size() == 2);
  CHECK(result.first_infeasible == 4);
  for (const auto& r : result.runs) {
    CHECK(r.batch_marks.size() > 3);
    CHECK(r.batch_marks.back() - r.issued_at > 50'000'000);
  }
}

TEST_CASE("process workload failures") {
  const std::string tool = ENERPROF_SIMWORKLOAD;
  SweepConfig cfg;
  cfg.min_reps = 1;
  cfg.min_runtime = 0.05;
  cfg.warmup_min_reps = 1;
  cfg.warmup_min_runtime = 0.0;
  ProcessWorkload fatal(tool + " --fatal-at 2", std::chrono::seconds(20));
  CHECK(code_of([&] { run_sweep(fatal, "m", enerprof::testing::test_setup(), cfg, kFlat); }) ==
        ErrorCode::kWorkloadFailure);
  ProcessWorkload silent("sh -c 'exit 0'", std::chrono::seconds(20));
  CHECK(code_of([&] { run_sweep(silent, "m", enerprof::testing::test_setup(), cfg, kFlat); }) ==
        ErrorCode::kWorkloadFailure);
}

TEST_CASE("one sweep per gpu label at a time") {
  enerprof::testing::TempDir dir;
  {
    GpuLock a(dir.path(), "A100");
    CHECK(a.path() == dir / "A100.lock");
    CHECK(code_of([&] { GpuLock b(dir.path(), "A100"); }) == ErrorCode::kLocked);
    GpuLock other(dir.path(), "H100");
  }
  GpuLock again(dir.path(), "A100");
}

TEST_CASE("state dir honours ENERPROF_STATE_DIR") {
  ::setenv("ENERPROF_STATE_DIR", "/tmp/enerprof-state-test", 1);
  CHECK(default_state_dir() == "/tmp/enerprof-state-test");
  ::unsetenv("ENERPROF_STATE_DIR");
  CHECK_FALSE(default_state_dir().empty());
}
