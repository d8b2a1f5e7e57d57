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

// Minimal inference stand-in speaking the workload protocol on stdio.
//
//   enerprof-simworkload [--base-ms X] [--per-image-ms Y] [--oom-at B]
//                        [--fatal-at B] [--chatter]

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>

namespace {

std::int64_t now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

void say(const std::string& line) { std::cout << line << '\n' << std::flush; }

}  // namespace

int main(int argc, char** argv) {
  double base_ms = 1.0;
  double per_image_ms = 0.0;
  std::int64_t oom_at = 0;
  std::int64_t fatal_at = 0;
  bool chatter = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    auto value = [&]() -> const char* {
      if (i + 1 >= argc) {
        std::cerr << "missing value for " << arg << '\n';
        std::exit(2);
      }
      return argv[++i];
    };
    if (arg == "--base-ms") {
      base_ms = std::atof(value());
    } else if (arg == "--per-image-ms") {
      per_image_ms = std::atof(value());
    } else if (arg == "--oom-at") {
      oom_at = std::atoll(value());
    } else if (arg == "--fatal-at") {
      fatal_at = std::atoll(value());
    } else if (arg == "--chatter") {
      chatter = true;
    } else {
      std::cerr << "unknown argument " << arg << '\n';
      return 2;
    }
  }

  if (chatter) say("loading weights...");
  say("READY");
  std::int64_t batch = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.rfind("CONFIG ", 0) == 0) {
      batch = std::atoll(line.c_str() + 7);
    } else if (line == "EXEC") {
      if (fatal_at > 0 && batch >= fatal_at) {
        say("FATAL device lost");
        return 1;
      }
      if (oom_at > 0 && batch >= oom_at) {
        say("OOM");
        continue;
      }
      const double ms = base_ms + per_image_ms * static_cast<double>(batch);
      std::this_thread::sleep_for(std::chrono::microseconds(static_cast<std::int64_t>(ms * 1000)));
      if (chatter) say("batch done");
      say("BATCH_END " + std::to_string(now_ns()));
    } else if (line == "STOP") {
      say("DONE");
      return 0;
    }
  }
  return 0;
}
