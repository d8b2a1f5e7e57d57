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

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "enerprof/types.hpp"

namespace enerprof::testing {

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "enerprof-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) std::abort();
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline constexpr TimestampNs kEpoch = 1'704'067'200'000'000'000;  // 2024-01-01 UTC

inline InferenceSetup test_setup(double tdp = 400.0) {
  return {"A100", "tensorrt", tdp, 19.5e12};
}

// Samples of a power function on a regular grid starting at t0.
template <typename F>
std::vector<PowerSample> sample_grid(TimestampNs t0, double seconds, double rate, F power) {
  std::vector<PowerSample> out;
  const auto n = static_cast<std::int64_t>(seconds * rate + 0.5);
  for (std::int64_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / rate;
    out.push_back({t0 + static_cast<TimestampNs>(static_cast<double>(i) * 1e9 / rate + 0.5), power(s),
                   {}, {}, {}});
  }
  return out;
}

}  // namespace enerprof::testing
