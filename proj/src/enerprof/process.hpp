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

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace enerprof {

// Whitespace-separated words with single/double quoting and backslash escapes.
std::vector<std::string> split_command(std::string_view command);

// A child process with pipes on its standard input and output.
class ChildProcess {
 public:
  enum class ReadStatus { kLine, kEof, kTimeout };

  // Executes argv[0] via PATH lookup. Throws kIo when it cannot be started
  // (including a missing executable). `extra_env` entries ("KEY=value")
  // replace same-named variables of the current environment.
  static ChildProcess spawn(const std::vector<std::string>& argv,
                            const std::vector<std::string>& extra_env = {},
                            bool discard_stderr = false);
  // Runs `command` through /bin/sh -c.
  static ChildProcess spawn_shell(const std::string& command);

  ChildProcess() = default;
  ChildProcess(ChildProcess&& other) noexcept;
  ChildProcess& operator=(ChildProcess&& other) noexcept;
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;
  ~ChildProcess();

  ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout);
  // Returns false when the child no longer accepts input.
  bool write_line(std::string_view line);
  void close_stdin();
  void terminate();
  // Blocks until exit; returns the exit status (128+signal when signalled).
  int wait();
  bool running() const { return pid_ > 0; }
  pid_t pid() const { return pid_; }

 private:
  void reset() noexcept;

  pid_t pid_ = -1;
  int in_fd_ = -1;
  int out_fd_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

}  // namespace enerprof
