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

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace enerprof {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class TableFormat { kText, kCsv, kJsonLines };

// "text", "csv" or "json-lines".
bool parse_table_format(std::string_view name, TableFormat& out);

// Shortest decimal that parses back to the same double.
std::string format_double(double value);

// Exact cell text as used by csv and the C API; empty for missing cells.
std::string cell_text(const Cell& cell);

// Text output rounds doubles to six significant digits; csv and json-lines
// are lossless.
std::string render(const Table& table, TableFormat format);

}  // namespace enerprof
