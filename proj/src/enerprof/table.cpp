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

#include "enerprof/table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace enerprof {
namespace {

std::string text_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (!std::isfinite(*d)) return format_double(*d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", *d);
    return buf;
  }
  return cell_text(cell);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

bool parse_table_format(std::string_view name, TableFormat& out) {
  if (name == "text") {
    out = TableFormat::kText;
  } else if (name == "csv") {
    out = TableFormat::kCsv;
  } else if (name == "json-lines") {
    out = TableFormat::kJsonLines;
  } else {
    return false;
  }
  return true;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, end);
}

std::string cell_text(const Cell& cell) {
  switch (cell.index()) {
    case 1: return std::get<std::string>(cell);
    case 2: return format_double(std::get<double>(cell));
    case 3: return std::to_string(std::get<std::int64_t>(cell));
    default: return {};
  }
}

std::string render(const Table& table, TableFormat format) {
  std::string out;
  switch (format) {
    case TableFormat::kCsv: {
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out += (c ? "," : "") + csv_field(table.columns[c]);
      }
      out += '\n';
      for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
          out += (c ? "," : "") + csv_field(cell_text(row[c]));
        }
        out += '\n';
      }
      break;
    }
    case TableFormat::kJsonLines: {
      for (const auto& row : table.rows) {
        nlohmann::ordered_json j = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size() && c < table.columns.size(); ++c) {
          const auto& cell = row[c];
          auto& slot = j[table.columns[c]];
          if (const auto* s = std::get_if<std::string>(&cell)) {
            slot = *s;
          } else if (const auto* d = std::get_if<double>(&cell)) {
            slot = std::isfinite(*d) ? nlohmann::ordered_json(*d) : nlohmann::ordered_json(nullptr);
          } else if (const auto* i = std::get_if<std::int64_t>(&cell)) {
            slot = *i;
          } else {
            slot = nullptr;
          }
        }
        out += j.dump() + '\n';
      }
      break;
    }
    case TableFormat::kText: {
      std::vector<std::vector<std::string>> cells;
      std::vector<std::size_t> width(table.columns.size());
      for (std::size_t c = 0; c < table.columns.size(); ++c) width[c] = table.columns[c].size();
      for (const auto& row : table.rows) {
        auto& line = cells.emplace_back();
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) {
          line.push_back(text_cell(row[c]));
          width[c] = std::max(width[c], line.back().size());
        }
      }
      auto emit = [&](const std::vector<std::string>& fields) {
        std::string line;
        for (std::size_t c = 0; c < fields.size(); ++c) {
          if (c) line += "  ";
          line += fields[c];
          if (c + 1 < fields.size()) line.append(width[c] - fields[c].size(), ' ');
        }
        out += line + '\n';
      };
      if (!table.name.empty()) out += "# " + table.name + '\n';
      emit(table.columns);
      for (const auto& line : cells) emit(line);
      break;
    }
  }
  return out;
}

}  // namespace enerprof
