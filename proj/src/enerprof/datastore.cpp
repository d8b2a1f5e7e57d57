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

#include "enerprof/datastore.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"
#include "enerprof/telemetry.hpp"
#include "json.hpp"

namespace enerprof {
namespace {

using nlohmann::json;

json metrics_to_json(const EnergyMetrics& m) {
  return {{"energy_per_image", m.energy_per_image},
          {"throughput", m.throughput},
          {"latency", m.latency},
          {"avg_power", m.avg_power},
          {"batch_size", m.batch_size},
          {"images_processed", m.images_processed},
          {"wall_time", m.wall_time}};
}

EnergyMetrics metrics_from_json(const json& j) {
  EnergyMetrics m;
  m.energy_per_image = j.at("energy_per_image").get<double>();
  m.throughput = j.at("throughput").get<double>();
  m.latency = j.at("latency").get<double>();
  m.avg_power = j.at("avg_power").get<double>();
  m.batch_size = j.at("batch_size").get<std::int64_t>();
  m.images_processed = j.at("images_processed").get<std::int64_t>();
  m.wall_time = j.at("wall_time").get<double>();
  return m;
}

json setup_to_json(const InferenceSetup& s) {
  json j = {{"id", s.id()},
            {"gpu_label", s.gpu_label},
            {"runtime_label", s.runtime_label},
            {"tdp", s.tdp}};
  j["peak_compute"] = s.peak_compute ? json(*s.peak_compute) : json(nullptr);
  return j;
}

InferenceSetup setup_from_json(const json& j) {
  InferenceSetup s;
  s.gpu_label = j.at("gpu_label").get<std::string>();
  s.runtime_label = j.at("runtime_label").get<std::string>();
  s.tdp = j.at("tdp").get<double>();
  if (j.contains("peak_compute") && !j.at("peak_compute").is_null()) {
    s.peak_compute = j.at("peak_compute").get<double>();
  }
  return s;
}

std::string sanitize(std::string_view s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '-' || c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out;
}

std::vector<std::string> split_row(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == ' ' || f.back() == '\r')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return fields;
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

template <typename T>
bool is_sorted_unique(const std::vector<T>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<T>()) == v.end();
}

bool keep(const std::vector<std::string>& filter, const std::string& value) {
  return filter.empty() || std::find(filter.begin(), filter.end(), value) != filter.end();
}

[[noreturn]] void bad_bundle(const std::string& what) {
  fail(ErrorCode::kParse, "malformed bundle: " + what);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kNotFound, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) fail(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::kIo, "cannot rename " + tmp.string() + ": " + ec.message());
}

// ---------------------------------------------------------------- store

std::string ResultsStore::make_run_id(const std::string& model_id, const InferenceSetup& setup,
                                      std::int64_t batch_size) {
  return sanitize(model_id) + "." + sanitize(setup.gpu_label) + "." +
         sanitize(setup.runtime_label) + ".b" + std::to_string(batch_size);
}

std::filesystem::path ResultsStore::sidecar_dir() const {
  auto dir = path_;
  dir += ".d";
  return dir;
}

ResultsStore ResultsStore::open(const std::filesystem::path& path, bool create) {
  ResultsStore store;
  store.path_ = path;
  if (!std::filesystem::exists(path)) {
    if (!create) fail(ErrorCode::kNotFound, "results store " + path.string() + " not found");
    const json header = {{"kind", "header"},
                         {"format", kResultsFormat},
                         {"version", kSchemaVersion}};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    store.append_line(header.dump());
    return store;
  }

  std::istringstream in(read_text_file(path));
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (!header_seen) {
      json h = json::parse(line, nullptr, false);
      std::string version = "<unreadable>";
      if (h.is_object() && h.contains("version") && h["version"].is_string()) {
        version = h["version"].get<std::string>();
      }
      if (!h.is_object() || h.value("format", "") != kResultsFormat || version != kSchemaVersion) {
        fail(ErrorCode::kVersion, "results store " + path.string() + ": version mismatch (found " +
                                      version + ", expected " + std::string(kSchemaVersion) + ")");
      }
      header_seen = true;
      continue;
    }
    try {
      const json r = json::parse(line);
      const auto kind = r.at("kind").get<std::string>();
      if (kind == "setup") {
        auto s = setup_from_json(r);
        store.setups_[s.id()] = s;
      } else if (kind == "run") {
        RunSummary s;
        s.id = r.at("id").get<std::string>();
        s.model_id = r.at("model_id").get<std::string>();
        s.setup_id = r.at("setup").get<std::string>();
        s.batch_size = r.at("batch_size").get<std::int64_t>();
        s.issued_at = r.at("issued_at").get<std::int64_t>();
        s.mark_count = r.at("mark_count").get<std::size_t>();
        s.sample_count = r.at("sample_count").get<std::size_t>();
        s.marks_path = r.at("marks").get<std::string>();
        s.samples_path = r.at("samples").get<std::string>();
        s.metrics = metrics_from_json(r.at("metrics"));
        for (const auto& f : r.at("flags")) {
          if (auto flag = parse_quality_flag(f.get<std::string>())) s.quality_flags.insert(*flag);
        }
        if (r.contains("idle_baseline") && !r["idle_baseline"].is_null()) {
          s.idle_baseline = r["idle_baseline"].get<double>();
        }
        if (!store.setups_.count(s.setup_id)) {
          fail(ErrorCode::kParse, "run " + s.id + " references unknown setup " + s.setup_id);
        }
        store.runs_.push_back(std::move(s));
      }
    } catch (const json::exception& e) {
      fail(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) {
    fail(ErrorCode::kVersion, "results store " + path.string() +
                                  ": version mismatch (no header, expected " +
                                  std::string(kSchemaVersion) + ")");
  }
  return store;
}

void ResultsStore::append_line(const std::string& line) {
  const int fd = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) fail(ErrorCode::kIo, "cannot open " + path_.string() + " for append");
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      ::close(fd);
      fail(ErrorCode::kIo, "write to " + path_.string() + " failed");
    }
    off += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) fail(ErrorCode::kIo, "fsync of " + path_.string() + " failed");
}

const RunSummary* ResultsStore::find(std::string_view id) const {
  for (const auto& r : runs_) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::string ResultsStore::save_run(const RunMeasurement& run) {
  if (auto report = validate(run); !report.ok()) {
    fail(ErrorCode::kInvalidArgument, "invalid run: " + report.violations.front());
  }
  const auto setup_id = run.setup.id();
  if (auto it = setups_.find(setup_id); it != setups_.end() && !(it->second == run.setup)) {
    fail(ErrorCode::kMismatch, "setup " + setup_id + " is stored with different descriptors");
  }
  for (const auto& r : runs_) {
    if (r.model_id == run.model_id && r.setup_id == setup_id && r.batch_size == run.batch_size) {
      fail(ErrorCode::kDuplicate, "duplicate run for (" + run.model_id + ", " + setup_id +
                                      ", batch " + std::to_string(run.batch_size) + ")");
    }
  }
  const auto id = make_run_id(run.model_id, run.setup, run.batch_size);
  if (find(id)) fail(ErrorCode::kDuplicate, "duplicate run id " + id);

  RunSummary s;
  s.id = id;
  s.model_id = run.model_id;
  s.setup_id = setup_id;
  s.batch_size = run.batch_size;
  s.issued_at = run.issued_at;
  s.mark_count = run.batch_marks.size();
  s.sample_count = run.samples.size();
  s.metrics = run.metrics ? *run.metrics : derive_metrics(run);
  s.quality_flags = run.quality_flags;
  s.idle_baseline = run.idle_baseline;
  const auto rel_dir = sidecar_dir().filename().string();
  s.marks_path = rel_dir + "/" + id + ".marks";
  s.samples_path = rel_dir + "/" + id + ".samples.log";

  std::string marks;
  for (auto t : run.batch_marks) marks += std::to_string(t) + "\n";
  const auto base = path_.parent_path();
  write_text_file(base / s.marks_path, marks);
  write_text_file(base / s.samples_path, serialize_sensor_log(run.samples));

  if (!setups_.count(setup_id)) {
    json sj = setup_to_json(run.setup);
    sj["kind"] = "setup";
    append_line(sj.dump());
    setups_[setup_id] = run.setup;
  }
  json flags = json::array();
  for (auto f : s.quality_flags) flags.push_back(std::string(to_string(f)));
  json record = {{"kind", "run"},
                 {"id", s.id},
                 {"model_id", s.model_id},
                 {"setup", s.setup_id},
                 {"batch_size", s.batch_size},
                 {"issued_at", s.issued_at},
                 {"mark_count", s.mark_count},
                 {"sample_count", s.sample_count},
                 {"marks", s.marks_path},
                 {"samples", s.samples_path},
                 {"metrics", metrics_to_json(s.metrics)},
                 {"flags", flags}};
  record["idle_baseline"] = s.idle_baseline ? json(*s.idle_baseline) : json(nullptr);
  append_line(record.dump());
  runs_.push_back(std::move(s));
  return id;
}

RunMeasurement ResultsStore::load_run(std::string_view id) const {
  const auto* s = find(id);
  if (!s) fail(ErrorCode::kNotFound, "no run with id " + std::string(id));
  const auto base = path_.parent_path();
  RunMeasurement run;
  run.model_id = s->model_id;
  run.setup = setups_.at(s->setup_id);
  run.batch_size = s->batch_size;
  run.issued_at = s->issued_at;
  run.metrics = s->metrics;
  run.quality_flags = s->quality_flags;
  run.idle_baseline = s->idle_baseline;

  std::istringstream marks(read_text_file(base / s->marks_path));
  std::string line;
  while (std::getline(marks, line)) {
    if (line.empty()) continue;
    std::int64_t t = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), t);
    if (ec != std::errc() || ptr != line.data() + line.size()) {
      fail(ErrorCode::kParse, "bad batch mark in " + s->marks_path);
    }
    run.batch_marks.push_back(t);
  }
  const auto samples_text = read_text_file(base / s->samples_path);
  if (!samples_text.empty()) {
    auto parsed = parse_sensor_log(samples_text);
    if (parsed.malformed) fail(ErrorCode::kParse, "malformed sample lines in " + s->samples_path);
    run.samples = std::move(parsed.samples);
  }
  if (run.batch_marks.size() != s->mark_count || run.samples.size() != s->sample_count) {
    fail(ErrorCode::kMismatch, "sidecar files of run " + s->id + " do not match its record");
  }
  return run;
}

// ------------------------------------------------------------- metadata

MetadataTable ingest_metadata(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  std::size_t header_idx = 0;
  while (header_idx < lines.size() && split_row(lines[header_idx], ',').front().empty() &&
         lines[header_idx].find_first_not_of(" \t\r") == std::string_view::npos) {
    ++header_idx;
  }
  if (header_idx == lines.size()) fail(ErrorCode::kParse, "metadata table has no header row");
  const char delim = lines[header_idx].find('\t') != std::string_view::npos ? '\t' : ',';
  const auto header = split_row(lines[header_idx], delim);

  static const char* kMandatory[] = {"model_id", "family", "year", "params",
                                     "flops", "activations", "input_size"};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  std::vector<std::string> missing;
  for (const char* m : kMandatory) {
    if (!col.count(m)) missing.push_back(m);
  }
  if (!missing.empty()) {
    std::string names;
    for (const auto& m : missing) names += (names.empty() ? "" : ", ") + m;
    fail(ErrorCode::kParse, "metadata table is missing mandatory column(s): " + names);
  }

  MetadataTable table;
  std::vector<std::pair<std::string, std::size_t>> accuracy_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto& name = header[i];
    const bool reserved = std::find(std::begin(kMandatory), std::end(kMandatory), name) !=
                              std::end(kMandatory) ||
                          name == "url" || name == "flops_convention";
    if (!reserved && !name.empty()) {
      accuracy_cols.emplace_back(name, i);
      table.datasets.push_back(name);
    }
  }

  std::set<std::string> seen;
  for (std::size_t li = header_idx + 1; li < lines.size(); ++li) {
    if (lines[li].find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const auto row = split_row(lines[li], delim);
    const std::size_t line_no = li + 1;
    auto cell = [&](const std::string& name) -> std::string {
      auto it = col.find(name);
      return it != col.end() && it->second < row.size() ? row[it->second] : std::string();
    };
    auto reject = [&](const std::string& msg) { table.errors.push_back({line_no, msg}); };

    ModelRecord rec;
    rec.model_id = cell("model_id");
    if (rec.model_id.empty()) {
      reject("empty model_id");
      continue;
    }
    if (seen.count(rec.model_id)) {
      reject("duplicate model_id " + rec.model_id);
      continue;
    }
    rec.family = parse_family(cell("family"));
    bool ok = true;
    auto number = [&](const std::string& name, bool required) -> std::optional<double> {
      const auto v = cell(name);
      if (v.empty()) {
        if (required) {
          reject(rec.model_id + ": missing " + name);
          ok = false;
        }
        return std::nullopt;
      }
      double d = 0.0;
      if (!parse_number(v, d)) {
        reject(rec.model_id + ": bad " + name + " '" + v + "'");
        ok = false;
        return std::nullopt;
      }
      return d;
    };
    if (auto y = number("year", false)) rec.pub_year = static_cast<int>(*y);
    if (auto p = number("params", true)) rec.params = *p;
    if (auto f = number("flops", true)) rec.flops = *f;
    rec.activations = number("activations", false);
    if (auto s = number("input_size", true)) rec.input_size = static_cast<std::int64_t>(*s);
    for (const auto& [name, idx] : accuracy_cols) {
      if (idx >= row.size() || row[idx].empty()) continue;
      double a = 0.0;
      if (!parse_number(row[idx], a)) {
        reject(rec.model_id + ": bad accuracy for " + name + " '" + row[idx] + "'");
        ok = false;
        continue;
      }
      rec.accuracies[name] = a;
    }
    rec.url = cell("url");
    if (auto conv = cell("flops_convention"); !conv.empty()) rec.flops_convention = conv;
    if (!ok) continue;
    if (auto report = validate(rec); !report.ok()) {
      reject(rec.model_id + ": " + report.violations.front());
      continue;
    }
    seen.insert(rec.model_id);
    table.records.push_back(std::move(rec));
  }
  return table;
}

// -------------------------------------------------------------- dataset

const InferenceSetup* Dataset::find_setup(std::string_view id) const {
  for (const auto& s : setups) {
    if (s.id() == id) return &s;
  }
  return nullptr;
}

const ModelRecord* Dataset::find_model(std::string_view id) const {
  auto it = std::lower_bound(models.begin(), models.end(), id,
                             [](const ModelRecord& m, std::string_view v) { return m.model_id < v; });
  return it != models.end() && it->model_id == id ? &*it : nullptr;
}

std::map<std::string, EnergyMetrics> Dataset::metrics_for(std::string_view setup_id) const {
  std::map<std::string, EnergyMetrics> out;
  for (const auto& [key, m] : metrics) {
    if (key.second == setup_id) out.emplace(key.first, m);
  }
  return out;
}

Dataset build_dataset(const ResultsStore& store, const MetadataTable& metadata) {
  Dataset d;
  for (const auto& [id, s] : store.setups()) d.setups.push_back(s);
  d.models = metadata.records;
  std::sort(d.models.begin(), d.models.end(),
            [](const ModelRecord& a, const ModelRecord& b) { return a.model_id < b.model_id; });
  d.datasets = metadata.datasets;
  std::sort(d.datasets.begin(), d.datasets.end());
  d.datasets.erase(std::unique(d.datasets.begin(), d.datasets.end()), d.datasets.end());

  std::map<std::pair<std::string, std::string>, std::vector<EnergyMetrics>> grouped;
  for (const auto& r : store.runs()) grouped[{r.model_id, r.setup_id}].push_back(r.metrics);
  for (const auto& [key, list] : grouped) {
    d.metrics[key] = best_batch(std::span<const EnergyMetrics>(list));
  }
  return d;
}

// --------------------------------------------------------------- bundle

std::string export_bundle(const Dataset& dataset, const BundleFilters& filters) {
  std::set<std::string> measured;
  for (const auto& [key, m] : dataset.metrics) {
    if (keep(filters.setups, key.second) && dataset.find_setup(key.second)) {
      measured.insert(key.first);
    }
  }
  json models = json::array();
  std::set<std::string> kept_models;
  std::set<std::string> used_datasets;
  for (const auto& m : dataset.models) {
    if (!keep(filters.models, m.model_id) || !measured.count(m.model_id)) continue;
    json acc = json::object();
    for (const auto& [ds, a] : m.accuracies) {
      if (keep(filters.datasets, ds)) {
        acc[ds] = a;
        used_datasets.insert(ds);
      }
    }
    json jm = {{"model_id", m.model_id},
               {"family", std::string(to_string(m.family))},
               {"params", m.params},
               {"flops", m.flops},
               {"flops_convention", m.flops_convention},
               {"input_size", m.input_size},
               {"url", m.url},
               {"accuracies", acc}};
    jm["year"] = m.pub_year ? json(*m.pub_year) : json(nullptr);
    jm["activations"] = m.activations ? json(*m.activations) : json(nullptr);
    models.push_back(std::move(jm));
    kept_models.insert(m.model_id);
  }
  if (kept_models.empty()) {
    fail(ErrorCode::kInsufficientData, "no model has both metadata and measurements");
  }
  json setups = json::array();
  std::set<std::string> kept_setups;
  for (const auto& s : dataset.setups) {
    if (!keep(filters.setups, s.id())) continue;
    setups.push_back(setup_to_json(s));
    kept_setups.insert(s.id());
  }
  json metrics = json::array();
  for (const auto& [key, m] : dataset.metrics) {
    if (!kept_models.count(key.first) || !kept_setups.count(key.second)) continue;
    json jm = metrics_to_json(m);
    jm["model_id"] = key.first;
    jm["setup"] = key.second;
    metrics.push_back(std::move(jm));
  }
  json datasets = json::array();
  for (const auto& ds : dataset.datasets) {
    if (keep(filters.datasets, ds) && used_datasets.count(ds)) datasets.push_back(ds);
  }
  json bundle = {{"format", kBundleFormat},
                 {"version", kSchemaVersion},
                 {"datasets", datasets},
                 {"setups", setups},
                 {"models", models},
                 {"metrics", metrics}};
  return bundle.dump(1) + "\n";
}

Dataset load_bundle(std::string_view text) {
  const json b = json::parse(text, nullptr, false);
  if (b.is_discarded() || !b.is_object()) bad_bundle("not a JSON object");
  const std::string format = b.value("format", "");
  const std::string version = b.contains("version") && b["version"].is_string()
                                  ? b["version"].get<std::string>()
                                  : "<missing>";
  if (format != kBundleFormat || version != kSchemaVersion) {
    fail(ErrorCode::kVersion, "bundle version mismatch (found " + format + " " + version +
                                  ", expected " + std::string(kBundleFormat) + " " +
                                  std::string(kSchemaVersion) + ")");
  }
  Dataset d;
  try {
    for (const auto& ds : b.at("datasets")) d.datasets.push_back(ds.get<std::string>());
    for (const auto& s : b.at("setups")) d.setups.push_back(setup_from_json(s));
    for (const auto& jm : b.at("models")) {
      ModelRecord m;
      m.model_id = jm.at("model_id").get<std::string>();
      m.family = parse_family(jm.at("family").get<std::string>());
      if (!jm.at("year").is_null()) m.pub_year = jm.at("year").get<int>();
      m.params = jm.at("params").get<double>();
      m.flops = jm.at("flops").get<double>();
      m.flops_convention = jm.value("flops_convention", "unspecified");
      if (!jm.at("activations").is_null()) m.activations = jm.at("activations").get<double>();
      m.input_size = jm.at("input_size").get<std::int64_t>();
      m.url = jm.value("url", "");
      for (const auto& [ds, a] : jm.at("accuracies").items()) m.accuracies[ds] = a.get<double>();
      d.models.push_back(std::move(m));
    }
    for (const auto& jm : b.at("metrics")) {
      d.metrics[{jm.at("model_id").get<std::string>(), jm.at("setup").get<std::string>()}] =
          metrics_from_json(jm);
    }
  } catch (const json::exception& e) {
    bad_bundle(e.what());
  }
  std::sort(d.setups.begin(), d.setups.end(),
            [](const InferenceSetup& a, const InferenceSetup& b) { return a.id() < b.id(); });
  std::sort(d.models.begin(), d.models.end(),
            [](const ModelRecord& a, const ModelRecord& b) { return a.model_id < b.model_id; });
  std::sort(d.datasets.begin(), d.datasets.end());
  return d;
}

}  // namespace enerprof
