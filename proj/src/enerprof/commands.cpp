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

#include "enerprof/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "enerprof/analysis.hpp"
#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"
#include "enerprof/frontier.hpp"
#include "enerprof/stats.hpp"
#include "json.hpp"

namespace enerprof {
namespace {

using nlohmann::json;

constexpr std::size_t kCurvePoints = 64;

std::string join_flags(const std::set<QualityFlag>& flags) {
  std::string out;
  for (auto f : flags) {
    if (!out.empty()) out += ';';
    out += to_string(f);
  }
  return out;
}

std::vector<Cell> metric_cells(const EnergyMetrics& m) {
  return {m.energy_per_image, m.throughput, m.latency, m.avg_power, m.wall_time};
}

std::vector<std::string> selected_setups(const Dataset& dataset,
                                         const std::vector<std::string>& wanted) {
  std::vector<std::string> out;
  if (wanted.empty()) {
    for (const auto& s : dataset.setups) out.push_back(s.id());
    return out;
  }
  for (const auto& id : wanted) {
    if (!dataset.find_setup(id)) fail(ErrorCode::kNotFound, "unknown setup " + id);
    out.push_back(id);
  }
  return out;
}

void check_datasets(const Dataset& dataset, const std::vector<std::string>& wanted) {
  for (const auto& ds : wanted) {
    if (std::find(dataset.datasets.begin(), dataset.datasets.end(), ds) == dataset.datasets.end()) {
      fail(ErrorCode::kNotFound, "unknown dataset " + ds);
    }
  }
}

std::vector<EnergyAccuracyPoint> setup_points(const Dataset& dataset, const std::string& setup,
                                              const std::vector<std::string>& datasets) {
  std::vector<EnergyAccuracyPoint> pts;
  for (const auto& [model_id, m] : dataset.metrics_for(setup)) {
    const auto* model = dataset.find_model(model_id);
    if (!model) continue;
    if (auto acc = model_accuracy(*model, datasets, dataset.datasets)) {
      pts.push_back({m.energy_per_image, *acc, model_id});
    }
  }
  return pts;
}

json point_json(const EnergyAccuracyPoint& p) {
  return {{"id", p.id}, {"energy", p.energy}, {"accuracy", p.accuracy}};
}

json points_json(const std::vector<EnergyAccuracyPoint>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(point_json(p));
  return arr;
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    out[i] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

void add_pareto(Report& report, json& series,
                const std::vector<std::pair<std::string, std::vector<EnergyAccuracyPoint>>>& groups) {
  Table t{"pareto", {"group", "model_id", "energy_per_image_j", "accuracy_pct"}, {}};
  json s = json::object();
  for (const auto& [group, pts] : groups) {
    const auto front = pareto_front(pts);
    for (const auto& p : front) t.add({group, p.id, p.energy, p.accuracy});
    s[group] = {{"points", points_json(pts)}, {"front", points_json(front)}};
  }
  report.tables.push_back(std::move(t));
  series["pareto"] = std::move(s);
}

void add_fit(Report& report, json& series,
             const std::vector<std::pair<std::string, std::vector<EnergyAccuracyPoint>>>& groups,
             double target) {
  Table t{"fit",
          {"group", "front_points", "c1", "c2", "c3", "residual_norm", "energy_min_j",
           "energy_max_j", "target_accuracy_pct", "extrapolated_energy_j",
           "orders_above_max", "status"},
          {}};
  json s = json::object();
  for (const auto& [group, pts] : groups) {
    const auto front = pareto_front(pts);
    const auto n = static_cast<std::int64_t>(front.size());
    try {
      const auto fit = fit_frontier(front);
      json curve = json::array();
      for (double e : log_space(fit.energy_min, fit.energy_max, kCurvePoints)) {
        curve.push_back({e, fit.accuracy_at(e)});
      }
      json entry = {{"c1", fit.c1}, {"c2", fit.c2}, {"c3", fit.c3}, {"curve", curve},
                    {"front", points_json(front)}, {"target_accuracy", target}};
      Cell extrapolated, orders;
      std::string status = "ok";
      try {
        const double e = extrapolate_energy(fit, target);
        extrapolated = e;
        orders = std::log10(e / fit.energy_max);
        entry["extrapolated_energy"] = e;
      } catch (const Error& err) {
        status = err.what();
      }
      t.add({group, n, fit.c1, fit.c2, fit.c3, fit.residual_norm, fit.energy_min, fit.energy_max,
             target, extrapolated, orders, status});
      s[group] = std::move(entry);
    } catch (const Error& err) {
      t.add({group, n, {}, {}, {}, {}, {}, {}, target, {}, {}, std::string(err.what())});
    }
  }
  report.tables.push_back(std::move(t));
  series["fit"] = std::move(s);
}

void add_naive(Report& report, json& series, const Dataset& dataset,
               const std::vector<std::string>& setups) {
  Table rows{"naive_vs_measured",
             {"setup", "model_id", "flops", "estimated_j", "measured_j", "factor"}, {}};
  Table summary{"naive_summary", {"setup", "models", "geo_mean_factor", "geo_std_factor"}, {}};
  json s = json::object();
  bool any = false;
  for (const auto& id : setups) {
    const auto* setup = dataset.find_setup(id);
    if (!setup->peak_compute) continue;
    any = true;
    std::vector<double> measured, estimated;
    json pts = json::array();
    for (const auto& [model_id, m] : dataset.metrics_for(id)) {
      const auto* model = dataset.find_model(model_id);
      if (!model || model->flops <= 0.0) continue;
      const double est = naive_estimate(model->flops, *setup);
      measured.push_back(m.energy_per_image);
      estimated.push_back(est);
      rows.add({id, model_id, model->flops, est, m.energy_per_image, m.energy_per_image / est});
      pts.push_back({{"id", model_id}, {"estimated", est}, {"measured", m.energy_per_image}});
    }
    if (measured.empty()) continue;
    const auto under = underestimation_factors(measured, estimated);
    summary.add({id, static_cast<std::int64_t>(measured.size()), under.summary.mean,
                 under.summary.std});
    s[id] = {{"points", pts}, {"geo_mean", under.summary.mean}, {"geo_std", under.summary.std}};
  }
  if (!any) fail(ErrorCode::kInvalidArgument, "no selected setup has a peak compute rating");
  report.tables.push_back(std::move(rows));
  report.tables.push_back(std::move(summary));
  series["naive_vs_measured"] = std::move(s);
}

void add_paired(Report& report, json& series, const Dataset& dataset,
                const std::pair<std::string, std::string>& pair) {
  for (const auto& id : {pair.first, pair.second}) {
    if (!dataset.find_setup(id)) fail(ErrorCode::kNotFound, "unknown setup " + id);
  }
  const auto base = dataset.metrics_for(pair.first);
  const auto opt = dataset.metrics_for(pair.second);
  const auto result = paired_improvement(base, opt);
  Table rows{"paired",
             {"model_id", "baseline_energy_j", "optimized_energy_j", "energy_ratio",
              "throughput_ratio"},
             {}};
  json pts = json::array();
  for (const auto& p : result.pairs) {
    rows.add({p.model_id, base.at(p.model_id).energy_per_image,
              opt.at(p.model_id).energy_per_image, p.energy_ratio, p.throughput_ratio});
    pts.push_back({{"id", p.model_id}, {"energy_ratio", p.energy_ratio},
                   {"throughput_ratio", p.throughput_ratio}});
  }
  Table summary{"paired_summary",
                {"baseline", "optimized", "pairs", "energy_geo_mean", "energy_geo_std",
                 "throughput_geo_mean", "throughput_geo_std", "log_correlation"},
                {}};
  Cell corr;
  if (result.log_correlation) corr = *result.log_correlation;
  summary.add({pair.first, pair.second, static_cast<std::int64_t>(result.pairs.size()),
               result.energy.mean, result.energy.std, result.throughput.mean,
               result.throughput.std, corr});
  report.tables.push_back(std::move(rows));
  report.tables.push_back(std::move(summary));
  json entry = {{"baseline", pair.first}, {"optimized", pair.second}, {"pairs", pts},
                {"energy_geo_mean", result.energy.mean},
                {"throughput_geo_mean", result.throughput.mean}};
  series["paired"] = std::move(entry);
}

void add_yearly(Report& report, json& series, const Dataset& dataset,
                const std::vector<std::string>& setups, const std::vector<std::string>& datasets) {
  Table t{"yearly_hulls",
          {"setup", "year", "model_count", "vertex", "model_id", "energy_per_image_j",
           "accuracy_pct"},
          {}};
  json s = json::object();
  for (const auto& id : setups) {
    std::vector<DatedPoint> dated;
    for (const auto& p : setup_points(dataset, id, datasets)) {
      const auto* model = dataset.find_model(p.id);
      if (model->pub_year) dated.push_back({p, *model->pub_year});
    }
    json years = json::array();
    for (const auto& y : yearly_hulls(dated)) {
      std::int64_t v = 0;
      for (const auto& p : y.hull) {
        t.add({id, static_cast<std::int64_t>(y.year), static_cast<std::int64_t>(y.model_count), v++,
               p.id, p.energy, p.accuracy});
      }
      years.push_back({{"year", y.year}, {"model_count", y.model_count}, {"hull", points_json(y.hull)}});
    }
    s[id] = std::move(years);
  }
  report.tables.push_back(std::move(t));
  series["yearly"] = std::move(s);
}

void add_correlations(Report& report, json& series, const Dataset& dataset,
                      const std::vector<std::string>& setups) {
  Table cross{"setup_correlations",
              {"setup_a", "setup_b", "shared_models", "pearson", "spearman"}, {}};
  Table complexity{"complexity_correlations",
                   {"setup", "quantity", "models", "pearson", "spearman"}, {}};
  json s = {{"setups", json::array()}, {"complexity", json::array()}};
  for (std::size_t i = 0; i < setups.size(); ++i) {
    for (std::size_t j = i + 1; j < setups.size(); ++j) {
      std::map<std::string, std::map<std::string, double>> energy;
      for (const auto& id : {setups[i], setups[j]}) {
        auto& slot = energy[id];
        for (const auto& [model, m] : dataset.metrics_for(id)) slot[model] = m.energy_per_image;
      }
      try {
        for (const auto& c : cross_setup_correlation(energy)) {
          cross.add({c.setup_a, c.setup_b, static_cast<std::int64_t>(c.shared_models), c.pearson,
                     c.spearman});
          s["setups"].push_back({{"setup_a", c.setup_a}, {"setup_b", c.setup_b},
                                 {"pearson", c.pearson}, {"spearman", c.spearman}});
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kInsufficientData) throw;
      }
    }
  }
  for (const auto& id : setups) {
    const auto metrics = dataset.metrics_for(id);
    for (const char* quantity : {"params", "flops", "activations"}) {
      std::vector<double> xs, ys;
      for (const auto& [model_id, m] : metrics) {
        const auto* model = dataset.find_model(model_id);
        if (!model) continue;
        std::optional<double> x;
        if (quantity == std::string_view("params")) x = model->params;
        if (quantity == std::string_view("flops")) x = model->flops;
        if (quantity == std::string_view("activations")) x = model->activations;
        if (!x) continue;
        xs.push_back(*x);
        ys.push_back(m.energy_per_image);
      }
      try {
        const double p = pearson(xs, ys);
        const double r = spearman(xs, ys);
        complexity.add({id, std::string(quantity), static_cast<std::int64_t>(xs.size()), p, r});
        s["complexity"].push_back({{"setup", id}, {"quantity", quantity}, {"pearson", p},
                                   {"spearman", r}});
      } catch (const Error&) {
      }
    }
  }
  report.tables.push_back(std::move(cross));
  report.tables.push_back(std::move(complexity));
  series["correlations"] = std::move(s);
}

void add_input_size(Report& report, json& series, const Dataset& dataset,
                    const std::vector<std::string>& setups,
                    const std::vector<std::string>& datasets) {
  Table rows{"input_size",
             {"setup", "group", "model_id", "input_size", "accuracy_pct", "energy_per_image_j",
              "accuracy_delta", "energy_ratio"},
             {}};
  Table fits{"input_size_fit", {"setup", "group", "slope_j_per_pixel", "intercept_j"}, {}};
  json s = json::object();
  for (const auto& id : setups) {
    std::map<std::string, std::vector<SizedEntry>> groups;
    for (const auto& p : setup_points(dataset, id, datasets)) {
      const auto* model = dataset.find_model(p.id);
      groups[input_size_group_key(p.id, model->input_size)].push_back(
          {p.id, model->input_size, p.accuracy, p.energy});
    }
    json gs = json::object();
    for (const auto& g : input_size_scaling(groups).groups) {
      json entries = json::array();
      for (std::size_t k = 0; k < g.entries.size(); ++k) {
        const auto& e = g.entries[k];
        rows.add({id, g.group, e.model_id, e.input_size, e.accuracy, e.energy,
                  g.accuracy_deltas[k], g.energy_ratios[k]});
        entries.push_back({{"id", e.model_id}, {"input_size", e.input_size},
                           {"accuracy", e.accuracy}, {"energy", e.energy}});
      }
      if (g.energy_per_pixel) {
        fits.add({id, g.group, g.energy_per_pixel->slope, g.energy_per_pixel->intercept});
      }
      gs[g.group] = std::move(entries);
    }
    s[id] = std::move(gs);
  }
  report.tables.push_back(std::move(rows));
  report.tables.push_back(std::move(fits));
  series["input_size"] = std::move(s);
}

}  // namespace

std::vector<std::string> split_list(std::string_view list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto comma = list.find(',', start);
    if (comma == std::string_view::npos) comma = list.size();
    auto item = list.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.emplace_back(item);
    start = comma + 1;
  }
  return out;
}

Table measure(const MeasureRequest& r) {
  if (r.model_id.empty()) fail(ErrorCode::kInvalidArgument, "a model id is required");
  if (r.workload.empty()) fail(ErrorCode::kInvalidArgument, "a workload is required");
  if (r.out.empty()) fail(ErrorCode::kInvalidArgument, "an output store is required");
  if (auto v = validate(r.setup); !v.ok()) fail(ErrorCode::kInvalidArgument, v.violations.front());
  if (auto v = validate(r.sweep); !v.ok()) fail(ErrorCode::kInvalidArgument, v.violations.front());

  GpuLock lock(r.state_dir.empty() ? default_state_dir() : r.state_dir, r.setup.gpu_label);
  auto store = ResultsStore::open(r.out, true);
  auto workload = make_workload(r.workload);

  Table t{"runs",
          {"run_id", "model_id", "setup", "batch_size", "batches", "energy_per_image_j",
           "throughput_ips", "latency_s", "avg_power_w", "wall_time_s", "flags"},
          {}};
  run_sweep(*workload, r.model_id, r.setup, r.sweep, r.sampler, [&](const RunMeasurement& run) {
    RunMeasurement copy = run;
    copy.idle_baseline = r.idle_baseline;
    const auto id = store.save_run(copy);
    const auto& m = *copy.metrics;
    std::vector<Cell> row = {id, copy.model_id, copy.setup.id(), copy.batch_size,
                             static_cast<std::int64_t>(copy.batch_marks.size())};
    for (auto& c : metric_cells(m)) row.push_back(std::move(c));
    row.push_back(join_flags(copy.quality_flags));
    t.add(std::move(row));
  });
  return t;
}

Table replay(const std::filesystem::path& path, const std::string& run_id) {
  const auto store = ResultsStore::open(path);
  std::vector<const RunSummary*> selected;
  if (run_id.empty()) {
    for (const auto& r : store.runs()) selected.push_back(&r);
    if (selected.empty()) fail(ErrorCode::kInsufficientData, "the store holds no runs");
  } else {
    const auto* r = store.find(run_id);
    if (!r) fail(ErrorCode::kNotFound, "no run with id " + run_id);
    selected.push_back(r);
  }
  Table t{"replay",
          {"run_id", "energy_per_image_j", "throughput_ips", "latency_s", "avg_power_w",
           "wall_time_s", "identical"},
          {}};
  std::vector<std::string> mismatched;
  for (const auto* summary : selected) {
    const auto run = store.load_run(summary->id);
    const auto derived = derive_metrics(run);
    const bool same = derived == summary->metrics;
    if (!same) mismatched.push_back(summary->id);
    std::vector<Cell> row = {summary->id};
    for (auto& c : metric_cells(derived)) row.push_back(std::move(c));
    row.push_back(std::string(same ? "yes" : "no"));
    t.add(std::move(row));
  }
  if (!mismatched.empty()) {
    std::string ids;
    for (const auto& id : mismatched) ids += (ids.empty() ? "" : ", ") + id;
    fail(ErrorCode::kMismatch, "re-derived metrics differ from stored values for " + ids);
  }
  return t;
}

std::optional<std::string> default_dataset(const std::vector<std::string>& available) {
  if (std::find(available.begin(), available.end(), "imagenet") != available.end()) {
    return "imagenet";
  }
  if (available.empty()) return std::nullopt;
  return *std::min_element(available.begin(), available.end());
}

std::optional<double> model_accuracy(const ModelRecord& model,
                                     const std::vector<std::string>& datasets,
                                     const std::vector<std::string>& available) {
  if (datasets.empty()) {
    const auto ds = default_dataset(available);
    if (!ds) return std::nullopt;
    auto it = model.accuracies.find(*ds);
    if (it == model.accuracies.end()) return std::nullopt;
    return it->second;
  }
  double sum = 0.0;
  for (const auto& ds : datasets) {
    auto it = model.accuracies.find(ds);
    if (it == model.accuracies.end()) return std::nullopt;
    sum += it->second;
  }
  return sum / static_cast<double>(datasets.size());
}

std::vector<EnergyAccuracyPoint> read_points(std::string_view text) {
  std::vector<EnergyAccuracyPoint> pts;
  std::optional<std::size_t> ecol, acol, icol;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(start, nl - start));
    start = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      auto comma = line.find(',', pos);
      auto f = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      f.erase(0, f.find_first_not_of(' '));
      f.erase(f.find_last_not_of(' ') + 1);
      fields.push_back(f);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (!ecol) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "energy" || fields[i] == "energy_per_image_j") ecol = i;
        if (fields[i] == "accuracy" || fields[i] == "accuracy_pct") acol = i;
        if (fields[i] == "id" || fields[i] == "model_id") icol = i;
      }
      if (!ecol || !acol) fail(ErrorCode::kParse, "points table needs energy and accuracy columns");
      continue;
    }
    auto number = [&](std::size_t col) {
      double v = 0.0;
      if (col >= fields.size()) fail(ErrorCode::kParse, "points line " + std::to_string(line_no) + ": too few fields");
      const auto& f = fields[col];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        fail(ErrorCode::kParse, "points line " + std::to_string(line_no) + ": bad number '" + f + "'");
      }
      return v;
    };
    EnergyAccuracyPoint p{number(*ecol), number(*acol), ""};
    p.id = icol && *icol < fields.size() ? fields[*icol] : "p" + std::to_string(pts.size());
    pts.push_back(std::move(p));
  }
  if (pts.empty()) fail(ErrorCode::kParse, "points table holds no rows");
  return pts;
}

Report analyze(const Dataset* dataset, const AnalyzeRequest& r) {
  const bool needs_dataset =
      r.naive_vs_measured || r.yearly || r.correlations || r.input_size || r.paired;
  if (!(r.pareto || r.fit || needs_dataset)) {
    fail(ErrorCode::kInvalidArgument, "no analysis selected");
  }
  if (!dataset && (needs_dataset || r.points.empty())) {
    fail(ErrorCode::kInvalidArgument, "a results store or bundle is required");
  }
  std::vector<std::string> setups;
  if (dataset) {
    setups = selected_setups(*dataset, r.setups);
    check_datasets(*dataset, r.datasets);
  }
  std::vector<std::pair<std::string, std::vector<EnergyAccuracyPoint>>> groups;
  for (const auto& id : setups) groups.emplace_back(id, setup_points(*dataset, id, r.datasets));
  if (!r.points.empty()) groups.emplace_back("points", r.points);

  Report report;
  json series = json::object();
  if (r.pareto) add_pareto(report, series, groups);
  if (r.fit) add_fit(report, series, groups, r.fit_target);
  if (r.naive_vs_measured) add_naive(report, series, *dataset, setups);
  if (r.paired) add_paired(report, series, *dataset, *r.paired);
  if (r.yearly) add_yearly(report, series, *dataset, setups, r.datasets);
  if (r.correlations) add_correlations(report, series, *dataset, setups);
  if (r.input_size) add_input_size(report, series, *dataset, setups, r.datasets);
  report.series_json = series.dump(1) + "\n";
  return report;
}

void write_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& t : report.tables) {
    write_text_file(dir / (t.name + ".csv"), render(t, TableFormat::kCsv));
  }
  write_text_file(dir / "series.json", report.series_json);
}

Report score(const Dataset& dataset, const ScoreRequest& r) {
  ScoreParams base{r.weight, r.fixed_norm.value_or(1.0), r.min_accuracy};
  if (auto v = validate(base); !v.ok()) fail(ErrorCode::kInvalidArgument, v.violations.front());
  check_datasets(dataset, r.datasets);
  const auto setups = selected_setups(dataset, r.setups);

  Report report;
  Table ranking{"ranking",
                {"setup", "rank", "model_id", "accuracy_pct", "energy_per_image_j", "score",
                 "norm_j"},
                {}};
  Table grid{"score_grid", {"setup", "accuracy_pct", "energy_per_image_j", "score"}, {}};
  json series = json::object();
  for (const auto& id : setups) {
    std::vector<ScoreCandidate> candidates;
    for (const auto& p : setup_points(dataset, id, r.datasets)) {
      candidates.push_back({p.id, p.accuracy, p.energy});
    }
    const auto norm = r.fixed_norm ? r.fixed_norm : auto_norm(candidates, r.min_accuracy);
    if (!norm) continue;
    RankOptions options{r.metric, r.scale, base, r.top_n};
    options.params.norm = *norm;
    const auto ranked = rank(candidates, options);
    json ranked_json = json::array();
    std::int64_t position = 1;
    for (const auto& m : ranked) {
      ranking.add({id, position++, m.model_id, m.accuracy, m.energy, m.score, *norm});
      ranked_json.push_back({{"id", m.model_id}, {"score", m.score}});
    }
    json entry = {{"norm", *norm}, {"ranking", ranked_json}};
    if (r.grid > 0) {
      double e_lo = candidates.front().energy, e_hi = e_lo;
      double a_lo = candidates.front().accuracy;
      for (const auto& c : candidates) {
        e_lo = std::min(e_lo, c.energy);
        e_hi = std::max(e_hi, c.energy);
        a_lo = std::min(a_lo, c.accuracy);
      }
      const auto g = score_grid(options, e_lo / 2.0, e_hi * 2.0,
                                std::max(0.0, std::floor(a_lo) - 5.0), 100.0, r.grid);
      for (std::size_t a = 0; a < g.accuracies.size(); ++a) {
        for (std::size_t e = 0; e < g.energies.size(); ++e) {
          Cell v;
          if (!std::isnan(g.values[a][e])) v = g.values[a][e];
          grid.add({id, g.accuracies[a], g.energies[e], v});
        }
      }
      json values = json::array();
      for (const auto& row : g.values) {
        json jr = json::array();
        for (double v : row) jr.push_back(std::isnan(v) ? json(nullptr) : json(v));
        values.push_back(std::move(jr));
      }
      entry["grid"] = {{"energies", g.energies}, {"accuracies", g.accuracies}, {"values", values}};
    }
    series[id] = std::move(entry);
  }
  if (ranking.rows.empty()) {
    fail(ErrorCode::kInsufficientData, "no model meets the minimum accuracy on any selected setup");
  }
  report.tables.push_back(std::move(ranking));
  if (r.grid > 0) report.tables.push_back(std::move(grid));
  report.series_json = json({{"metric", std::string(to_string(r.metric))},
                             {"weight", r.weight},
                             {"balanced", r.scale == ManhattanScale::kBalanced},
                             {"setups", series}})
                           .dump(1) +
                       "\n";
  return report;
}

Dataset load_dataset(const std::filesystem::path& store, const std::filesystem::path& metadata) {
  const auto results = ResultsStore::open(store);
  const auto table = ingest_metadata(read_text_file(metadata));
  return build_dataset(results, table);
}

Table validate_inputs(const std::optional<std::filesystem::path>& store,
                      const std::optional<std::filesystem::path>& metadata,
                      const std::optional<std::filesystem::path>& bundle) {
  if (!store && !metadata && !bundle) {
    fail(ErrorCode::kInvalidArgument, "nothing to validate");
  }
  Table t{"validation", {"source", "item", "severity", "message"}, {}};
  auto error = [&](const std::string& source, const std::string& item, const std::string& msg) {
    t.add({source, item, std::string("error"), msg});
  };
  auto report = [&](const std::string& source, const std::string& item,
                    const ValidationReport& v) {
    for (const auto& msg : v.violations) error(source, item, msg);
  };
  if (store) {
    try {
      const auto results = ResultsStore::open(*store);
      for (const auto& s : results.runs()) {
        try {
          const auto run = results.load_run(s.id);
          report("store", s.id, validate(run));
          if (tdp_headroom(s.metrics, run.setup).anomalous) {
            t.add({std::string("store"), s.id, std::string("warning"),
                   std::string("average power above TDP")});
          }
          if (s.quality_flags.count(QualityFlag::kSamplerGap)) {
            t.add({std::string("store"), s.id, std::string("warning"),
                   std::string("sampler gap")});
          }
        } catch (const Error& e) {
          error("store", s.id, e.what());
        }
      }
    } catch (const Error& e) {
      error("store", store->string(), e.what());
    }
  }
  if (metadata) {
    try {
      const auto table = ingest_metadata(read_text_file(*metadata));
      for (const auto& e : table.errors) error("metadata", "line " + std::to_string(e.line), e.message);
    } catch (const Error& e) {
      error("metadata", metadata->string(), e.what());
    }
  }
  if (bundle) {
    try {
      const auto d = load_bundle(read_text_file(*bundle));
      for (const auto& s : d.setups) report("bundle", s.id(), validate(s));
      for (const auto& m : d.models) report("bundle", m.model_id, validate(m));
      for (const auto& [key, m] : d.metrics) {
        const auto item = key.first + "@" + key.second;
        report("bundle", item, validate(m));
        if (!d.find_model(key.first)) error("bundle", item, "metrics for unknown model");
        const auto* setup = d.find_setup(key.second);
        if (!setup) {
          error("bundle", item, "metrics for unknown setup");
        } else if (tdp_headroom(m, *setup).anomalous) {
          t.add({std::string("bundle"), item, std::string("warning"),
                 std::string("average power above TDP")});
        }
      }
    } catch (const Error& e) {
      error("bundle", bundle->string(), e.what());
    }
  }
  return t;
}

}  // namespace enerprof
