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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "enerprof/enerprof.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  Scratch() {
    std::string tmpl = (fs::temp_directory_path() / "enerprof-capi-XXXXXX").string();
    REQUIRE(::mkdtemp(tmpl.data()));
    path = tmpl;
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
  fs::path path;
};

std::string share(const std::string& rel) { return std::string(ENERPROF_SHARE_DIR) + "/" + rel; }

std::string column(const ep_table* t, const char* name, size_t row) {
  for (size_t c = 0; c < ep_table_columns(t); ++c) {
    if (std::string(ep_table_column(t, c)) == name) return ep_table_cell(t, row, c);
  }
  return "<missing>";
}

ep_measure_options sim_options(const std::string& out, const std::string& state) {
  ep_measure_options o;
  ep_measure_options_init(&o);
  o.model_id = "toy";
  o.workload = "sim:base_ms=20,per_image_ms=10,oom_at=16";
  o.gpu_label = "A100";
  o.runtime_label = "tensorrt";
  o.tdp_w = 400;
  o.peak_flops = 19.5e12;
  o.sampler.source = EP_SAMPLER_SYNTHETIC;
  o.sampler.spec = "1:200";
  o.sampler.rate_hz = 100;
  o.out = out.c_str();
  o.state_dir = state.c_str();
  return o;
}

}  // namespace

TEST_CASE("capi basics") {
  CHECK(std::string(ep_version()) == "0.1.0");
  CHECK(std::string(ep_status_name(EP_NOT_FOUND)) == "not found");
  ep_store* store = nullptr;
  CHECK(ep_store_open("/nonexistent/x.jsonl", 0, &store) == EP_NOT_FOUND);
  CHECK(store == nullptr);
  CHECK(std::string(ep_last_error()).size() > 0);
  CHECK(ep_store_open(nullptr, 0, &store) == EP_INVALID_ARGUMENT);
}

TEST_CASE("capi calculations") {
  ep_sample s[3] = {{0, 100.0, -1, -1, -1}, {1'000'000'000, 200.0, -1, -1, -1},
                    {2'000'000'000, 200.0, 50, 10, 40}};
  double j = 0;
  REQUIRE(ep_integrate_energy(s, 3, 0, 2'000'000'000, &j) == EP_OK);
  CHECK(j == 350.0);
  CHECK(ep_integrate_energy(s, 3, 2, 1, &j) == EP_INVALID_ARGUMENT);

  const double xs[] = {1, 2, 3, 4}, ys[] = {1, 4, 9, 16};
  double r = 0;
  REQUIRE(ep_spearman(xs, ys, 4, &r) == EP_OK);
  CHECK(r == doctest::Approx(1.0));
  REQUIRE(ep_pearson(xs, ys, 4, &r) == EP_OK);
  CHECK(r < 1.0);
  CHECK(ep_pearson(xs, ys, 1, &r) == EP_INVALID_ARGUMENT);

  double mean = 0, sf = 0;
  const double g[] = {2, 8};
  REQUIRE(ep_geometric_stats(g, 2, &mean, &sf) == EP_OK);
  CHECK(mean == 4.0);

  double naive = 0;
  REQUIRE(ep_naive_estimate(4e9, 19.5e12, 250, &naive) == EP_OK);
  CHECK(std::abs(naive - 4e9 / 19.5e12 * 250) <= 1e-9 * naive);
  double ratio = 0;
  int anomalous = 0;
  REQUIRE(ep_tdp_headroom(420, 400, &ratio, &anomalous) == EP_OK);
  CHECK(anomalous == 1);

  ep_score_params p;
  ep_score_params_init(&p);
  p.weight = 0.0;
  double score = 0;
  REQUIRE(ep_manhattan_score(77.25, 3.0, &p, 0, &score) == EP_OK);
  CHECK(score == 77.25);
  int kept = 1;
  p.min_accuracy = 80;
  REQUIRE(ep_ratio_score(77.25, 3.0, &p, &score, &kept) == EP_OK);
  CHECK(kept == 0);
  CHECK(std::isnan(score));
  p.weight = 2.0;
  CHECK(ep_manhattan_score(77.25, 3.0, &p, 0, &score) == EP_INVALID_ARGUMENT);
}

TEST_CASE("capi frontier") {
  std::vector<double> e, a;
  for (int i = 0; i <= 20; ++i) {
    const double x = std::pow(10.0, -4.0 + 0.2 * i);
    e.push_back(x);
    a.push_back(8.18 * std::log(std::log(x) + 9.23) + 73.65);
  }
  ep_frontier fit;
  REQUIRE(ep_fit_frontier(e.data(), a.data(), e.size(), &fit) == EP_OK);
  double acc = 0;
  REQUIRE(ep_frontier_accuracy(&fit, 0.5, &acc) == EP_OK);
  CHECK(acc == doctest::Approx(8.18 * std::log(std::log(0.5) + 9.23) + 73.65).epsilon(1e-6));
  double energy = 0;
  REQUIRE(ep_extrapolate_energy(&fit, 100.0, &energy) == EP_OK);
  CHECK(std::log10(energy / fit.energy_max) >= 6.0);
  CHECK(ep_fit_frontier(e.data(), a.data(), 2, &fit) == EP_INVALID_ARGUMENT);
}

TEST_CASE("capi telemetry") {
  const char* log =
      "2024/01/01 00:00:00.000, 100.5 W, 90 %, 1024 MiB, 60\n"
      "garbage\n"
      "2024/01/01 00:00:00.100, [N/A], 91 %, 1024 MiB, 60\n"
      "2024/01/01 00:00:00.200, 101.25 W, [N/A], 1024 MiB, 61\n";
  ep_samples* samples = nullptr;
  size_t malformed = 0;
  REQUIRE(ep_parse_sensor_log(log, &samples, &malformed) == EP_OK);
  CHECK(ep_samples_count(samples) == 2);
  CHECK(malformed == 2);
  ep_sample s;
  REQUIRE(ep_samples_get(samples, 1, &s) == EP_OK);
  CHECK(s.power_w == 101.25);
  CHECK(s.util_pct == -1);
  CHECK(s.temp_c == 61);
  CHECK(ep_samples_get(samples, 5, &s) == EP_NOT_FOUND);
  char* text = nullptr;
  REQUIRE(ep_samples_serialize(samples, &text) == EP_OK);
  ep_samples* again = nullptr;
  REQUIRE(ep_parse_sensor_log(text, &again, &malformed) == EP_OK);
  CHECK(malformed == 0);
  CHECK(ep_samples_count(again) == 2);
  ep_string_free(text);
  ep_samples_free(again);
  ep_samples_free(samples);

  ep_sampler_config cfg;
  ep_sampler_config_init(&cfg);
  cfg.source = EP_SAMPLER_SYNTHETIC;
  cfg.spec = "0.05:120";
  cfg.rate_hz = 100;
  ep_sampler* sampler = nullptr;
  REQUIRE(ep_sampler_start(&cfg, &sampler) == EP_OK);
  size_t gaps = 9;
  REQUIRE(ep_sampler_stop(sampler, &samples, &gaps) == EP_OK);
  CHECK(ep_samples_count(samples) >= 6);
  CHECK(gaps == 0);
  CHECK(ep_sampler_stop(sampler, &again, &gaps) == EP_STATE);
  ep_samples_free(samples);
  ep_sampler_free(sampler);

  cfg.source = EP_SAMPLER_REPLAY;
  cfg.spec = "/nonexistent/log";
  CHECK(ep_sampler_start(&cfg, &sampler) == EP_IO);
}

TEST_CASE("capi measure, replay, analyze, score, export, validate") {
  Scratch dir;
  const auto out = dir / "results.jsonl";
  const auto state = dir / "state";
  auto o = sim_options(out, state);
  ep_table* t = nullptr;
  REQUIRE(ep_measure(&o, &t) == EP_OK);
  REQUIRE(ep_table_rows(t) == 4);
  CHECK(column(t, "batch_size", 3) == "8");
  CHECK(column(t, "avg_power_w", 0) == "200");
  char* csv = nullptr;
  REQUIRE(ep_table_render(t, EP_FORMAT_CSV, &csv) == EP_OK);
  CHECK(std::string(csv).rfind("run_id,", 0) == 0);
  ep_string_free(csv);
  ep_table_free(t);

  CHECK(ep_measure(&o, &t) == EP_DUPLICATE);

  REQUIRE(ep_store_replay(out.c_str(), nullptr, &t) == EP_OK);
  CHECK(ep_table_rows(t) == 4);
  for (size_t r = 0; r < 4; ++r) CHECK(column(t, "identical", r) == "yes");
  ep_table_free(t);

  o.model_id = "toy2";
  o.workload = "sim:base_ms=10,per_image_ms=30,oom_at=4";
  o.sampler.spec = "1:260";
  REQUIRE(ep_measure(&o, &t) == EP_OK);
  ep_table_free(t);

  {
    std::ofstream meta(dir / "meta.csv");
    meta << "model_id,family,year,params,flops,activations,input_size,imagenet\n"
            "toy,CNN,2018,1e6,1e9,1e6,224,70\n"
            "toy2,Transformer,2021,5e6,4e9,2e6,224,80\n";
  }
  ep_dataset* ds = nullptr;
  REQUIRE(ep_dataset_load(out.c_str(), (dir / "meta.csv").c_str(), &ds) == EP_OK);
  CHECK(ep_dataset_models(ds) == 2);
  CHECK(ep_dataset_setups(ds) == 1);
  CHECK(ep_dataset_metric_entries(ds) == 2);

  ep_analyze_options ao;
  ep_analyze_options_init(&ao);
  ao.pareto = 1;
  ao.naive_vs_measured = 1;
  ep_report* rep = nullptr;
  REQUIRE(ep_analyze(ds, &ao, &rep) == EP_OK);
  CHECK(ep_report_tables(rep) >= 2);
  CHECK(std::string(ep_table_name(ep_report_table(rep, 0))) == "pareto");
  CHECK(nlohmann::json::parse(ep_report_series(rep)).is_object());
  REQUIRE(ep_report_write(rep, (dir / "report").c_str()) == EP_OK);
  CHECK(fs::exists(dir.path / "report" / "pareto.csv"));
  CHECK(fs::exists(dir.path / "report" / "series.json"));
  ep_report_free(rep);

  ep_score_options so;
  ep_score_options_init(&so);
  so.weight = 0.0;
  REQUIRE(ep_score(ds, &so, &rep) == EP_OK);
  const ep_table* ranking = ep_report_table(rep, 0);
  CHECK(column(ranking, "model_id", 0) == "toy2");
  CHECK(column(ranking, "score", 0) == "80");
  ep_report_free(rep);
  so.min_accuracy = 99;
  CHECK(ep_score(ds, &so, &rep) == EP_INSUFFICIENT_DATA);

  ep_export_options eo;
  ep_export_options_init(&eo);
  const auto bundle_path = dir / "bundle.json";
  eo.out_path = bundle_path.c_str();
  char* bundle = nullptr;
  REQUIRE(ep_export(ds, &eo, &bundle) == EP_OK);
  std::ifstream in(bundle_path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == bundle);
  ep_string_free(bundle);
  ep_dataset_free(ds);

  REQUIRE(ep_dataset_load_bundle(bundle_path.c_str(), &ds) == EP_OK);
  CHECK(ep_dataset_metric_entries(ds) == 2);
  ep_dataset_free(ds);

  size_t errors = 7;
  REQUIRE(ep_validate(out.c_str(), (dir / "meta.csv").c_str(), bundle_path.c_str(), &t, &errors) ==
          EP_OK);
  CHECK(errors == 0);
  ep_table_free(t);
}

TEST_CASE("capi demo fixtures") {
  ep_dataset* ds = nullptr;
  REQUIRE(ep_dataset_load_bundle(share("demo/bundle.json").c_str(), &ds) == EP_OK);
  CHECK(ep_dataset_models(ds) == 10);
  CHECK(ep_dataset_setups(ds) == 2);
  ep_analyze_options ao;
  ep_analyze_options_init(&ao);
  ao.fit = 1;
  ao.points_path = nullptr;
  ep_report* rep = nullptr;
  REQUIRE(ep_analyze(ds, &ao, &rep) == EP_OK);
  ep_report_free(rep);
  ep_dataset_free(ds);

  ep_table* t = nullptr;
  REQUIRE(ep_store_replay(share("demo/results.jsonl").c_str(), nullptr, &t) == EP_OK);
  CHECK(ep_table_rows(t) > 20);
  ep_table_free(t);
}
