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

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "enerprof/enerprof.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct DomainError {
  ep_status status;
  std::string message;
};

void check(ep_status status) {
  if (status != EP_OK) throw DomainError{status, ep_last_error()};
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

ep_format parse_format(const std::string& name) {
  if (name == "csv") return EP_FORMAT_CSV;
  if (name == "json-lines") return EP_FORMAT_JSON_LINES;
  return EP_FORMAT_TEXT;
}

void print_table(const ep_table* table, ep_format format, bool separator) {
  char* text = nullptr;
  check(ep_table_render(table, format, &text));
  if (separator && format == EP_FORMAT_TEXT) std::fputs("\n", stdout);
  std::fputs(text, stdout);
  ep_string_free(text);
}

void print_report(const ep_report* report, ep_format format) {
  for (size_t i = 0; i < ep_report_tables(report); ++i) {
    print_table(ep_report_table(report, i), format, i > 0);
  }
}

struct Owned {
  ep_table* table = nullptr;
  ep_report* report = nullptr;
  ep_dataset* dataset = nullptr;
  ~Owned() {
    ep_table_free(table);
    ep_report_free(report);
    ep_dataset_free(dataset);
  }
};

struct DataSource {
  std::string store;
  std::string metadata;
  std::string bundle;

  void add_to(CLI::App* app, bool with_bundle = true) {
    app->add_option("--in", store, "Results store");
    app->add_option("--metadata", metadata, "Model metadata table (csv or tsv)");
    if (with_bundle) app->add_option("--bundle", bundle, "Explorer bundle instead of --in/--metadata");
  }

  ep_dataset* load() const {
    ep_dataset* d = nullptr;
    if (!bundle.empty()) {
      check(ep_dataset_load_bundle(bundle.c_str(), &d));
    } else if (!store.empty() && !metadata.empty()) {
      check(ep_dataset_load(store.c_str(), metadata.c_str(), &d));
    } else {
      throw CLI::ValidationError("input", "needs --bundle, or --in together with --metadata");
    }
    return d;
  }

  bool given() const { return !bundle.empty() || !store.empty() || !metadata.empty(); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inference energy profiling toolkit", "enerprof"};
  app.require_subcommand(1);
  std::string format_name = "text";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json-lines"}));
  };

  // measure
  ep_measure_options mo;
  ep_measure_options_init(&mo);
  std::string model, workload, gpu, runtime, out, sampler = "live", sampler_spec;
  double tdp = 0.0, peak = 0.0, idle = -1.0;
  std::optional<std::int64_t> max_batch;
  auto* measure = app.add_subcommand("measure", "Sweep batch sizes for one model and store the runs");
  measure->add_option("--model", model, "Model id")->required();
  measure->add_option("--workload", workload, "Workload command, or sim:<params>")->required();
  measure->add_option("--gpu-label", gpu, "GPU label")->required();
  measure->add_option("--runtime-label", runtime, "Runtime label")->required();
  measure->add_option("--tdp", tdp, "GPU TDP in watts")->required();
  measure->add_option("--peak-flops", peak, "Peak FLOP/s of the GPU");
  measure->add_option("--start-batch", mo.start_batch, "First batch size")->capture_default_str();
  measure->add_option("--max-batch", max_batch, "Largest batch size to try");
  measure->add_option("--min-reps", mo.min_reps, "Measured repetitions to exceed")->capture_default_str();
  measure->add_option("--min-runtime-s", mo.min_runtime_s, "Measured seconds to exceed")->capture_default_str();
  measure->add_option("--warmup-reps", mo.warmup_min_reps, "Warm-up repetitions")->capture_default_str();
  measure->add_option("--warmup-runtime-s", mo.warmup_min_runtime_s, "Warm-up seconds")->capture_default_str();
  measure->add_option("--sampler", sampler, "Power source")
      ->check(CLI::IsMember({"live", "replay", "synthetic"}))
      ->capture_default_str();
  measure->add_option("--sampler-spec", sampler_spec,
                      "Telemetry command, replay log, or synthetic profile");
  measure->add_option("--sample-rate", mo.sampler.rate_hz, "Samples per second")->capture_default_str();
  measure->add_option("--idle-baseline", idle, "Idle power annotation in watts");
  measure->add_option("--out", out, "Results store (created when missing)")->required();
  add_format(measure);

  // replay
  std::string replay_store, run_id;
  auto* replay = app.add_subcommand("replay", "Re-derive stored metrics from the raw samples");
  replay->add_option("--in", replay_store, "Results store")->required();
  replay->add_option("--run", run_id, "Run id (default: every run)");
  add_format(replay);

  // analyze
  ep_analyze_options ao;
  ep_analyze_options_init(&ao);
  DataSource analyze_src;
  std::string report_dir, points, a_setups, a_datasets;
  std::vector<std::string> paired;
  bool pareto = false, fit = false, naive = false, yearly = false, corr = false, insize = false;
  auto* analyze = app.add_subcommand("analyze", "Statistics over measured models");
  analyze_src.add_to(analyze);
  analyze->add_option("--report", report_dir, "Write CSV tables and series.json here");
  analyze->add_flag("--pareto", pareto, "Pareto front per setup");
  analyze->add_flag("--fit", fit, "Nested-log frontier fit and extrapolation");
  analyze->add_flag("--naive-vs-measured", naive, "FLOPs-based estimate against measurement");
  analyze->add_option("--paired", paired, "Baseline and optimized setup ids")->expected(2);
  analyze->add_flag("--yearly", yearly, "Cumulative convex hull per publication year");
  analyze->add_flag("--correlations", corr, "Cross-setup and complexity correlations");
  analyze->add_flag("--input-size", insize, "Resolution variants of the same model");
  analyze->add_option("--points", points, "CSV of energy,accuracy points analysed as one group");
  analyze->add_option("--setups", a_setups, "Comma-separated setup ids");
  analyze->add_option("--datasets", a_datasets, "Comma-separated accuracy datasets");
  analyze->add_option("--target", ao.fit_target, "Accuracy for the extrapolation")->capture_default_str();
  add_format(analyze);

  // score
  ep_score_options so;
  ep_score_options_init(&so);
  DataSource score_src;
  std::string metric = "manhattan", norm = "auto", s_setups, s_datasets, score_report;
  std::optional<double> fixed_norm;
  bool balanced = false;
  auto* score = app.add_subcommand("score", "Rank models by a combined accuracy/energy score");
  score_src.add_to(score);
  score->add_option("--metric", metric, "Score metric")
      ->check(CLI::IsMember({"ratio", "manhattan"}))
      ->capture_default_str();
  score->add_option("--weight", so.weight, "Energy weight W")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  score->add_option("--min-accuracy", so.min_accuracy, "Accuracy threshold in percent")->capture_default_str();
  score->add_option("--norm", norm, "Energy normalisation: auto or joules")->capture_default_str();
  score->add_option("--fixed-norm", fixed_norm, "Pinned normalisation in joules");
  score->add_option("--setups", s_setups, "Comma-separated setup ids");
  score->add_option("--datasets", s_datasets, "Comma-separated accuracy datasets");
  score->add_option("--top", so.top_n, "Keep the best n models per setup");
  score->add_option("--grid", so.grid, "Also emit an n x n score grid");
  score->add_flag("--balanced", balanced, "Scale the energy term to 0-100");
  score->add_option("--report", score_report, "Write CSV tables and series.json here");
  add_format(score);

  // export
  ep_export_options eo;
  ep_export_options_init(&eo);
  DataSource export_src;
  std::string export_out, e_setups, e_models, e_datasets;
  auto* exp = app.add_subcommand("export", "Write the explorer bundle");
  export_src.add_to(exp);
  exp->add_option("--out", export_out, "Bundle path (default: standard output)");
  exp->add_option("--setups", e_setups, "Comma-separated setup ids");
  exp->add_option("--models", e_models, "Comma-separated model ids");
  exp->add_option("--datasets", e_datasets, "Comma-separated accuracy datasets");

  // validate
  DataSource validate_src;
  auto* val = app.add_subcommand("validate", "Check stores, metadata tables and bundles");
  validate_src.add_to(val);
  add_format(val);

  if (argc < 2) {
    std::cerr << app.help();
    return kExitUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "enerprof: " << e.what() << "\n\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return kExitUsage;
  }

  const ep_format format = parse_format(format_name);
  Owned owned;
  try {
    if (*measure) {
      mo.model_id = model.c_str();
      mo.workload = workload.c_str();
      mo.gpu_label = gpu.c_str();
      mo.runtime_label = runtime.c_str();
      mo.tdp_w = tdp;
      mo.peak_flops = peak;
      mo.max_batch = max_batch.value_or(0);
      mo.sampler.source = sampler == "replay"      ? EP_SAMPLER_REPLAY
                          : sampler == "synthetic" ? EP_SAMPLER_SYNTHETIC
                                                   : EP_SAMPLER_LIVE;
      mo.sampler.spec = opt(sampler_spec);
      mo.out = out.c_str();
      mo.idle_baseline_w = idle;
      check(ep_measure(&mo, &owned.table));
      print_table(owned.table, format, false);
    } else if (*replay) {
      check(ep_store_replay(replay_store.c_str(), opt(run_id), &owned.table));
      print_table(owned.table, format, false);
    } else if (*analyze) {
      ao.pareto = pareto;
      ao.fit = fit;
      ao.naive_vs_measured = naive;
      ao.yearly = yearly;
      ao.correlations = corr;
      ao.input_size = insize;
      if (paired.size() == 2) {
        ao.paired_baseline = paired[0].c_str();
        ao.paired_optimized = paired[1].c_str();
      }
      ao.setups = opt(a_setups);
      ao.datasets = opt(a_datasets);
      ao.points_path = opt(points);
      if (analyze_src.given() || points.empty()) owned.dataset = analyze_src.load();
      check(ep_analyze(owned.dataset, &ao, &owned.report));
      if (!report_dir.empty()) check(ep_report_write(owned.report, report_dir.c_str()));
      print_report(owned.report, format);
    } else if (*score) {
      so.metric = metric.c_str();
      so.balanced = balanced;
      if (fixed_norm) {
        so.fixed_norm_j = *fixed_norm;
      } else if (norm != "auto") {
        try {
          std::size_t used = 0;
          so.fixed_norm_j = std::stod(norm, &used);
          if (used != norm.size()) throw std::invalid_argument(norm);
        } catch (const std::exception&) {
          throw CLI::ValidationError("--norm", "expects auto or a number of joules");
        }
      }
      if ((fixed_norm || norm != "auto") && so.fixed_norm_j <= 0.0) {
        throw CLI::ValidationError("--norm", "must be positive");
      }
      so.setups = opt(s_setups);
      so.datasets = opt(s_datasets);
      owned.dataset = score_src.load();
      check(ep_score(owned.dataset, &so, &owned.report));
      if (!score_report.empty()) check(ep_report_write(owned.report, score_report.c_str()));
      print_report(owned.report, format);
    } else if (*exp) {
      eo.setups = opt(e_setups);
      eo.models = opt(e_models);
      eo.datasets = opt(e_datasets);
      eo.out_path = opt(export_out);
      owned.dataset = export_src.load();
      char* bundle = nullptr;
      check(ep_export(owned.dataset, &eo, export_out.empty() ? &bundle : nullptr));
      if (bundle) {
        std::fputs(bundle, stdout);
        ep_string_free(bundle);
      }
    } else if (*val) {
      if (!validate_src.given()) {
        throw CLI::ValidationError("validate", "needs --in, --metadata or --bundle");
      }
      size_t errors = 0;
      check(ep_validate(opt(validate_src.store), opt(validate_src.metadata),
                        opt(validate_src.bundle), &owned.table, &errors));
      print_table(owned.table, format, false);
      if (errors > 0) {
        std::cerr << "enerprof: " << errors << " validation error(s)\n";
        return kExitDomain;
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "enerprof: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "enerprof: " << ep_status_name(e.status) << ": " << e.message << '\n';
    return kExitDomain;
  }
  return 0;
}
