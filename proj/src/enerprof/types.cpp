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

#include "enerprof/types.hpp"

#include <cctype>
#include <cmath>

#include "enerprof/energy.hpp"
#include "enerprof/error.hpp"

namespace enerprof {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

void append(ValidationReport& into, const ValidationReport& from,
            std::string_view prefix) {
  for (const auto& v : from.violations) {
    into.violations.push_back(std::string(prefix) + v);
  }
}

}  // namespace

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kMlp: return "MLP";
    case ModelFamily::kCnn: return "CNN";
    case ModelFamily::kTransformer: return "Transformer";
    case ModelFamily::kHybrid: return "Hybrid";
    case ModelFamily::kOther: return "Other";
  }
  return "Other";
}

ModelFamily parse_family(std::string_view name) {
  for (auto f : {ModelFamily::kMlp, ModelFamily::kCnn, ModelFamily::kTransformer,
                 ModelFamily::kHybrid}) {
    if (iequals(name, to_string(f))) return f;
  }
  return ModelFamily::kOther;
}

std::string_view to_string(QualityFlag flag) {
  switch (flag) {
    case QualityFlag::kSamplerGap: return "sampler-gap";
    case QualityFlag::kTdpAnomaly: return "tdp-anomaly";
  }
  return "unknown";
}

std::optional<QualityFlag> parse_quality_flag(std::string_view name) {
  if (name == "sampler-gap") return QualityFlag::kSamplerGap;
  if (name == "tdp-anomaly") return QualityFlag::kTdpAnomaly;
  return std::nullopt;
}

ValidationReport validate(const PowerSample& sample) {
  ValidationReport r;
  if (!(sample.power >= 0.0) || !std::isfinite(sample.power)) {
    r.violations.push_back("power negative or not finite");
  }
  if (sample.t <= 0) r.violations.push_back("timestamp not positive");
  if (sample.util && (*sample.util < 0 || *sample.util > 100)) {
    r.violations.push_back("utilization out of [0,100]");
  }
  if (sample.mem_used && *sample.mem_used < 0) {
    r.violations.push_back("memory used negative");
  }
  return r;
}

ValidationReport validate(const InferenceSetup& setup) {
  ValidationReport r;
  if (setup.gpu_label.empty()) r.violations.push_back("gpu label empty");
  if (setup.runtime_label.empty()) r.violations.push_back("runtime label empty");
  if (!(setup.tdp > 0.0) || !std::isfinite(setup.tdp)) {
    r.violations.push_back("tdp not positive");
  }
  if (setup.peak_compute && !(*setup.peak_compute > 0.0)) {
    r.violations.push_back("peak compute not positive");
  }
  return r;
}

ValidationReport validate(const ModelRecord& record) {
  ValidationReport r;
  if (record.model_id.empty()) r.violations.push_back("model id empty");
  if (!(record.params >= 0.0)) r.violations.push_back("params negative");
  if (!(record.flops >= 0.0)) r.violations.push_back("flops negative");
  if (record.activations && !(*record.activations >= 0.0)) {
    r.violations.push_back("activations negative");
  }
  if (record.input_size <= 0) r.violations.push_back("input size not positive");
  for (const auto& [dataset, acc] : record.accuracies) {
    if (!(acc >= 0.0 && acc <= 100.0)) {
      r.violations.push_back("accuracy out of [0,100] (" + dataset + ")");
    }
  }
  return r;
}

ValidationReport validate(const EnergyMetrics& m) {
  ValidationReport r;
  const double fields[] = {m.energy_per_image, m.throughput, m.latency,
                           m.avg_power, m.wall_time};
  for (double f : fields) {
    if (!(f >= 0.0) || !std::isfinite(f)) {
      r.violations.push_back("metric negative or not finite");
      return r;
    }
  }
  if (m.batch_size < 0 || m.images_processed < 0) {
    r.violations.push_back("count negative");
  }
  if (m.images_processed > 0 && !(m.wall_time > 0.0)) {
    r.violations.push_back("wall time not positive");
  }
  const double product = m.energy_per_image * m.throughput;
  if (std::abs(product - m.avg_power) > 1e-6 * std::max(m.avg_power, 1e-300)) {
    r.violations.push_back("avg power identity violated");
  }
  return r;
}

ValidationReport validate(const ScoreParams& p) {
  ValidationReport r;
  if (!(p.weight >= 0.0 && p.weight <= 1.0)) {
    r.violations.push_back("weight out of [0,1]");
  }
  if (!(p.norm > 0.0) || !std::isfinite(p.norm)) {
    r.violations.push_back("norm not positive");
  }
  if (!(p.min_accuracy >= 0.0 && p.min_accuracy <= 100.0)) {
    r.violations.push_back("min accuracy out of [0,100]");
  }
  return r;
}

ValidationReport validate(const RunMeasurement& run) {
  ValidationReport r;
  if (run.model_id.empty()) r.violations.push_back("model id empty");
  append(r, validate(run.setup), "setup: ");
  if (run.batch_size < 1) r.violations.push_back("batch size not positive");
  for (std::size_t i = 1; i < run.batch_marks.size(); ++i) {
    if (run.batch_marks[i] <= run.batch_marks[i - 1]) {
      r.violations.push_back("marks not increasing");
      break;
    }
  }
  if (!run.batch_marks.empty() && run.batch_marks.front() <= run.issued_at) {
    r.violations.push_back("first mark not after issue time");
  }
  for (std::size_t i = 1; i < run.samples.size(); ++i) {
    if (run.samples[i].t < run.samples[i - 1].t) {
      r.violations.push_back("samples not ordered");
      break;
    }
  }
  for (const auto& s : run.samples) {
    auto sr = validate(s);
    if (!sr.ok()) {
      append(r, sr, "sample: ");
      break;
    }
  }
  if (run.metrics) {
    append(r, validate(*run.metrics), "metrics: ");
    try {
      if (derive_metrics(run) != *run.metrics) {
        r.violations.push_back("metrics do not match samples and marks");
      }
    } catch (const Error& e) {
      r.violations.push_back(std::string("metrics not derivable: ") + e.what());
    }
  }
  return r;
}

}  // namespace enerprof
