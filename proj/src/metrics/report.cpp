/* Copyright 2026 The Lighthouse Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "lighthouse/metrics/report.hpp"

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "lighthouse/errors.hpp"

namespace lighthouse {
namespace {

std::string threshold_label(double theta) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", theta);
  return buf;
}

std::string one_decimal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string r1_name(double theta) { return "MR-R1@" + threshold_label(theta); }
std::string map_name(double theta) { return "MR-mAP@" + threshold_label(theta); }

double MetricReport::at(const std::string& name) const {
  for (const auto& [k, v] : values) {
    if (k == name) return v;
  }
  throw NotFoundError("metric '" + name + "' not in report");
}

std::string MetricReport::to_text() const {
  std::string out = "split: " + split + "\nsamples: " + std::to_string(sample_count) + "\n";
  for (const auto& [k, v] : values) out += k + ": " + one_decimal(v) + "\n";
  if (domains) {
    for (const auto& [d, v] : domains->domain_means) {
      out += "HD-mAP[" + d + "]: " + one_decimal(v) + "\n";
    }
    out += "HD-mAP[avg]: " + one_decimal(domains->avg) + "\n";
  }
  return out;
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  j["split"] = split;
  j["samples"] = sample_count;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values) metrics[k] = v;
  j["metrics"] = std::move(metrics);
  if (domains) {
    nlohmann::ordered_json d = nlohmann::ordered_json::object();
    for (const auto& [name, v] : domains->domain_means) d[name] = v;
    d["avg"] = domains->avg;
    j["domains"] = std::move(d);
  }
  return j.dump(2) + "\n";
}

void MetricReport::write(const std::filesystem::path& text_path,
                         const std::filesystem::path& json_path) const {
  write_file(text_path, to_text());
  write_file(json_path, to_json());
}

MetricReport evaluate_predictions(const std::vector<PredictionRecord>& predictions,
                                  const std::vector<DatasetSample>& samples,
                                  DatasetKind kind, const MetricConfig& config,
                                  const std::string& split) {
  config.validate();
  MetricReport report;
  report.split = split;
  report.sample_count = samples.size();
  if (kind != DatasetKind::kHd) {
    for (double t : config.r1_thresholds) {
      report.values.emplace_back(r1_name(t), recall1_at(predictions, samples, t));
    }
    const auto maps = map_suite(predictions, samples, config);
    for (double t : config.map_thresholds) {
      report.values.emplace_back(map_name(t), maps.map_at.at(t));
    }
    report.values.emplace_back("MR-mAP-avg", maps.avg_map);
  }
  if (kind != DatasetKind::kMr) {
    const auto per_query = hd_map_per_query(predictions, samples, config);
    double sum = 0.0;
    for (const auto& [qid, ap] : per_query) sum += ap;
    report.values.emplace_back(
        "HD-mAP", per_query.empty() ? 0.0 : 100.0 * sum / static_cast<double>(per_query.size()));
    report.values.emplace_back("HD-HIT@1", hit_at_1(predictions, samples, config));
    const bool tagged = !samples.empty() &&
                        std::all_of(samples.begin(), samples.end(),
                                    [](const DatasetSample& s) { return s.domain_tag.has_value(); });
    if (tagged) report.domains = tvsum_domain_report(per_query, samples);
  }
  return report;
}

}  // namespace lighthouse
