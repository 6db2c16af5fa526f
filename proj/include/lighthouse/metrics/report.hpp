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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lighthouse/metrics/metrics.hpp"

namespace lighthouse {

struct MetricReport {
  std::string split;
  std::size_t sample_count = 0;
  std::vector<std::pair<std::string, double>> values;  // percent, fixed order
  std::optional<DomainReport> domains;                 // TVSum-style breakdown

  // Throws NotFoundError for an unknown metric name.
  double at(const std::string& name) const;

  // "name: value" lines at one decimal place.
  std::string to_text() const;
  // Full-precision machine-readable twin.
  std::string to_json() const;
  void write(const std::filesystem::path& text_path,
             const std::filesystem::path& json_path) const;
};

std::string r1_name(double theta);   // "MR-R1@0.5"
std::string map_name(double theta);  // "MR-mAP@0.75"

// MR metrics when `kind` has moments, HD metrics when it has saliency, and a
// per-domain HD breakdown when every sample carries a domain tag.
MetricReport evaluate_predictions(const std::vector<PredictionRecord>& predictions,
                                  const std::vector<DatasetSample>& samples,
                                  DatasetKind kind, const MetricConfig& config,
                                  const std::string& split);

}  // namespace lighthouse
