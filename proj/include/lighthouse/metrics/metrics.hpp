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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lighthouse/data/types.hpp"

namespace lighthouse {

// How HD positives are derived from per-annotator labels.
enum class HdPositiveMode {
  kThreshold,    // label == hd_positive_level ("Very Good")
  kTopFraction,  // the annotator's top hd_top_fraction of labeled clips
};

struct MetricConfig {
  std::vector<double> r1_thresholds{0.5, 0.7};
  std::vector<double> map_thresholds{0.5, 0.75};
  std::vector<double> avg_map_grid = default_avg_map_grid();
  int hd_positive_level = 5;
  HdPositiveMode hd_positive_mode = HdPositiveMode::kThreshold;
  double hd_top_fraction = 0.5;

  // 0.5, 0.55, ..., 0.95
  static std::vector<double> default_avg_map_grid();
  void validate() const;
};

// Intersection over union of two intervals; 0 when they do not overlap.
double temporal_iou(const MomentSpan& a, const MomentSpan& b);

// Percentage of queries whose top-ranked moment has IoU > theta with some
// ground-truth moment. Throws NotFoundError listing query ids with no
// prediction.
double recall1_at(const std::vector<PredictionRecord>& predictions,
                  const std::vector<DatasetSample>& samples, double theta);

// Retrieval-style AP in [0, 1]: greedy rank-order matching, each ground
// truth consumed at most once, precision averaged over TP ranks and divided
// by the ground-truth count.
double average_precision_single_query(const std::vector<ScoredMoment>& ranked,
                                      const std::vector<MomentSpan>& gt, double theta);

struct MapSuite {
  std::map<double, double> map_at;  // threshold -> percent
  double avg_map = 0.0;             // percent, mean over the avg grid
};

MapSuite map_suite(const std::vector<PredictionRecord>& predictions,
                   const std::vector<DatasetSample>& samples, const MetricConfig& config);

// Per-annotator positive clip sets for one sample.
std::vector<std::vector<int>> hd_positive_clips(const SaliencyAnnotation& labels,
                                                const MetricConfig& config);

double hit_at_1(const std::vector<PredictionRecord>& predictions,
                const std::vector<DatasetSample>& samples, const MetricConfig& config);

// HD mAP per query in [0, 1], keyed by query id.
std::map<std::int64_t, double> hd_map_per_query(
    const std::vector<PredictionRecord>& predictions,
    const std::vector<DatasetSample>& samples, const MetricConfig& config);

double hd_map(const std::vector<PredictionRecord>& predictions,
              const std::vector<DatasetSample>& samples, const MetricConfig& config);

struct DomainReport {
  std::map<std::string, double> domain_means;  // percent
  double avg = 0.0;  // unweighted mean of the domain means
};

// `per_query` values are fractions in [0, 1] (as from hd_map_per_query).
DomainReport tvsum_domain_report(const std::map<std::int64_t, double>& per_query,
                                 const std::vector<DatasetSample>& samples);

}  // namespace lighthouse
