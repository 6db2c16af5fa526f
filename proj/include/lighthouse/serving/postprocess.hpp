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

#include <utility>
#include <vector>

#include "lighthouse/data/types.hpp"
#include "lighthouse/model/span.hpp"

namespace lighthouse {

struct PostprocessConfig {
  double nms_threshold = 0.7;
  int top_k = 10;

  void validate() const;
};

// Moments in seconds ranked by score, plus (clip start, score) per clip.
struct PredictResult {
  std::vector<ScoredMoment> moments;
  std::vector<std::pair<double, double>> saliency;
};

// Greedy suppression by descending score: a span is kept iff its IoU with
// every already-kept span is <= iou_threshold. Equal scores keep input order.
std::vector<ScoredMoment> temporal_nms(std::vector<ScoredMoment> moments, double iou_threshold);

// Converts slot outputs to seconds, scores them by foreground probability,
// drops zero-length spans, applies NMS and keeps the top_k.
PredictResult postprocess(const SpanPrediction& spans, const SaliencyScores& saliency,
                          double duration_s, const ClipGrid& grid,
                          const PostprocessConfig& config);

PredictionRecord to_prediction_record(std::int64_t query_id, const PredictResult& result);

}  // namespace lighthouse
