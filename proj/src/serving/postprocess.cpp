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

#include "lighthouse/serving/postprocess.hpp"

#include <algorithm>

#include "lighthouse/errors.hpp"
#include "lighthouse/metrics/metrics.hpp"

namespace lighthouse {

void PostprocessConfig::validate() const {
  if (!(nms_threshold >= 0.0 && nms_threshold <= 1.0)) {
    throw ConfigError("nms_threshold must lie in [0, 1]");
  }
  if (top_k < 1) throw ConfigError("top_k must be >= 1");
}

std::vector<ScoredMoment> temporal_nms(std::vector<ScoredMoment> moments, double iou_threshold) {
  std::stable_sort(moments.begin(), moments.end(),
                   [](const ScoredMoment& a, const ScoredMoment& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<ScoredMoment> kept;
  for (const auto& m : moments) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const ScoredMoment& k) {
      return temporal_iou(k.span, m.span) > iou_threshold;
    });
    if (!suppressed) kept.push_back(m);
  }
  return kept;
}

PredictResult postprocess(const SpanPrediction& spans, const SaliencyScores& saliency,
                          double duration_s, const ClipGrid& grid,
                          const PostprocessConfig& config) {
  if (saliency.size() != grid.size()) {
    throw ShapeError("saliency has " + std::to_string(saliency.size()) + " scores for " +
                     std::to_string(grid.size()) + " clips");
  }
  std::vector<ScoredMoment> candidates;
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const auto span =
        span_cxw_to_interval(spans.spans[k].center, spans.spans[k].width, duration_s);
    if (!(span.end_s > span.start_s)) continue;
    candidates.push_back({span, sigmoid(spans.confidence_logits[k])});
  }
  PredictResult result;
  result.moments = temporal_nms(std::move(candidates), config.nms_threshold);
  if (result.moments.size() > static_cast<std::size_t>(config.top_k)) {
    result.moments.resize(config.top_k);
  }
  for (std::size_t c = 0; c < grid.size(); ++c) {
    result.saliency.emplace_back(grid.boundaries[c].start_s, saliency[c]);
  }
  return result;
}

PredictionRecord to_prediction_record(std::int64_t query_id, const PredictResult& result) {
  PredictionRecord r;
  r.query_id = query_id;
  r.moments = result.moments;
  for (const auto& [start, score] : result.saliency) r.saliency_scores.push_back(score);
  return r;
}

}  // namespace lighthouse
