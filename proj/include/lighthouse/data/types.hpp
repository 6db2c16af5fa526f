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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lighthouse {

// Which annotations a dataset carries. MR-HD data has both moments and
// saliency, MR data only moments, HD data only saliency.
enum class DatasetKind { kMrHd, kMr, kHd };

DatasetKind parse_dataset_kind(std::string_view name);
std::string_view to_string(DatasetKind kind);

// A temporal interval in seconds.
struct MomentSpan {
  double start_s = 0.0;
  double end_s = 0.0;

  double length() const { return end_s - start_s; }
  bool operator==(const MomentSpan&) const = default;
};

// Per-clip, per-annotator highlight labels on the 1..5 scale.
struct SaliencyAnnotation {
  std::vector<int> clip_ids;
  std::vector<std::vector<int>> scores;  // scores[i][a]: clip_ids[i], annotator a

  std::size_t annotator_count() const {
    return scores.empty() ? 0 : scores.front().size();
  }
  // Label of `clip` for `annotator`; unlabeled clips read as 0.
  int label(int clip, std::size_t annotator) const;
  // Annotator-mean label of `clip`; 0 when unlabeled.
  double mean_label(int clip) const;

  bool operator==(const SaliencyAnnotation&) const = default;
};

struct DatasetSample {
  std::int64_t query_id = 0;
  std::string query_text;
  std::string video_id;
  double duration_s = 0.0;
  std::vector<MomentSpan> gt_moments;
  std::optional<SaliencyAnnotation> saliency;
  std::optional<std::string> domain_tag;

  bool operator==(const DatasetSample&) const = default;
};

struct ScoredMoment {
  MomentSpan span;
  double confidence = 0.0;

  bool operator==(const ScoredMoment&) const = default;
};

struct PredictionRecord {
  std::int64_t query_id = 0;
  std::vector<ScoredMoment> moments;  // confidence descending
  std::vector<double> saliency_scores;  // one per clip

  bool operator==(const PredictionRecord&) const = default;
};

struct ClipGrid {
  double clip_len_s = 0.0;
  std::vector<MomentSpan> boundaries;

  std::size_t size() const { return boundaries.size(); }
  double duration() const {
    return boundaries.empty() ? 0.0 : boundaries.back().end_s;
  }
};

}  // namespace lighthouse
