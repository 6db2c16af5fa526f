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

#include "lighthouse/data/types.hpp"

#include <algorithm>

#include "lighthouse/errors.hpp"

namespace lighthouse {

DatasetKind parse_dataset_kind(std::string_view name) {
  if (name == "mr_hd") return DatasetKind::kMrHd;
  if (name == "mr") return DatasetKind::kMr;
  if (name == "hd") return DatasetKind::kHd;
  throw ArgumentError("unknown dataset kind '" + std::string(name) +
                      "' (expected mr_hd, mr or hd)");
}

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kMrHd:
      return "mr_hd";
    case DatasetKind::kMr:
      return "mr";
    case DatasetKind::kHd:
      return "hd";
  }
  return "mr_hd";
}

int SaliencyAnnotation::label(int clip, std::size_t annotator) const {
  auto it = std::lower_bound(clip_ids.begin(), clip_ids.end(), clip);
  if (it == clip_ids.end() || *it != clip) return 0;
  const auto& row = scores[static_cast<std::size_t>(it - clip_ids.begin())];
  return annotator < row.size() ? row[annotator] : 0;
}

double SaliencyAnnotation::mean_label(int clip) const {
  auto it = std::lower_bound(clip_ids.begin(), clip_ids.end(), clip);
  if (it == clip_ids.end() || *it != clip) return 0.0;
  const auto& row = scores[static_cast<std::size_t>(it - clip_ids.begin())];
  if (row.empty()) return 0.0;
  double sum = 0.0;
  for (int s : row) sum += s;
  return sum / static_cast<double>(row.size());
}

}  // namespace lighthouse
