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

#include "lighthouse/trainer/dataset.hpp"

#include <set>

#include "lighthouse/data/annotations.hpp"
#include "lighthouse/data/clip_grid.hpp"
#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"

namespace lighthouse {

namespace fs = std::filesystem;

fs::path video_feature_path(const fs::path& feature_dir, const std::string& video_id) {
  return feature_dir / "video" / (video_id + ".lhf");
}

fs::path text_feature_path(const fs::path& feature_dir, std::int64_t query_id) {
  return feature_dir / "text" / (std::to_string(query_id) + ".lhf");
}

TrainItem make_item(const DatasetSample& sample, const FeatureMatrix& video,
                    const FeatureMatrix& text, double clip_len_s) {
  TrainItem item;
  item.sample = sample;
  item.grid = clip_grid(sample.duration_s, clip_len_s);
  if (static_cast<std::size_t>(video.rows()) != item.grid.size()) {
    throw ShapeError("query " + std::to_string(sample.query_id) + ": video '" + sample.video_id +
                     "' has " + std::to_string(video.rows()) + " feature rows but " +
                     std::to_string(item.grid.size()) + " clips");
  }
  if (text.rows() < 1) {
    throw ShapeError("query " + std::to_string(sample.query_id) + ": text features are empty");
  }
  item.video = to_tensor(video);
  item.text = to_tensor(text);
  item.targets = make_targets(sample, item.grid);
  return item;
}

LoadedSplit load_split(const fs::path& annotations, DatasetKind kind, const fs::path& feature_dir,
                       double clip_len_s, int dv, int dt) {
  const auto samples = parse_annotations(annotations, kind);
  LoadedSplit split;
  std::set<std::string> listed;
  auto read = [&](const fs::path& path, const std::string& what, int dim) {
    if (!fs::exists(path)) {
      throw NotFoundError("no features for " + what + " (expected " + path.string() + ")");
    }
    auto m = load_features(path);
    if (m.cols() != dim) {
      throw ShapeError(what + ": feature dim " + std::to_string(m.cols()) + " ≠ configured dim " +
                       std::to_string(dim));
    }
    const auto rel = fs::relative(path, feature_dir).generic_string();
    if (listed.insert(rel).second) split.manifest.emplace_back(rel, file_digest(path));
    return m;
  };
  // Check every file before building tensors so a bad dataset fails fast.
  for (const auto& s : samples) {
    if (!fs::exists(video_feature_path(feature_dir, s.video_id))) {
      throw NotFoundError("no features for video_id '" + s.video_id + "' (expected " +
                          video_feature_path(feature_dir, s.video_id).string() + ")");
    }
  }
  for (const auto& s : samples) {
    const auto video = read(video_feature_path(feature_dir, s.video_id),
                            "video_id '" + s.video_id + "'", dv);
    const auto text = read(text_feature_path(feature_dir, s.query_id),
                           "query_id " + std::to_string(s.query_id), dt);
    split.items.push_back(make_item(s, video, text, clip_len_s));
  }
  return split;
}

void write_feature_dir(const fs::path& feature_dir, const std::vector<DatasetSample>& samples,
                       const std::vector<FeaturePair>& features) {
  if (samples.size() != features.size()) {
    throw ArgumentError("samples and features must be aligned");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    save_features(features[i].video, video_feature_path(feature_dir, samples[i].video_id));
    save_features(features[i].text, text_feature_path(feature_dir, samples[i].query_id));
  }
}

}  // namespace lighthouse
