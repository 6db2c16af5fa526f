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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "lighthouse/data/types.hpp"
#include "lighthouse/model/loss.hpp"

namespace lighthouse {

// One training/evaluation example with its features already on the tensor side.
struct TrainItem {
  DatasetSample sample;
  ClipGrid grid;
  torch::Tensor video;  // [L, Dv]
  torch::Tensor text;   // [T, Dt]
  SampleTargets targets;
};

// Feature directory layout: <dir>/video/<video_id>.lhf and <dir>/text/<query_id>.lhf.
std::filesystem::path video_feature_path(const std::filesystem::path& feature_dir,
                                         const std::string& video_id);
std::filesystem::path text_feature_path(const std::filesystem::path& feature_dir,
                                        std::int64_t query_id);

// Relative feature path and file digest for every file a split reads.
using FeatureManifest = std::vector<std::pair<std::string, std::string>>;

struct LoadedSplit {
  std::vector<TrainItem> items;
  FeatureManifest manifest;
};

// Loads annotations and their pre-extracted features. Throws NotFoundError
// for a sample without feature files and ShapeError when rows or dims do not
// fit the clip grid and the expected dims.
LoadedSplit load_split(const std::filesystem::path& annotations, DatasetKind kind,
                       const std::filesystem::path& feature_dir, double clip_len_s, int dv,
                       int dt);

// Builds items from in-memory features (tests and tools).
TrainItem make_item(const DatasetSample& sample, const FeatureMatrix& video,
                    const FeatureMatrix& text, double clip_len_s);

// Writes the features of a split into the feature directory layout.
void write_feature_dir(const std::filesystem::path& feature_dir,
                       const std::vector<DatasetSample>& samples,
                       const std::vector<FeaturePair>& features);

}  // namespace lighthouse
