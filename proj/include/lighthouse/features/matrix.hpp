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

#include <Eigen/Dense>

#include "lighthouse/data/types.hpp"

namespace lighthouse {

using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Video rows (one per clip) and text rows (one per word) for one
// (video, query) pair.
struct FeaturePair {
  FeatureMatrix video;  // L x Dv
  FeatureMatrix text;   // T_w x Dt
  ClipGrid clip_grid;
};

bool all_finite(const FeatureMatrix& m);

// Scales every row to unit L2 norm. Throws ArgumentError on an all-zero row.
void l2_normalize_rows(FeatureMatrix& m);

// Throws ShapeError / ValidationError unless L equals the clip count,
// T_w >= 1, and every entry is finite.
void validate_feature_pair(const FeaturePair& pair);

}  // namespace lighthouse
