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

#include "lighthouse/features/matrix.hpp"

#include <string>

#include "lighthouse/errors.hpp"

namespace lighthouse {

bool all_finite(const FeatureMatrix& m) { return m.allFinite(); }

void l2_normalize_rows(FeatureMatrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).cast<double>().norm();
    if (!(norm > 0.0)) {
      throw ArgumentError("cannot L2-normalize all-zero feature row " +
                          std::to_string(r));
    }
    m.row(r) = (m.row(r).cast<double>() / norm).cast<float>();
  }
}

void validate_feature_pair(const FeaturePair& pair) {
  const auto clips = static_cast<Eigen::Index>(pair.clip_grid.size());
  if (pair.video.rows() != clips) {
    throw ShapeError("video features have " + std::to_string(pair.video.rows()) +
                     " rows but the clip grid has " + std::to_string(clips) + " clips");
  }
  if (pair.text.rows() < 1) throw ShapeError("text features need at least one row");
  if (!all_finite(pair.video)) throw ValidationError("video features contain NaN/Inf");
  if (!all_finite(pair.text)) throw ValidationError("text features contain NaN/Inf");
}

}  // namespace lighthouse
