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

#include "lighthouse/data/clip_grid.hpp"

#include <cmath>
#include <string>

#include "lighthouse/errors.hpp"

namespace lighthouse {

ClipGrid clip_grid(double duration_s, double clip_len_s) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ArgumentError("clip_grid: duration must be positive, got " +
                        std::to_string(duration_s));
  }
  if (!(clip_len_s > 0.0) || !std::isfinite(clip_len_s)) {
    throw ArgumentError("clip_grid: clip length must be positive, got " +
                        std::to_string(clip_len_s));
  }
  // Quotients like 0.9 / 0.3 land a hair above the integer.
  const double ratio = duration_s / clip_len_s;
  auto count = static_cast<std::size_t>(std::ceil(ratio - 1e-9));
  if (count == 0) count = 1;

  ClipGrid grid;
  grid.clip_len_s = clip_len_s;
  grid.boundaries.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double start = static_cast<double>(i) * clip_len_s;
    const double end = i + 1 == count ? duration_s
                                      : static_cast<double>(i + 1) * clip_len_s;
    grid.boundaries.push_back({start, end});
  }
  return grid;
}

std::vector<int> clips_in_moments(const ClipGrid& grid,
                                  const std::vector<MomentSpan>& moments) {
  std::vector<int> inside;
  for (std::size_t i = 0; i < grid.boundaries.size(); ++i) {
    const auto& clip = grid.boundaries[i];
    const double centre = 0.5 * (clip.start_s + clip.end_s);
    for (const auto& m : moments) {
      if (centre >= m.start_s && centre <= m.end_s) {
        inside.push_back(static_cast<int>(i));
        break;
      }
    }
  }
  return inside;
}

}  // namespace lighthouse
