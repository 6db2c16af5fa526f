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

#include "lighthouse/data/types.hpp"

namespace lighthouse {

inline constexpr double kDefaultClipLenS = 2.0;

// Tiles [0, duration_s] into ceil(duration_s / clip_len_s) clips of length
// clip_len_s; the last clip is truncated at duration_s.
ClipGrid clip_grid(double duration_s, double clip_len_s = kDefaultClipLenS);

// Indices of clips whose centre lies inside any of `moments`.
std::vector<int> clips_in_moments(const ClipGrid& grid,
                                  const std::vector<MomentSpan>& moments);

}  // namespace lighthouse
