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

#include <vector>

#include "lighthouse/data/types.hpp"

namespace lighthouse {

// A span in normalized (centre, width) form; both in [0, 1].
struct CenterWidth {
  double center = 0.5;
  double width = 0.5;
};

// Host-side copy of the network's slot outputs.
struct SpanPrediction {
  std::vector<CenterWidth> spans;         // K
  std::vector<double> confidence_logits;  // K

  std::size_t size() const { return spans.size(); }
};

using SaliencyScores = std::vector<double>;

// [clamp(c - w/2, 0, 1) * duration, clamp(c + w/2, 0, 1) * duration]
MomentSpan span_cxw_to_interval(double center, double width, double duration_s);

CenterWidth interval_to_cxw(const MomentSpan& span, double duration_s);

// Generalized IoU of two normalized spans, in [-1, 1].
double span_giou(const CenterWidth& a, const CenterWidth& b);

double sigmoid(double x);

}  // namespace lighthouse
