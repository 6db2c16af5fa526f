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

#include "lighthouse/model/span.hpp"

#include <algorithm>
#include <cmath>

namespace lighthouse {

MomentSpan span_cxw_to_interval(double center, double width, double duration_s) {
  const double lo = std::clamp(center - 0.5 * width, 0.0, 1.0);
  const double hi = std::clamp(center + 0.5 * width, 0.0, 1.0);
  return {lo * duration_s, hi * duration_s};
}

CenterWidth interval_to_cxw(const MomentSpan& span, double duration_s) {
  return {0.5 * (span.start_s + span.end_s) / duration_s,
          (span.end_s - span.start_s) / duration_s};
}

double span_giou(const CenterWidth& a, const CenterWidth& b) {
  const double a0 = a.center - 0.5 * a.width, a1 = a.center + 0.5 * a.width;
  const double b0 = b.center - 0.5 * b.width, b1 = b.center + 0.5 * b.width;
  const double inter = std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
  const double uni = (a1 - a0) + (b1 - b0) - inter;
  const double hull = std::max(a1, b1) - std::min(a0, b0);
  if (!(hull > 0.0)) return 1.0;  // both spans degenerate at one point
  const double iou = uni > 0.0 ? inter / uni : 0.0;
  return iou - (hull - uni) / hull;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace lighthouse
