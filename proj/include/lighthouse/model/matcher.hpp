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

#include <utility>
#include <vector>

#include "lighthouse/model/config.hpp"
#include "lighthouse/model/span.hpp"

namespace lighthouse {

// Row-major rows x cols cost matrix with rows <= cols. Returns, for every
// row, the column assigned to it in a minimum-total-cost injective map.
std::vector<int> hungarian_assign(const std::vector<double>& cost, int rows, int cols);

// (gt index, slot index) pairs, sorted by gt index.
using Assignment = std::vector<std::pair<int, int>>;

// cost(g, k) = w_l1 * L1 + w_giou * (1 - gIoU) - w_cls * sigmoid(logit_k)
double match_cost(const CenterWidth& pred, double logit, const CenterWidth& gt,
                  const LossWeights& weights);

// Minimum-cost injective assignment of ground-truth spans to slots. Throws
// ArgumentError when there are more ground-truth spans than slots.
Assignment match_spans(const SpanPrediction& pred, const std::vector<CenterWidth>& gt,
                       const LossWeights& weights);

}  // namespace lighthouse
