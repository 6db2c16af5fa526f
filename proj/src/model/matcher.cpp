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

#include "lighthouse/model/matcher.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lighthouse/errors.hpp"

namespace lighthouse {

// Shortest augmenting path with row/column potentials, O(rows^2 * cols).
std::vector<int> hungarian_assign(const std::vector<double>& cost, int rows, int cols) {
  if (rows < 0 || cols < 0 || rows > cols) {
    throw ArgumentError("hungarian_assign needs rows <= cols");
  }
  if (cost.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw ShapeError("cost matrix size does not match rows * cols");
  }
  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto a = [&](int i, int j) { return cost[static_cast<std::size_t>(i - 1) * cols + (j - 1)]; };

  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
  for (int i = 1; i <= rows; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<char> used(cols + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = a(i0, j) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(rows, -1);
  for (int j = 1; j <= cols; ++j) {
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

double match_cost(const CenterWidth& pred, double logit, const CenterWidth& gt,
                  const LossWeights& weights) {
  const double l1 = std::abs(pred.center - gt.center) + std::abs(pred.width - gt.width);
  return weights.l1 * l1 + weights.giou * (1.0 - span_giou(pred, gt)) -
         weights.cls * sigmoid(logit);
}

Assignment match_spans(const SpanPrediction& pred, const std::vector<CenterWidth>& gt,
                       const LossWeights& weights) {
  const int rows = static_cast<int>(gt.size());
  const int cols = static_cast<int>(pred.size());
  if (rows > cols) {
    throw ArgumentError(std::to_string(rows) + " ground-truth moments exceed the " +
                        std::to_string(cols) + " query slots; increase num_slots");
  }
  if (rows == 0) return {};
  std::vector<double> cost(static_cast<std::size_t>(rows) * cols);
  for (int g = 0; g < rows; ++g) {
    for (int k = 0; k < cols; ++k) {
      cost[static_cast<std::size_t>(g) * cols + k] =
          match_cost(pred.spans[k], pred.confidence_logits[k], gt[g], weights);
    }
  }
  const auto cols_for_row = hungarian_assign(cost, rows, cols);
  Assignment out;
  for (int g = 0; g < rows; ++g) out.emplace_back(g, cols_for_row[g]);
  return out;
}

}  // namespace lighthouse
