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

#include <map>
#include <string>
#include <vector>

#include <torch/torch.h>

#include "lighthouse/data/types.hpp"
#include "lighthouse/model/config.hpp"
#include "lighthouse/model/matcher.hpp"
#include "lighthouse/model/network.hpp"

namespace lighthouse {

// Supervision for one sample in model coordinates.
struct SampleTargets {
  std::vector<CenterWidth> spans;  // normalized ground-truth moments
  std::vector<bool> positive;      // per clip: inside a moment (or highly rated)
};

// Moments become normalized (center, width) pairs; a clip is positive when
// its centre lies in a moment. Samples without moments fall back to clips
// whose annotator-mean label is at least 4.
SampleTargets make_targets(const DatasetSample& sample, const ClipGrid& grid);

struct LossResult {
  torch::Tensor total;  // scalar, differentiable
  // Weighted terms under the plain names ("l1", "giou", "cls", "saliency",
  // "neg_pair") and unweighted ones with a "_raw" suffix.
  std::map<std::string, double> components;
};

// (1 - gIoU) for each row pair of two [N, 2] (center, width) tensors.
torch::Tensor giou_loss(const torch::Tensor& pred, const torch::Tensor& gt);

// Mean over (positive, negative) clip pairs of max(0, margin - s_pos + s_neg);
// zero when either set is empty.
torch::Tensor saliency_margin_loss(const torch::Tensor& scores, const std::vector<bool>& positive,
                                   double margin);

// Mean over the selected clips of max(0, margin + negative - matched).
// Throws ShapeError on a length mismatch.
torch::Tensor neg_pair_saliency_loss(const torch::Tensor& matched, const torch::Tensor& negative,
                                     const std::vector<bool>& in_moment, double margin);
torch::Tensor neg_pair_saliency_loss(const torch::Tensor& matched, const torch::Tensor& negative,
                                     double margin);

// Set-matching loss for one sample. `negative_saliency`, when defined, is the
// saliency of the same video under a mismatched query and is only used when
// config.neg_pair is set.
LossResult compute_loss(const ModelOutput& out, const SampleTargets& targets,
                        const Assignment& assignment, const ModelConfig& config,
                        const torch::Tensor& negative_saliency = {});

}  // namespace lighthouse
