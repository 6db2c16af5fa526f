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

#include "lighthouse/model/loss.hpp"

#include <string>

#include "lighthouse/data/clip_grid.hpp"
#include "lighthouse/errors.hpp"

namespace lighthouse {

namespace {

torch::Tensor mask_tensor(const std::vector<bool>& mask) {
  std::vector<int64_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) idx.push_back(static_cast<int64_t>(i));
  }
  return torch::tensor(idx, torch::kInt64);
}

torch::Tensor complement(const std::vector<bool>& mask) {
  std::vector<bool> inv(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) inv[i] = !mask[i];
  return mask_tensor(inv);
}

}  // namespace

SampleTargets make_targets(const DatasetSample& sample, const ClipGrid& grid) {
  SampleTargets t;
  t.positive.assign(grid.size(), false);
  for (const auto& m : sample.gt_moments) t.spans.push_back(interval_to_cxw(m, sample.duration_s));
  if (!sample.gt_moments.empty()) {
    for (int c : clips_in_moments(grid, sample.gt_moments)) t.positive[c] = true;
  } else if (sample.saliency) {
    for (std::size_t c = 0; c < grid.size(); ++c) {
      t.positive[c] = sample.saliency->mean_label(static_cast<int>(c)) >= 4.0;
    }
  }
  return t;
}

torch::Tensor giou_loss(const torch::Tensor& pred, const torch::Tensor& gt) {
  auto p0 = pred.select(1, 0) - 0.5 * pred.select(1, 1);
  auto p1 = pred.select(1, 0) + 0.5 * pred.select(1, 1);
  auto g0 = gt.select(1, 0) - 0.5 * gt.select(1, 1);
  auto g1 = gt.select(1, 0) + 0.5 * gt.select(1, 1);
  auto inter = (torch::min(p1, g1) - torch::max(p0, g0)).clamp_min(0.0);
  auto uni = (p1 - p0) + (g1 - g0) - inter;
  auto hull = torch::max(p1, g1) - torch::min(p0, g0);
  auto giou = inter / uni - (hull - uni) / hull;
  return 1.0 - giou;
}

torch::Tensor saliency_margin_loss(const torch::Tensor& scores, const std::vector<bool>& positive,
                                   double margin) {
  if (static_cast<int64_t>(positive.size()) != scores.size(0)) {
    throw ShapeError("saliency mask has " + std::to_string(positive.size()) +
                     " entries for " + std::to_string(scores.size(0)) + " clips");
  }
  auto pos = mask_tensor(positive);
  auto neg = complement(positive);
  if (pos.numel() == 0 || neg.numel() == 0) return scores.sum() * 0.0;
  auto sp = scores.index_select(0, pos).unsqueeze(1);
  auto sn = scores.index_select(0, neg).unsqueeze(0);
  return torch::relu(margin - sp + sn).mean();
}

torch::Tensor neg_pair_saliency_loss(const torch::Tensor& matched, const torch::Tensor& negative,
                                     const std::vector<bool>& in_moment, double margin) {
  if (matched.sizes() != negative.sizes()) {
    throw ShapeError("matched saliency has " + std::to_string(matched.numel()) +
                     " clips but negative saliency has " + std::to_string(negative.numel()));
  }
  if (static_cast<int64_t>(in_moment.size()) != matched.numel()) {
    throw ShapeError("in-moment mask length does not match the clip count");
  }
  auto idx = mask_tensor(in_moment);
  if (idx.numel() == 0) return matched.sum() * 0.0;
  return torch::relu(margin + negative.index_select(0, idx) - matched.index_select(0, idx)).mean();
}

torch::Tensor neg_pair_saliency_loss(const torch::Tensor& matched, const torch::Tensor& negative,
                                     double margin) {
  return neg_pair_saliency_loss(matched, negative,
                                std::vector<bool>(static_cast<std::size_t>(matched.numel()), true),
                                margin);
}

LossResult compute_loss(const ModelOutput& out, const SampleTargets& targets,
                        const Assignment& assignment, const ModelConfig& config,
                        const torch::Tensor& negative_saliency) {
  const auto& w = config.weights;
  const auto opts = out.spans.options();
  const int64_t num_slots = out.spans.size(0);

  auto zero = out.spans.sum() * 0.0;
  torch::Tensor l1 = zero, giou = zero;
  std::vector<float> cls_target(num_slots, 0.0f);
  std::vector<float> cls_weight(num_slots, static_cast<float>(config.eos_coef));
  if (!assignment.empty()) {
    std::vector<int64_t> slots;
    std::vector<double> gt_flat;
    for (const auto& [g, k] : assignment) {
      slots.push_back(k);
      gt_flat.push_back(targets.spans.at(g).center);
      gt_flat.push_back(targets.spans.at(g).width);
      cls_target[k] = 1.0f;
      cls_weight[k] = 1.0f;
    }
    const auto n = static_cast<int64_t>(slots.size());
    auto pred = out.spans.index_select(0, torch::tensor(slots, torch::kInt64));
    auto gt = torch::tensor(gt_flat, opts).view({n, 2});
    l1 = (pred - gt).abs().sum(1).mean();
    giou = giou_loss(pred, gt).mean();
  }
  auto target = torch::tensor(cls_target).to(opts.dtype());
  auto weight = torch::tensor(cls_weight).to(opts.dtype());
  auto bce = torch::binary_cross_entropy_with_logits(out.logits, target, {}, {},
                                                     torch::Reduction::None);
  auto cls = (bce * weight).sum() / weight.sum();
  auto sal = saliency_margin_loss(out.saliency, targets.positive, config.saliency_margin);

  auto total = w.l1 * l1 + w.giou * giou + w.cls * cls + w.saliency * sal;
  torch::Tensor neg = zero;
  if (config.neg_pair && negative_saliency.defined()) {
    neg = neg_pair_saliency_loss(out.saliency, negative_saliency, targets.positive,
                                 config.neg_margin);
    total = total + w.neg_pair * neg;
  }

  LossResult r;
  r.total = total;
  auto put = [&](const std::string& name, const torch::Tensor& raw, double weight_value) {
    const double v = raw.item<double>();
    r.components[name + "_raw"] = v;
    r.components[name] = weight_value * v;
  };
  put("l1", l1, w.l1);
  put("giou", giou, w.giou);
  put("cls", cls, w.cls);
  put("saliency", sal, w.saliency);
  put("neg_pair", neg, config.neg_pair ? w.neg_pair : 0.0);
  r.components["total"] = total.item<double>();
  return r;
}

}  // namespace lighthouse
