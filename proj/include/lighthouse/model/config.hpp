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

#include <string>

#include "json.hpp"

namespace lighthouse {

struct LossWeights {
  double l1 = 10.0;
  double giou = 1.0;
  double cls = 4.0;
  double saliency = 1.0;
  double neg_pair = 1.0;

  bool operator==(const LossWeights&) const = default;
};

// Hyper-parameters of the span-prediction network. Variant mechanisms are
// flags on the one model:
//   neg_pair       saliency contrast against the same video with another query
//   dummy_tokens   learned extra key/value rows in encoder attention
//   content_slots  decoder slot embeddings offset by pooled video + query
struct ModelConfig {
  int video_dim = 128;
  int text_dim = 128;
  int hidden_dim = 256;
  int num_slots = 10;
  int enc_layers = 2;
  int dec_layers = 2;
  int heads = 8;
  int ff_dim = 1024;
  double dropout = 0.1;
  LossWeights weights;
  double saliency_margin = 0.2;
  double neg_margin = 0.2;
  double eos_coef = 0.1;  // background class weight in the slot classifier
  bool neg_pair = false;
  int dummy_tokens = 0;
  bool content_slots = false;
  bool position_encoding = true;

  // Throws ConfigError on a violated invariant.
  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

nlohmann::ordered_json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

// Stable digest of the canonical JSON form.
std::string model_config_hash(const ModelConfig& config);

}  // namespace lighthouse
