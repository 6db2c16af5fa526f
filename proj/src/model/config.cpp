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

#include "lighthouse/model/config.hpp"

#include <cstdio>

#include "lighthouse/errors.hpp"
#include "lighthouse/features/feature_file.hpp"

namespace lighthouse {

void ModelConfig::validate() const {
  if (video_dim < 1 || text_dim < 1) throw ConfigError("feature dims must be >= 1");
  if (num_slots < 1) throw ConfigError("num_slots must be >= 1");
  if (hidden_dim < 1 || heads < 1 || hidden_dim % heads != 0) {
    throw ConfigError("hidden_dim (" + std::to_string(hidden_dim) +
                      ") must be divisible by heads (" + std::to_string(heads) + ")");
  }
  if (enc_layers < 1 || dec_layers < 1) throw ConfigError("need at least one encoder and decoder layer");
  if (ff_dim < 1) throw ConfigError("ff_dim must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) throw ConfigError("dropout must lie in [0, 1)");
  if (weights.l1 < 0 || weights.giou < 0 || weights.cls < 0 || weights.saliency < 0 ||
      weights.neg_pair < 0) {
    throw ConfigError("loss weights must be >= 0");
  }
  if (saliency_margin < 0 || neg_margin < 0) throw ConfigError("margins must be >= 0");
  if (eos_coef <= 0) throw ConfigError("eos_coef must be > 0");
  if (dummy_tokens < 0) throw ConfigError("dummy_tokens must be >= 0");
}

nlohmann::ordered_json to_json(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["video_dim"] = c.video_dim;
  j["text_dim"] = c.text_dim;
  j["hidden_dim"] = c.hidden_dim;
  j["num_slots"] = c.num_slots;
  j["enc_layers"] = c.enc_layers;
  j["dec_layers"] = c.dec_layers;
  j["heads"] = c.heads;
  j["ff_dim"] = c.ff_dim;
  j["dropout"] = c.dropout;
  j["w_l1"] = c.weights.l1;
  j["w_giou"] = c.weights.giou;
  j["w_cls"] = c.weights.cls;
  j["w_sal"] = c.weights.saliency;
  j["w_neg"] = c.weights.neg_pair;
  j["saliency_margin"] = c.saliency_margin;
  j["neg_margin"] = c.neg_margin;
  j["eos_coef"] = c.eos_coef;
  j["neg_pair"] = c.neg_pair;
  j["dummy_tokens"] = c.dummy_tokens;
  j["content_slots"] = c.content_slots;
  j["position_encoding"] = c.position_encoding;
  return j;
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  try {
    c.video_dim = j.at("video_dim").get<int>();
    c.text_dim = j.at("text_dim").get<int>();
    c.hidden_dim = j.at("hidden_dim").get<int>();
    c.num_slots = j.at("num_slots").get<int>();
    c.enc_layers = j.at("enc_layers").get<int>();
    c.dec_layers = j.at("dec_layers").get<int>();
    c.heads = j.at("heads").get<int>();
    c.ff_dim = j.at("ff_dim").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.weights.l1 = j.at("w_l1").get<double>();
    c.weights.giou = j.at("w_giou").get<double>();
    c.weights.cls = j.at("w_cls").get<double>();
    c.weights.saliency = j.at("w_sal").get<double>();
    c.weights.neg_pair = j.at("w_neg").get<double>();
    c.saliency_margin = j.at("saliency_margin").get<double>();
    c.neg_margin = j.at("neg_margin").get<double>();
    c.eos_coef = j.at("eos_coef").get<double>();
    c.neg_pair = j.at("neg_pair").get<bool>();
    c.dummy_tokens = j.at("dummy_tokens").get<int>();
    c.content_slots = j.at("content_slots").get<bool>();
    c.position_encoding = j.at("position_encoding").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad model config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string model_config_hash(const ModelConfig& config) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(to_json(config).dump())));
  return hex;
}

}  // namespace lighthouse
