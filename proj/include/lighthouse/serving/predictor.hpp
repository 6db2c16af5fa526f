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

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "lighthouse/features/extractor.hpp"
#include "lighthouse/model/checkpoint.hpp"
#include "lighthouse/serving/postprocess.hpp"

namespace lighthouse {

enum class Device { kCpu, kAccelerator };

// Parses "cpu" or "accelerator"; throws ArgumentError otherwise.
Device parse_device(std::string_view name);

// Three-step inference session: build from a checkpoint, encode one video,
// then answer any number of queries about it. A session is single-owner;
// callers serialize encode_video and predict.
class Predictor {
 public:
  // Throws NotFoundError for an unregistered extractor name and
  // MismatchError when the extractor dims differ from the model's.
  static std::unique_ptr<Predictor> create(const std::filesystem::path& checkpoint,
                                           Device device, const FeatureExtractorSpec& spec,
                                           PostprocessConfig postprocess = {});

  // Replaces any previous encoding.
  void encode_video(const std::filesystem::path& source);
  void set_encoded_video(EncodedVideo video);
  bool has_video() const { return video_.has_value(); }
  const EncodedVideo& encoded_video() const;

  // Encodes `source` without touching the session state.
  EncodedVideo encode(const std::filesystem::path& source) const;

  // Throws StateError before encode_video and ArgumentError on an empty query.
  PredictResult predict(std::string_view query) const;
  PredictResult predict(const EncodedVideo& video, std::string_view query) const;

  const ModelConfig& model_config() const { return model_->config(); }
  const FeatureExtractor& extractor() const { return *extractor_; }
  const PostprocessConfig& postprocess_config() const { return postprocess_; }

 private:
  Predictor(MomentDetr model, std::unique_ptr<FeatureExtractor> extractor,
            PostprocessConfig postprocess);

  mutable MomentDetr model_;
  std::unique_ptr<FeatureExtractor> extractor_;
  PostprocessConfig postprocess_;
  std::optional<EncodedVideo> video_;
};

// Convenience form of Predictor::create taking dims from the checkpoint.
std::unique_ptr<Predictor> new_predictor(const std::filesystem::path& checkpoint,
                                         Device device, const std::string& feature_name);

}  // namespace lighthouse
