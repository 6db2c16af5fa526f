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

#include "lighthouse/serving/predictor.hpp"

#include <algorithm>
#include <cctype>

#include "lighthouse/errors.hpp"

namespace lighthouse {

namespace {

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

Device parse_device(std::string_view name) {
  if (name == "cpu") return Device::kCpu;
  if (name == "accelerator") return Device::kAccelerator;
  throw ArgumentError("unknown device '" + std::string(name) +
                      "'; expected \"cpu\" or \"accelerator\"");
}

Predictor::Predictor(MomentDetr model, std::unique_ptr<FeatureExtractor> extractor,
                     PostprocessConfig postprocess)
    : model_(std::move(model)), extractor_(std::move(extractor)), postprocess_(postprocess) {
  model_->eval();
}

std::unique_ptr<Predictor> Predictor::create(const std::filesystem::path& checkpoint,
                                             Device device, const FeatureExtractorSpec& spec,
                                             PostprocessConfig postprocess) {
  if (device == Device::kAccelerator && !torch::cuda::is_available()) {
    throw ArgumentError("no accelerator is available on this machine; use device \"cpu\"");
  }
  postprocess.validate();
  auto extractor = make_extractor(spec);
  auto ckpt = load_checkpoint(checkpoint);
  if (spec.dv != ckpt.config.video_dim) {
    throw MismatchError("video feature dim " + std::to_string(spec.dv) + " ≠ model dim " +
                        std::to_string(ckpt.config.video_dim));
  }
  if (spec.dt != ckpt.config.text_dim) {
    throw MismatchError("text feature dim " + std::to_string(spec.dt) + " ≠ model dim " +
                        std::to_string(ckpt.config.text_dim));
  }
  return std::unique_ptr<Predictor>(
      new Predictor(restore_model(ckpt), std::move(extractor), postprocess));
}

std::unique_ptr<Predictor> new_predictor(const std::filesystem::path& checkpoint,
                                         Device device, const std::string& feature_name) {
  auto ckpt = load_checkpoint(checkpoint);
  FeatureExtractorSpec spec;
  spec.name = feature_name;
  spec.dv = ckpt.config.video_dim;
  spec.dt = ckpt.config.text_dim;
  return Predictor::create(checkpoint, device, spec);
}

EncodedVideo Predictor::encode(const std::filesystem::path& source) const {
  auto video = extractor_->encode_video(source);
  if (video.video.rows() == 0 || video.clip_grid.size() == 0) {
    throw ArgumentError("video has zero clips: " + source.string());
  }
  return video;
}

void Predictor::encode_video(const std::filesystem::path& source) {
  video_.reset();
  video_ = encode(source);
}

void Predictor::set_encoded_video(EncodedVideo video) { video_ = std::move(video); }

const EncodedVideo& Predictor::encoded_video() const {
  if (!video_) throw StateError("call encode_video first");
  return *video_;
}

PredictResult Predictor::predict(std::string_view query) const {
  if (!video_) throw StateError("call encode_video first");
  return predict(*video_, query);
}

PredictResult Predictor::predict(const EncodedVideo& video, std::string_view query) const {
  if (blank(query)) throw ArgumentError("query must not be empty");
  const auto text = extractor_->encode_text(query);
  torch::NoGradGuard guard;
  const auto out = model_->forward(to_tensor(video.video), to_tensor(text));
  return postprocess(to_span_prediction(out), to_saliency_scores(out), video.duration_s,
                     video.clip_grid, postprocess_);
}

}  // namespace lighthouse
