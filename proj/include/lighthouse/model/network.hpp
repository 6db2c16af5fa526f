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

#include <torch/torch.h>

#include "lighthouse/features/matrix.hpp"
#include "lighthouse/model/attention.hpp"
#include "lighthouse/model/config.hpp"
#include "lighthouse/model/span.hpp"

namespace lighthouse {

// Raw network outputs for one (video, query) pair.
struct ModelOutput {
  torch::Tensor spans;     // [K, 2] (center, width) in (0, 1)
  torch::Tensor logits;    // [K] foreground logits
  torch::Tensor saliency;  // [L]
};

// Copies a [rows, cols] float matrix into a new tensor.
torch::Tensor to_tensor(const FeatureMatrix& m);

// Host copy of the slot outputs.
SpanPrediction to_span_prediction(const ModelOutput& out);
SaliencyScores to_saliency_scores(const ModelOutput& out);

class EncoderLayerImpl : public torch::nn::Module {
 public:
  EncoderLayerImpl(const ModelConfig& config);
  torch::Tensor forward(const torch::Tensor& x);

 private:
  MultiheadAttention self_attn_{nullptr};
  torch::nn::Linear ff1_{nullptr}, ff2_{nullptr};
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr};
  double dropout_;
};
TORCH_MODULE(EncoderLayer);

class DecoderLayerImpl : public torch::nn::Module {
 public:
  DecoderLayerImpl(const ModelConfig& config);
  torch::Tensor forward(const torch::Tensor& tgt, const torch::Tensor& query_pos,
                        const torch::Tensor& memory);

 private:
  MultiheadAttention self_attn_{nullptr}, cross_attn_{nullptr};
  torch::nn::Linear ff1_{nullptr}, ff2_{nullptr};
  torch::nn::LayerNorm norm1_{nullptr}, norm2_{nullptr}, norm3_{nullptr};
  double dropout_;
};
TORCH_MODULE(DecoderLayer);

// Encoder over the concatenated video + text sequence, K-slot span decoder,
// and a per-clip saliency head on the encoded video positions.
class MomentDetrImpl : public torch::nn::Module {
 public:
  explicit MomentDetrImpl(const ModelConfig& config);

  // video [L, Dv], text [T, Dt]. Throws ShapeError naming the mismatched input.
  ModelOutput forward(const torch::Tensor& video, const torch::Tensor& text);
  ModelOutput forward(const FeaturePair& pair);

  // Saliency only; skips the decoder.
  torch::Tensor saliency(const torch::Tensor& video, const torch::Tensor& text);

  // Encoded sequence [L + T, d]; the first L rows are the video positions.
  torch::Tensor encode(const torch::Tensor& video, const torch::Tensor& text);

  // Sets the last span-head layer to zero so every slot emits (0.5, 0.5).
  void zero_span_head();

  const ModelConfig& config() const { return config_; }

 private:
  void check_inputs(const torch::Tensor& video, const torch::Tensor& text) const;
  ModelOutput decode(const torch::Tensor& memory, int64_t num_clips);

  ModelConfig config_;
  torch::nn::Sequential video_proj_{nullptr}, text_proj_{nullptr};
  torch::Tensor type_embed_;   // [2, d]
  torch::Tensor slot_embed_;   // [K, d]
  torch::nn::ModuleList encoder_{nullptr}, decoder_{nullptr};
  torch::nn::LayerNorm decoder_norm_{nullptr};
  torch::nn::Sequential span_head_{nullptr};
  torch::nn::Linear class_head_{nullptr}, saliency_head_{nullptr};
};
TORCH_MODULE(MomentDetr);

// Sinusoidal encoding of normalized positions (i + 0.5) / L, shape [L, d].
torch::Tensor sinusoidal_positions(int64_t length, int64_t dim, torch::Dtype dtype);

}  // namespace lighthouse
