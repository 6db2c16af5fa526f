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

#include "lighthouse/model/network.hpp"

#include <cmath>
#include <string>

#include "lighthouse/errors.hpp"

namespace lighthouse {

namespace {

torch::nn::Sequential input_projection(int64_t in_dim, int64_t dim) {
  return torch::nn::Sequential(torch::nn::Linear(in_dim, dim), torch::nn::ReLU(),
                               torch::nn::Linear(dim, dim));
}

torch::Tensor drop(const torch::Tensor& x, double p, bool train) {
  return p > 0.0 ? torch::dropout(x, p, train) : x;
}

}  // namespace

torch::Tensor to_tensor(const FeatureMatrix& m) {
  return torch::from_blob(const_cast<float*>(m.data()), {m.rows(), m.cols()},
                          torch::kFloat32)
      .clone();
}

SpanPrediction to_span_prediction(const ModelOutput& out) {
  auto spans = out.spans.detach().to(torch::kCPU, torch::kFloat64).contiguous();
  auto logits = out.logits.detach().to(torch::kCPU, torch::kFloat64).contiguous();
  SpanPrediction p;
  const auto* s = spans.data_ptr<double>();
  const auto* l = logits.data_ptr<double>();
  for (int64_t k = 0; k < spans.size(0); ++k) {
    p.spans.push_back({s[2 * k], s[2 * k + 1]});
    p.confidence_logits.push_back(l[k]);
  }
  return p;
}

SaliencyScores to_saliency_scores(const ModelOutput& out) {
  auto sal = out.saliency.detach().to(torch::kCPU, torch::kFloat64).contiguous();
  const auto* p = sal.data_ptr<double>();
  return SaliencyScores(p, p + sal.numel());
}

torch::Tensor sinusoidal_positions(int64_t length, int64_t dim, torch::Dtype dtype) {
  const auto opts = torch::TensorOptions().dtype(torch::kFloat64);
  auto pos = (torch::arange(length, opts) + 0.5) / static_cast<double>(length) * 2.0 * M_PI;
  const int64_t half = (dim + 1) / 2;
  auto freq = torch::pow(10000.0, -torch::arange(half, opts) / static_cast<double>(half));
  auto angles = pos.unsqueeze(1) * freq.unsqueeze(0);  // [L, half]
  auto enc = torch::stack({angles.sin(), angles.cos()}, 2).reshape({length, 2 * half});
  return enc.narrow(1, 0, dim).to(dtype);
}

EncoderLayerImpl::EncoderLayerImpl(const ModelConfig& c) : dropout_(c.dropout) {
  self_attn_ = register_module(
      "self_attn", MultiheadAttention(c.hidden_dim, c.heads, c.dropout, c.dummy_tokens));
  ff1_ = register_module("ff1", torch::nn::Linear(c.hidden_dim, c.ff_dim));
  ff2_ = register_module("ff2", torch::nn::Linear(c.ff_dim, c.hidden_dim));
  norm1_ = register_module("norm1", torch::nn::LayerNorm(torch::nn::LayerNormOptions({c.hidden_dim})));
  norm2_ = register_module("norm2", torch::nn::LayerNorm(torch::nn::LayerNormOptions({c.hidden_dim})));
}

torch::Tensor EncoderLayerImpl::forward(const torch::Tensor& x) {
  auto h = norm1_(x + drop(self_attn_(x, x, x), dropout_, is_training()));
  auto f = ff2_(drop(torch::relu(ff1_(h)), dropout_, is_training()));
  return norm2_(h + drop(f, dropout_, is_training()));
}

DecoderLayerImpl::DecoderLayerImpl(const ModelConfig& c) : dropout_(c.dropout) {
  self_attn_ = register_module("self_attn", MultiheadAttention(c.hidden_dim, c.heads, c.dropout));
  cross_attn_ = register_module("cross_attn", MultiheadAttention(c.hidden_dim, c.heads, c.dropout));
  ff1_ = register_module("ff1", torch::nn::Linear(c.hidden_dim, c.ff_dim));
  ff2_ = register_module("ff2", torch::nn::Linear(c.ff_dim, c.hidden_dim));
  norm1_ = register_module("norm1", torch::nn::LayerNorm(torch::nn::LayerNormOptions({c.hidden_dim})));
  norm2_ = register_module("norm2", torch::nn::LayerNorm(torch::nn::LayerNormOptions({c.hidden_dim})));
  norm3_ = register_module("norm3", torch::nn::LayerNorm(torch::nn::LayerNormOptions({c.hidden_dim})));
}

torch::Tensor DecoderLayerImpl::forward(const torch::Tensor& tgt, const torch::Tensor& query_pos,
                                        const torch::Tensor& memory) {
  auto q = tgt + query_pos;
  auto x = norm1_(tgt + drop(self_attn_(q, q, tgt), dropout_, is_training()));
  x = norm2_(x + drop(cross_attn_(x + query_pos, memory, memory), dropout_, is_training()));
  auto f = ff2_(drop(torch::relu(ff1_(x)), dropout_, is_training()));
  return norm3_(x + drop(f, dropout_, is_training()));
}

MomentDetrImpl::MomentDetrImpl(const ModelConfig& config) : config_(config) {
  config_.validate();
  const int64_t d = config_.hidden_dim;
  video_proj_ = register_module("video_proj", input_projection(config_.video_dim, d));
  text_proj_ = register_module("text_proj", input_projection(config_.text_dim, d));
  type_embed_ = register_parameter("type_embed", torch::randn({2, d}) * 0.02);
  slot_embed_ = register_parameter("slot_embed", torch::randn({config_.num_slots, d}));
  encoder_ = register_module("encoder", torch::nn::ModuleList());
  for (int i = 0; i < config_.enc_layers; ++i) encoder_->push_back(EncoderLayer(config_));
  decoder_ = register_module("decoder", torch::nn::ModuleList());
  for (int i = 0; i < config_.dec_layers; ++i) decoder_->push_back(DecoderLayer(config_));
  decoder_norm_ = register_module("decoder_norm", torch::nn::LayerNorm(torch::nn::LayerNormOptions({d})));
  span_head_ = register_module(
      "span_head", torch::nn::Sequential(torch::nn::Linear(d, d), torch::nn::ReLU(),
                                         torch::nn::Linear(d, d), torch::nn::ReLU(),
                                         torch::nn::Linear(d, 2)));
  class_head_ = register_module("class_head", torch::nn::Linear(d, 1));
  saliency_head_ = register_module("saliency_head", torch::nn::Linear(d, 1));
}

void MomentDetrImpl::check_inputs(const torch::Tensor& video, const torch::Tensor& text) const {
  auto check = [](const torch::Tensor& t, const char* role, int64_t dim) {
    if (t.dim() != 2) {
      throw ShapeError(std::string(role) + " features must be a 2-d matrix, got " +
                       std::to_string(t.dim()) + " dims");
    }
    if (t.size(0) < 1) throw ShapeError(std::string(role) + " features have no rows");
    if (t.size(1) != dim) {
      throw ShapeError(std::string(role) + " feature dim " + std::to_string(t.size(1)) +
                       " \u2260 model dim " + std::to_string(dim));
    }
  };
  check(video, "video", config_.video_dim);
  check(text, "text", config_.text_dim);
}

torch::Tensor MomentDetrImpl::encode(const torch::Tensor& video, const torch::Tensor& text) {
  check_inputs(video, text);
  const auto dtype = type_embed_.scalar_type();
  auto v = video_proj_->forward(video.to(dtype)) + type_embed_[0];
  auto t = text_proj_->forward(text.to(dtype)) + type_embed_[1];
  if (config_.position_encoding) {
    v = v + sinusoidal_positions(video.size(0), config_.hidden_dim, dtype);
  }
  auto x = torch::cat({v, t}, 0);
  for (const auto& layer : *encoder_) x = layer->as<EncoderLayer>()->forward(x);
  return x;
}

ModelOutput MomentDetrImpl::decode(const torch::Tensor& memory, int64_t num_clips) {
  auto query_pos = slot_embed_;
  if (config_.content_slots) {
    auto pooled = memory.narrow(0, 0, num_clips).mean(0) +
                  memory.narrow(0, num_clips, memory.size(0) - num_clips).mean(0);
    query_pos = query_pos + pooled.unsqueeze(0);
  }
  auto tgt = torch::zeros_like(query_pos);
  for (const auto& layer : *decoder_) {
    tgt = layer->as<DecoderLayer>()->forward(tgt, query_pos, memory);
  }
  tgt = decoder_norm_(tgt);
  ModelOutput out;
  out.spans = torch::sigmoid(span_head_->forward(tgt));
  out.logits = class_head_(tgt).squeeze(1);
  out.saliency = saliency_head_(memory.narrow(0, 0, num_clips)).squeeze(1);
  return out;
}

ModelOutput MomentDetrImpl::forward(const torch::Tensor& video, const torch::Tensor& text) {
  return decode(encode(video, text), video.size(0));
}

ModelOutput MomentDetrImpl::forward(const FeaturePair& pair) {
  return forward(to_tensor(pair.video), to_tensor(pair.text));
}

torch::Tensor MomentDetrImpl::saliency(const torch::Tensor& video, const torch::Tensor& text) {
  auto memory = encode(video, text);
  return saliency_head_(memory.narrow(0, 0, video.size(0))).squeeze(1);
}

void MomentDetrImpl::zero_span_head() {
  torch::NoGradGuard guard;
  auto last = span_head_[span_head_->size() - 1]->as<torch::nn::Linear>();
  last->weight.zero_();
  last->bias.zero_();
}

}  // namespace lighthouse
