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

#include "lighthouse/model/attention.hpp"

#include <cmath>

#include "lighthouse/errors.hpp"

namespace lighthouse {

AttentionResult scaled_dot_attention(const torch::Tensor& q, const torch::Tensor& k,
                                     const torch::Tensor& v, double dropout, bool train) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.size(-1)));
  auto weights = torch::softmax(torch::matmul(q, k.transpose(-2, -1)) * scale, -1);
  auto used = dropout > 0.0 ? torch::dropout(weights, dropout, train) : weights;
  return {torch::matmul(used, v), weights};
}

AttentionResult dummy_token_cross_attention(const torch::Tensor& q, const torch::Tensor& k,
                                            const torch::Tensor& v,
                                            const torch::Tensor& dummy_k,
                                            const torch::Tensor& dummy_v, double dropout,
                                            bool train) {
  if (!dummy_k.defined() || dummy_k.size(1) == 0) {
    return scaled_dot_attention(q, k, v, dropout, train);
  }
  if (!dummy_v.defined() || dummy_v.sizes() != dummy_k.sizes()) {
    throw ShapeError("dummy keys and dummy values must have the same shape");
  }
  return scaled_dot_attention(q, torch::cat({k, dummy_k}, 1), torch::cat({v, dummy_v}, 1),
                              dropout, train);
}

MultiheadAttentionImpl::MultiheadAttentionImpl(int64_t dim, int64_t heads, double dropout,
                                               int64_t num_dummy)
    : dim_(dim), heads_(heads), dropout_(dropout), num_dummy_(num_dummy) {
  q_proj_ = register_module("q_proj", torch::nn::Linear(dim, dim));
  k_proj_ = register_module("k_proj", torch::nn::Linear(dim, dim));
  v_proj_ = register_module("v_proj", torch::nn::Linear(dim, dim));
  out_proj_ = register_module("out_proj", torch::nn::Linear(dim, dim));
  if (num_dummy_ > 0) {
    dummy_k_ = register_parameter("dummy_k", torch::randn({num_dummy_, dim}) * 0.02);
    dummy_v_ = register_parameter("dummy_v", torch::randn({num_dummy_, dim}) * 0.02);
  }
}

torch::Tensor MultiheadAttentionImpl::forward(const torch::Tensor& query,
                                              const torch::Tensor& key,
                                              const torch::Tensor& value) {
  const int64_t dh = dim_ / heads_;
  auto split = [&](const torch::Tensor& x) {
    return x.view({x.size(0), heads_, dh}).transpose(0, 1);
  };
  auto q = split(q_proj_(query));
  auto k = split(k_proj_(key));
  auto v = split(v_proj_(value));
  torch::Tensor dk, dv;
  if (num_dummy_ > 0) {
    dk = split(dummy_k_);
    dv = split(dummy_v_);
  }
  auto attended = dummy_token_cross_attention(q, k, v, dk, dv, dropout_, is_training()).output;
  return out_proj_(attended.transpose(0, 1).reshape({query.size(0), dim_}));
}

}  // namespace lighthouse
