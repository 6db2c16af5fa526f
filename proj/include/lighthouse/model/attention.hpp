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

namespace lighthouse {

struct AttentionResult {
  torch::Tensor output;   // [H, N, dh]
  torch::Tensor weights;  // [H, N, M + D], rows sum to 1 (before dropout)
};

// Scaled dot-product attention over per-head tensors q [H,N,dh],
// k/v [H,M,dh]. Dropout is applied to the weights used for the output only.
AttentionResult scaled_dot_attention(const torch::Tensor& q, const torch::Tensor& k,
                                     const torch::Tensor& v, double dropout = 0.0,
                                     bool train = false);

// Attention in which D extra key/value rows (dummy_k, dummy_v: [H,D,dh]) are
// appended to the real keys before the softmax, letting queries park mass
// away from the real keys. Undefined or empty dummies give exactly
// scaled_dot_attention.
AttentionResult dummy_token_cross_attention(const torch::Tensor& q, const torch::Tensor& k,
                                            const torch::Tensor& v,
                                            const torch::Tensor& dummy_k,
                                            const torch::Tensor& dummy_v,
                                            double dropout = 0.0, bool train = false);

// Multi-head attention on unbatched [N, d] sequences. `num_dummy` learned
// rows live in the projected key/value space.
class MultiheadAttentionImpl : public torch::nn::Module {
 public:
  MultiheadAttentionImpl(int64_t dim, int64_t heads, double dropout, int64_t num_dummy = 0);

  torch::Tensor forward(const torch::Tensor& query, const torch::Tensor& key,
                        const torch::Tensor& value);

  int64_t num_dummy() const { return num_dummy_; }

 private:
  int64_t dim_;
  int64_t heads_;
  double dropout_;
  int64_t num_dummy_;
  torch::nn::Linear q_proj_{nullptr}, k_proj_{nullptr}, v_proj_{nullptr}, out_proj_{nullptr};
  torch::Tensor dummy_k_, dummy_v_;
};
TORCH_MODULE(MultiheadAttention);

}  // namespace lighthouse
