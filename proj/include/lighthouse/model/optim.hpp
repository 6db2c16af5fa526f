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

#include <cstdint>
#include <vector>

#include <torch/torch.h>

namespace lighthouse {

struct AdamWOptions {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

// Adam with decoupled weight decay and bias correction. State is kept as
// plain tensors so it can be written to and restored from checkpoints.
class AdamW {
 public:
  AdamW(std::vector<torch::Tensor> params, AdamWOptions options);

  void zero_grad();
  void step();

  double lr() const { return options_.lr; }
  void set_lr(double lr) { options_.lr = lr; }
  int64_t step_count() const { return step_; }
  void set_step_count(int64_t step) { step_ = step; }

  // First and second moment estimates, one per parameter.
  std::vector<torch::Tensor>& exp_avg() { return m_; }
  std::vector<torch::Tensor>& exp_avg_sq() { return v_; }

 private:
  std::vector<torch::Tensor> params_;
  AdamWOptions options_;
  std::vector<torch::Tensor> m_, v_;
  int64_t step_ = 0;
};

}  // namespace lighthouse
