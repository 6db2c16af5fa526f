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
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <torch/torch.h>

#include "json.hpp"
#include "lighthouse/model/config.hpp"
#include "lighthouse/model/network.hpp"
#include "lighthouse/model/optim.hpp"

namespace lighthouse {

inline constexpr char kCheckpointMagic[] = "LHCKPT1\n";

// Training-state metadata stored next to the parameters.
struct CheckpointMeta {
  int64_t epoch = 0;
  uint64_t seed = 0;
  std::string config_hash;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

struct Checkpoint {
  ModelConfig config;
  CheckpointMeta meta;
  std::vector<std::pair<std::string, torch::Tensor>> tensors;  // file order
  bool has_optimizer = false;
  int64_t optimizer_step = 0;
  double optimizer_lr = 0.0;
};

// Layout: magic, u64 LE header length, JSON header, then float32 LE tensor
// payload in header order. Optimizer moments are included when `optimizer`
// is given.
void save_checkpoint(const std::filesystem::path& path, MomentDetr& model,
                     const CheckpointMeta& meta, AdamW* optimizer = nullptr);

// Throws IoError, FormatError or LengthError on unreadable or damaged files.
Checkpoint load_checkpoint(const std::filesystem::path& path);

// Builds a model from the stored config and copies the stored parameters.
MomentDetr restore_model(const Checkpoint& ckpt);

// Copies stored parameters into an existing model with the same config.
void load_parameters(const Checkpoint& ckpt, MomentDetr& model);

// Restores moment estimates, step count and learning rate. Throws StateError
// when the checkpoint carries no optimizer state.
void restore_optimizer(const Checkpoint& ckpt, MomentDetr& model, AdamW& optimizer);

// Digest of every parameter value in registration order.
std::string model_parameter_hash(MomentDetr& model);

}  // namespace lighthouse
