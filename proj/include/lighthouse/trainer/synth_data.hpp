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

#include "lighthouse/features/synthetic.hpp"

namespace lighthouse {

// A synthetic train split plus an optional held-out split from the same
// mixing matrix.
struct SynthDataSpec {
  SyntheticSpec base;  // num_samples is ignored; see train/val_samples
  int train_samples = 32;
  int val_samples = 0;
  std::uint64_t seed = 0;
  std::uint64_t val_seed = 1;
};

// YAML mapping with the SyntheticSpec field names plus train_samples,
// val_samples, seed and val_seed. Unknown keys are rejected.
SynthDataSpec load_synth_spec(const std::filesystem::path& path);

struct SynthDataPaths {
  std::filesystem::path train_annotations;
  std::filesystem::path val_annotations;  // empty when val_samples == 0
  std::filesystem::path feature_dir;
};

// Writes <out>/train.jsonl, <out>/val.jsonl and <out>/features/. Validation
// query ids continue after the training ones.
SynthDataPaths write_synthetic_data(const SynthDataSpec& spec, const std::filesystem::path& out);

}  // namespace lighthouse
